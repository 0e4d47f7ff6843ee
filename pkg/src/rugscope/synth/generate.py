"""Seeded synthetic NFT project scenarios.

Six scam lifecycles exercising every fraud signal and ground-truth rule,
plus stable and volatile benign collections a correct detector must leave
alone. One integer seed drives a SplitMix64 stream, so scenarios reproduce
byte for byte across runs and platforms.
"""
from __future__ import annotations

import csv
import enum
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from ..errors import InvalidCounts
from ..ingest import build_timeline, write_manifest
from ..records import (
    DEAD_ADDRESS,
    MARKET_OPENSEA_SEAPORT,
    MARKET_OPENSEA_WYVERN,
    NULL_ADDRESS,
    DirectPayment,
    ProjectMetadata,
    ProjectTimeline,
    SocialPlatform,
    SocialSnapshot,
    SocialStatus,
    TokenStandard,
    TradeRecord,
    TransferEvent,
    Withdrawal,
)
from ..tricks import levenshtein_ratio
from .prng import SplitMix64

HOUR = 3600
DAY = 86400

#: 2022-01-01T00:00:00Z; every scenario timeline starts on or after this
BASE_TS = 1640995200

#: scams must finish collapsing and go 30+ days quiet before the horizon,
#: and liveness needs 60 days of age, so a horizon under this is unusable
MIN_HORIZON_DAYS = 90

WEI = 10**18


class Archetype(str, enum.Enum):
    PUMP_AND_DUMP = "pump_and_dump"
    MINT_FEE_WITHDRAW = "mint_fee_withdraw"
    WASH_TRADING = "wash_trading"
    MIDDLEMAN = "middleman"
    HIDDEN_MINT = "hidden_mint"
    COUNTERFEIT = "counterfeit"
    BENIGN_STABLE = "benign_stable"
    BENIGN_VOLATILE = "benign_volatile"


SCAM_ARCHETYPES = frozenset(
    {
        Archetype.PUMP_AND_DUMP,
        Archetype.MINT_FEE_WITHDRAW,
        Archetype.WASH_TRADING,
        Archetype.MIDDLEMAN,
        Archetype.HIDDEN_MINT,
        Archetype.COUNTERFEIT,
    }
)
BENIGN_ARCHETYPES = frozenset({Archetype.BENIGN_STABLE, Archetype.BENIGN_VOLATILE})

#: archetypes whose creator drains the treasury at the collapse moment
_WITHDRAWING = frozenset(
    {
        Archetype.MINT_FEE_WITHDRAW,
        Archetype.WASH_TRADING,
        Archetype.MIDDLEMAN,
        Archetype.HIDDEN_MINT,
        Archetype.COUNTERFEIT,
    }
)

REFERENCE_NAMES: tuple[str, ...] = (
    "Bored Banana Society",
    "Celestial Koi Garden",
    "CryptoMycelium Labs",
    "Dust Bunny Brigade",
    "Ether Orchid Estate",
    "Frostpunk Foxes",
    "Galactic Gecko Guild",
    "Holographic Herons",
    "Iron Lotus Legion",
    "Jade Serpent Syndicate",
    "Kinetic Kraken Klub",
    "Lunar Llama Lounge",
    "Midnight Mantis Order",
    "Neon Narwhal Navy",
    "Obsidian Owl Outpost",
    "Prismatic Panda Parade",
)

_NAME_HEADS = (
    "Amber", "Basalt", "Cinder", "Drifting", "Electric", "Feral", "Gilded",
    "Hollow", "Ivory", "Jagged", "Copper", "Molten", "Nimbus", "Opal",
    "Quartz", "Rusty", "Silent", "Tidal", "Umber", "Velvet", "Woven",
    "Zephyr", "Crimson", "Sable",
)
_NAME_BODIES = (
    "Falcon", "Badger", "Cuttlefish", "Dingo", "Egret", "Ferret", "Gibbon",
    "Heron", "Ibex", "Jackal", "Kestrel", "Lemur", "Marmot", "Newt",
    "Ocelot", "Pelican", "Quail", "Raccoon", "Stoat", "Tapir", "Urchin",
    "Vole", "Walrus", "Yak",
)
_NAME_TAILS = (
    "Collective", "Assembly", "Cartel", "District", "Ensemble", "Foundry",
    "Habitat", "Institute", "Junction", "Kingdom", "Commons", "Workshop",
)


@dataclass(frozen=True)
class ScenarioProject:
    """One generated project plus its ground truth."""

    timeline: ProjectTimeline
    archetype: Archetype
    t_rp: int | None

    @property
    def is_scam(self) -> bool:
        return self.archetype in SCAM_ARCHETYPES


@dataclass(frozen=True)
class Scenario:
    seed: int
    horizon_days: int
    collection_end: int
    projects: tuple[ScenarioProject, ...]
    reference_names: tuple[str, ...]

    def timelines(self) -> dict[str, ProjectTimeline]:
        return {
            p.timeline.project: p.timeline
            for p in sorted(self.projects, key=lambda sp: sp.timeline.project)
        }

    def scams(self) -> tuple[ScenarioProject, ...]:
        return tuple(p for p in self.projects if p.is_scam)

    def benigns(self) -> tuple[ScenarioProject, ...]:
        return tuple(p for p in self.projects if not p.is_scam)


def parse_counts_spec(spec: str) -> dict[Archetype, int]:
    """Parse "name=count,name=count". Names are archetype values plus the
    aggregates "scam" and "benign", which spread a total round-robin over
    their member archetypes."""
    out: dict[Archetype, int] = {a: 0 for a in Archetype}
    if not spec.strip():
        raise InvalidCounts("empty counts spec")
    for part in spec.split(","):
        name, sep, raw = part.partition("=")
        name = name.strip()
        if not sep:
            raise InvalidCounts(f"counts entry {part!r} is not name=count")
        try:
            count = int(raw)
        except ValueError:
            raise InvalidCounts(f"count {raw!r} for {name!r} is not an integer") from None
        if count < 0:
            raise InvalidCounts(f"count for {name!r} is negative")
        if name == "scam":
            group = sorted(SCAM_ARCHETYPES, key=lambda a: a.value)
        elif name == "benign":
            group = sorted(BENIGN_ARCHETYPES, key=lambda a: a.value)
        else:
            try:
                group = [Archetype(name)]
            except ValueError:
                raise InvalidCounts(f"unknown archetype {name!r}") from None
        for i in range(count):
            out[group[i % len(group)]] += 1
    return out


def _normalized_counts(counts: Mapping[Archetype | str, int]) -> dict[Archetype, int]:
    out: dict[Archetype, int] = {a: 0 for a in Archetype}
    for key, val in counts.items():
        try:
            arch = key if isinstance(key, Archetype) else Archetype(key)
        except ValueError:
            raise InvalidCounts(f"unknown archetype {key!r}") from None
        if isinstance(val, bool) or not isinstance(val, int):
            raise InvalidCounts(f"count for {arch.value} is not an integer: {val!r}")
        if val < 0:
            raise InvalidCounts(f"count for {arch.value} is negative")
        out[arch] += val
    if sum(out.values()) <= 0:
        raise InvalidCounts("total project count must be positive")
    return out


# ---------------------------------------------------------------------------
# names


def _fresh_name(rng: SplitMix64) -> str:
    """A collection name verifiably far from every reference name."""
    while True:
        name = (
            f"{rng.choice(_NAME_HEADS)} {rng.choice(_NAME_BODIES)} "
            f"{rng.choice(_NAME_TAILS)}"
        )
        if all(levenshtein_ratio(name, ref) < 0.85 for ref in REFERENCE_NAMES):
            return name


def _counterfeit_name(rng: SplitMix64) -> str:
    """A reference name verbatim or with one or two letters swapped."""
    base = rng.choice(REFERENCE_NAMES)
    n_subs = rng.randint(0, 2)
    chars = list(base)
    letter_positions = [i for i, c in enumerate(chars) if c.isalpha()]
    picked: set[int] = set()
    while len(picked) < n_subs:
        i = rng.choice(letter_positions)
        if i in picked:
            continue
        picked.add(i)
        old = chars[i]
        pool = "abcdefghijklmnopqrstuvwxyz"
        repl = rng.choice(pool)
        while repl == old.lower():
            repl = rng.choice(pool)
        chars[i] = repl.upper() if old.isupper() else repl
    return "".join(chars)


# ---------------------------------------------------------------------------
# scam lifecycle


def _distinct_pair(rng: SplitMix64, pool: list[str]) -> tuple[str, str]:
    a = rng.choice(pool)
    b = rng.choice(pool)
    while b == a:
        b = rng.choice(pool)
    return a, b


def _scam_project(
    rng: SplitMix64, arch: Archetype, collection_end: int, spread_days: int
) -> ScenarioProject:
    project = rng.address()
    creator = rng.address()
    launch = BASE_TS + (rng.randint(0, spread_days * DAY) if spread_days > 0 else 0)
    first_mint = launch + rng.randint(HOUR, DAY)
    pump_days = rng.randint(10, 25)
    collapse = first_mint + pump_days * DAY
    users = [rng.address() for _ in range(rng.randint(30, 60))]
    middleman = rng.address() if arch is Archetype.MIDDLEMAN else None

    name = (
        _counterfeit_name(rng) if arch is Archetype.COUNTERFEIT else _fresh_name(rng)
    )

    transfers: list[TransferEvent] = []
    n_mint = rng.randint(60, 140)
    mint_span = rng.randint(3 * DAY, 8 * DAY)
    mint_fee = 0 if arch is Archetype.MIDDLEMAN else rng.randint(2 * WEI // 100, 8 * WEI // 100)
    for token_id in range(1, n_mint + 1):
        ts = first_mint if token_id == 1 else first_mint + rng.randint(0, mint_span)
        to = middleman if middleman is not None else rng.choice(users)
        transfers.append(
            TransferEvent(
                project, token_id, NULL_ADDRESS, to, 1, mint_fee, ts,
                rng.tx_hash(), TokenStandard.ERC721,
            )
        )

    for _ in range(rng.randint(40, 100)):
        ts = first_mint + rng.randint(0, collapse - first_mint)
        if middleman is not None:
            frm, to = middleman, rng.choice(users)
        else:
            frm, to = _distinct_pair(rng, users)
        transfers.append(
            TransferEvent(
                project, rng.randint(1, n_mint), frm, to, 1, 0, ts,
                rng.tx_hash(), TokenStandard.ERC721,
            )
        )

    n_burn = rng.randint(0, 5)
    for _ in range(n_burn):
        ts = first_mint + rng.randint(0, collapse - first_mint)
        transfers.append(
            TransferEvent(
                project, rng.randint(1, n_mint), rng.choice(users), DEAD_ADDRESS,
                1, 0, ts, rng.tx_hash(), TokenStandard.ERC721,
            )
        )

    if arch is Archetype.HIDDEN_MINT:
        declared = int((n_mint - n_burn) * rng.uniform(0.7, 0.9))
    else:
        declared = n_mint + rng.randint(0, 50)

    # price ramp, then a terminal crash whose floor nothing ever re-trades
    trades: list[TradeRecord] = []
    n_ramp = rng.randint(30, 80)
    p0 = rng.uniform(5.0, 20.0)
    peak_mult = rng.uniform(60.0, 150.0)
    ramp_lo = first_mint + HOUR
    ramp_hi = collapse - DAY
    ramp_times = sorted(rng.randint(ramp_lo, ramp_hi) for _ in range(n_ramp))
    for k, ts in enumerate(ramp_times):
        price = p0 * peak_mult ** (k / (n_ramp - 1)) * rng.uniform(0.9, 1.1)
        buyer = rng.choice(users)
        if middleman is not None:
            seller = middleman
        else:
            seller = rng.choice(users)
            while seller == buyer:
                seller = rng.choice(users)
        trades.append(
            TradeRecord(
                project, rng.randint(1, n_mint), buyer, seller, price, ts,
                MARKET_OPENSEA_SEAPORT,
            )
        )

    if arch is Archetype.WASH_TRADING:
        washer_a = rng.address()
        washer_b = rng.address()
        for w in range(rng.randint(12, 30)):
            ts = rng.randint(ramp_lo, ramp_hi)
            level = (ts - ramp_lo) / (ramp_hi - ramp_lo)
            price = p0 * peak_mult**level * rng.uniform(0.9, 1.1)
            buyer, seller = (washer_a, washer_b) if w % 2 == 0 else (washer_b, washer_a)
            trades.append(
                TradeRecord(
                    project, rng.randint(1, n_mint), buyer, seller, price, ts,
                    MARKET_OPENSEA_WYVERN,
                )
            )

    n_collapse = rng.randint(1, 3)
    factor = rng.uniform(250.0, 600.0)
    final_price = p0 * peak_mult / factor
    for m in range(n_collapse):
        steps_left = n_collapse - 1 - m
        ts = collapse - steps_left * 600
        price = final_price * 8.0**steps_left
        buyer = rng.choice(users)
        seller = middleman if middleman is not None else creator
        trades.append(
            TradeRecord(
                project, n_mint - m, buyer, seller, price, ts,
                MARKET_OPENSEA_SEAPORT,
            )
        )

    withdrawals: list[Withdrawal] = []
    if arch in _WITHDRAWING:
        big = rng.randint(5 * WEI, 50 * WEI)
        withdrawals.append(Withdrawal(project, big, creator, collapse))
        for _ in range(rng.randint(0, 2)):
            ts = first_mint + rng.randint(DAY, (pump_days - 1) * DAY)
            withdrawals.append(Withdrawal(project, rng.randint(WEI // 10, big // 2), creator, ts))

    mid_ts = first_mint + (collapse - first_mint) // 2
    socials = [
        SocialSnapshot(
            project, SocialPlatform.TWITTER, SocialStatus.ACTIVE, mid_ts,
            mid_ts - rng.randint(0, DAY),
        ),
        SocialSnapshot(
            project, SocialPlatform.DISCORD, SocialStatus.ACTIVE,
            mid_ts + rng.randint(0, DAY),
        ),
    ]
    if arch is Archetype.PUMP_AND_DUMP:
        # account stays up but falls silent the moment the price dies
        socials.append(
            SocialSnapshot(
                project, SocialPlatform.TWITTER, SocialStatus.ACTIVE,
                collapse + 2 * DAY, collapse,
            )
        )
    else:
        dead = SocialStatus.SUSPENDED if rng.random() < 0.5 else SocialStatus.DELETED
        socials.append(
            SocialSnapshot(
                project, SocialPlatform.TWITTER, dead,
                collapse + rng.randint(0, 3 * DAY),
            )
        )

    payments: list[DirectPayment] = []
    if arch is Archetype.MIDDLEMAN:
        for _ in range(rng.randint(3, 10)):
            ts = first_mint + rng.randint(0, collapse - first_mint)
            payments.append(
                DirectPayment(project, rng.randint(WEI // 10, 5 * WEI), rng.address(), ts)
            )

    metadata = ProjectMetadata(
        project=project,
        name=name,
        creator=creator,
        launch_timestamp=launch,
        standard=TokenStandard.ERC721,
        declared_total_supply=declared,
    )
    timeline = build_timeline(
        metadata,
        transfers,
        trades=trades,
        socials=socials,
        withdrawals=withdrawals,
        direct_payments=payments,
    )
    return ScenarioProject(timeline=timeline, archetype=arch, t_rp=collapse)


# ---------------------------------------------------------------------------
# benign lifecycle


def _benign_project(
    rng: SplitMix64, arch: Archetype, collection_end: int, spread_days: int
) -> ScenarioProject:
    project = rng.address()
    creator = rng.address()
    launch = BASE_TS + (rng.randint(0, spread_days * DAY) if spread_days > 0 else 0)
    first_mint = launch + rng.randint(HOUR, 2 * DAY)
    users = [rng.address() for _ in range(rng.randint(40, 80))]
    name = _fresh_name(rng)

    transfers: list[TransferEvent] = []
    n_mint = rng.randint(50, 120)
    mint_span = rng.randint(5 * DAY, 15 * DAY)
    mint_fee = rng.randint(2 * WEI // 100, 6 * WEI // 100)
    for token_id in range(1, n_mint + 1):
        ts = first_mint if token_id == 1 else first_mint + rng.randint(0, mint_span)
        value = mint_fee if rng.random() < 0.5 else 0
        transfers.append(
            TransferEvent(
                project, token_id, NULL_ADDRESS, rng.choice(users), 1, value, ts,
                rng.tx_hash(), TokenStandard.ERC721,
            )
        )

    for _ in range(rng.randint(60, 160)):
        ts = first_mint + rng.randint(0, collection_end - first_mint)
        frm, to = _distinct_pair(rng, users)
        transfers.append(
            TransferEvent(
                project, rng.randint(1, n_mint), frm, to, 1, 0, ts,
                rng.tx_hash(), TokenStandard.ERC721,
            )
        )
    # a healthy project keeps moving right up to the horizon
    for _ in range(rng.randint(8, 15)):
        ts = collection_end - rng.randint(0, 25 * DAY - 1)
        frm, to = _distinct_pair(rng, users)
        transfers.append(
            TransferEvent(
                project, rng.randint(1, n_mint), frm, to, 1, 0, ts,
                rng.tx_hash(), TokenStandard.ERC721,
            )
        )

    for _ in range(rng.randint(0, 3)):
        ts = first_mint + rng.randint(0, collection_end - first_mint)
        transfers.append(
            TransferEvent(
                project, rng.randint(1, n_mint), rng.choice(users), DEAD_ADDRESS,
                1, 0, ts, rng.tx_hash(), TokenStandard.ERC721,
            )
        )

    # mean-reverting log price; clamps keep the worst drop under the bar
    if arch is Archetype.BENIGN_STABLE:
        sigma, s_lo, s_hi = 0.08, math.log(0.25), math.log(6.0)
    else:
        sigma, s_lo, s_hi = 0.35, math.log(0.15), math.log(8.0)
    trades: list[TradeRecord] = []
    base_price = rng.uniform(10.0, 200.0)
    trade_times = sorted(
        rng.randint(first_mint + HOUR, collection_end)
        for _ in range(rng.randint(40, 120))
    )
    s = 0.0
    for ts in trade_times:
        s = min(s_hi, max(s_lo, 0.95 * s + rng.gauss(0.0, sigma)))
        price = base_price * math.exp(s)
        buyer, seller = _distinct_pair(rng, users)
        trades.append(
            TradeRecord(
                project, rng.randint(1, n_mint), buyer, seller, price, ts,
                MARKET_OPENSEA_SEAPORT, creator_fee_usd=price * 0.025,
            )
        )

    socials: list[SocialSnapshot] = []
    snap = first_mint + rng.randint(5 * DAY, 15 * DAY)
    while snap < collection_end - 10 * DAY:
        socials.append(
            SocialSnapshot(
                project, SocialPlatform.TWITTER, SocialStatus.ACTIVE, snap,
                snap - rng.randint(0, 5 * DAY),
            )
        )
        socials.append(
            SocialSnapshot(
                project, SocialPlatform.DISCORD, SocialStatus.ACTIVE,
                snap + rng.randint(0, DAY),
            )
        )
        snap += rng.randint(30 * DAY, 45 * DAY)
    final_snap = collection_end - rng.randint(0, 5 * DAY)
    socials.append(
        SocialSnapshot(
            project, SocialPlatform.TWITTER, SocialStatus.ACTIVE, final_snap,
            final_snap - rng.randint(0, 5 * DAY),
        )
    )
    socials.append(
        SocialSnapshot(
            project, SocialPlatform.DISCORD, SocialStatus.ACTIVE, final_snap,
        )
    )

    metadata = ProjectMetadata(
        project=project,
        name=name,
        creator=creator,
        launch_timestamp=launch,
        standard=TokenStandard.ERC721,
        declared_total_supply=n_mint + rng.randint(0, 50),
    )
    timeline = build_timeline(metadata, transfers, trades=trades, socials=socials)
    return ScenarioProject(timeline=timeline, archetype=arch, t_rp=None)


# ---------------------------------------------------------------------------
# entry points


def generate(
    seed: int,
    counts: Mapping[Archetype | str, int],
    horizon_days: int = 180,
    launch_spread_days: int | None = None,
) -> Scenario:
    """Build a reproducible scenario of `counts[archetype]` projects each.

    `horizon_days` sets the collection end relative to the scenario epoch;
    `launch_spread_days` caps how late a project may launch (default leaves
    every project at least 90 days of history).
    """
    norm = _normalized_counts(counts)
    if horizon_days < MIN_HORIZON_DAYS:
        raise InvalidCounts(
            f"horizon_days must be at least {MIN_HORIZON_DAYS}, got {horizon_days}"
        )
    if launch_spread_days is None:
        launch_spread_days = horizon_days - MIN_HORIZON_DAYS
    if not 0 <= launch_spread_days <= horizon_days - MIN_HORIZON_DAYS:
        raise InvalidCounts(
            f"launch_spread_days must be in [0, {horizon_days - MIN_HORIZON_DAYS}], "
            f"got {launch_spread_days}"
        )
    collection_end = BASE_TS + horizon_days * DAY
    master = SplitMix64(seed)
    projects: list[ScenarioProject] = []
    for arch in Archetype:
        build = _scam_project if arch in SCAM_ARCHETYPES else _benign_project
        for _ in range(norm[arch]):
            projects.append(build(master.spawn(), arch, collection_end, launch_spread_days))
    return Scenario(
        seed=seed,
        horizon_days=horizon_days,
        collection_end=collection_end,
        projects=tuple(projects),
        reference_names=REFERENCE_NAMES,
    )


def write_scenario(scenario: Scenario, out_dir: str | os.PathLike) -> Path:
    """Write project streams + manifest.json, labels.csv, reference_names.txt
    under out_dir; returns the manifest path."""
    base = Path(out_dir)
    base.mkdir(parents=True, exist_ok=True)
    manifest_path = write_manifest(base, [p.timeline for p in scenario.projects])
    by_addr = sorted(scenario.projects, key=lambda sp: sp.timeline.project)
    with open(base / "labels.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["project", "label", "archetype", "t_rp"])
        for sp in by_addr:
            writer.writerow(
                [
                    sp.timeline.project,
                    "1" if sp.is_scam else "0",
                    sp.archetype.value,
                    "" if sp.t_rp is None else sp.t_rp,
                ]
            )
    (base / "reference_names.txt").write_text(
        "".join(name + "\n" for name in scenario.reference_names)
    )
    return manifest_path
