"""The eight scam-trick analyzers and their consolidated report.

Explicit tricks leave direct on-chain traces (hidden mints, unapproved
transfers, URI swaps); implicit ones need context (fee withdrawal after
paid mints, name counterfeiting, wash trading, middleman reselling, bonus
creator fees).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import EmptyReferenceList, MissingSupply, NotApplicable
from .records import (
    MARKET_OPENSEA_WYVERN,
    ApprovalEvent,
    ApprovalScope,
    ProjectTimeline,
    TokenStandard,
    TradeRecord,
    TransferKind,
)

DEFAULT_WASH_THRESHOLD = 10
DEFAULT_RATIO_HIGH = 0.95
DEFAULT_RATIO_MEDIUM = 0.90


class Trick(str, enum.Enum):
    HIDDEN_MINT = "HiddenMint"
    UNAPPROVED_TRANSFER = "UnapprovedTransfer"
    URI_REPLACEMENT = "UriReplacement"
    MINT_FEE_WITHDRAW = "MintFeeWithdraw"
    COUNTERFEIT = "Counterfeit"
    WASH_TRADING = "WashTrading"
    MIDDLEMAN_RESELLING = "MiddlemanReselling"
    BONUS_CREATOR_FEE = "BonusCreatorFee"


EXPLICIT_TRICKS = frozenset(
    {Trick.HIDDEN_MINT, Trick.UNAPPROVED_TRANSFER, Trick.URI_REPLACEMENT}
)


@dataclass(frozen=True)
class TrickFinding:
    trick: Trick
    payload: dict

    def __post_init__(self) -> None:
        if not self.payload:
            raise ValueError("a finding must carry a payload")

    def to_json_dict(self) -> dict:
        return {"trick": self.trick.value, "payload": self.payload}


@dataclass(frozen=True)
class TrickReport:
    project: str
    findings: tuple[TrickFinding, ...]
    explicit_any: bool = field(init=False)
    implicit_any: bool = field(init=False)

    def __post_init__(self) -> None:
        tricks = {f.trick for f in self.findings}
        object.__setattr__(self, "explicit_any", bool(tricks & EXPLICIT_TRICKS))
        object.__setattr__(self, "implicit_any", bool(tricks - EXPLICIT_TRICKS))

    def to_json_dict(self) -> dict:
        return {
            "project": self.project,
            "explicit_any": self.explicit_any,
            "implicit_any": self.implicit_any,
            "findings": [f.to_json_dict() for f in self.findings],
        }


# ---------------------------------------------------------------------------
# approval graph


class ApprovalGraph:
    """Directed owner -> operator edges holding time-ordered approval
    entries; authorization queries replay entries up to a timestamp."""

    def __init__(self) -> None:
        self._edges: dict[tuple[str, str], list[ApprovalEvent]] = {}

    def add(self, event: ApprovalEvent) -> None:
        self._edges.setdefault((event.owner, event.operator), []).append(event)

    def is_authorized(self, owner: str, operator: str, token_id: int, t: int) -> bool:
        """True when a grant covering token_id is live at time t (a grant at
        exactly t counts; a matching later revoke does not reach back)."""
        entries = self._edges.get((owner, operator))
        if not entries:
            return False
        all_live = False
        tokens: set[int] = set()
        for e in entries:
            if e.timestamp > t:
                break
            if e.scope is ApprovalScope.ALL:
                all_live = e.granted
            elif e.granted:
                tokens.add(e.token_id)
            else:
                tokens.discard(e.token_id)
        return all_live or token_id in tokens


def build_approval_graph(approvals: Sequence[ApprovalEvent]) -> ApprovalGraph:
    graph = ApprovalGraph()
    for ev in sorted(approvals, key=lambda a: a.timestamp):
        graph.add(ev)
    return graph


# ---------------------------------------------------------------------------
# trade pair graph


@dataclass
class PairStats:
    count: int = 0
    volume_usd: float = 0.0
    a_to_b: int = 0
    b_to_a: int = 0


class TradePairGraph:
    """Per unordered address pair: trade count, USD volume, and the two
    directional counts."""

    def __init__(self) -> None:
        self.pairs: dict[tuple[str, str], PairStats] = {}

    def add(self, trade: TradeRecord) -> None:
        a, b = sorted((trade.buyer, trade.seller))
        stats = self.pairs.setdefault((a, b), PairStats())
        stats.count += 1
        stats.volume_usd += trade.price_usd
        if trade.seller == a:
            stats.a_to_b += 1
        else:
            stats.b_to_a += 1


def build_trade_pair_graph(trades: Sequence[TradeRecord]) -> TradePairGraph:
    graph = TradePairGraph()
    for t in trades:
        graph.add(t)
    return graph


# ---------------------------------------------------------------------------
# explicit tricks


def detect_hidden_mint(timeline: ProjectTimeline) -> TrickFinding | None:
    """More tokens in circulation than the contract ever promised."""
    md = timeline.metadata
    if md.standard is not TokenStandard.ERC721:
        raise NotApplicable("circulation counting needs one-of-a-kind tokens")
    if md.declared_total_supply is None:
        raise MissingSupply(f"{md.project} declared no total supply")
    minted = sum(ev.quantity for ev in timeline.transfers if ev.kind is TransferKind.MINT)
    burned = sum(ev.quantity for ev in timeline.transfers if ev.kind is TransferKind.BURN)
    circulating = minted - burned
    if circulating <= md.declared_total_supply:
        return None
    return TrickFinding(
        Trick.HIDDEN_MINT,
        {"circulating": circulating, "declared": md.declared_total_supply},
    )


def detect_unapproved_transfers(
    timeline: ProjectTimeline, graph: ApprovalGraph
) -> TrickFinding | None:
    """Swaps initiated by someone the owner never approved."""
    flagged = []
    for ev in timeline.transfers:
        if ev.kind is not TransferKind.SWAP:
            continue
        initiator = ev.initiator
        if initiator == ev.from_addr:
            continue
        if graph.is_authorized(ev.from_addr, initiator, ev.token_id, ev.timestamp):
            continue
        flagged.append(
            {
                "token_id": ev.token_id,
                "from": ev.from_addr,
                "operator": initiator,
                "timestamp": ev.timestamp,
                "tx_hash": ev.tx_hash,
            }
        )
    if not flagged:
        return None
    return TrickFinding(
        Trick.UNAPPROVED_TRANSFER, {"count": len(flagged), "transfers": flagged}
    )


def detect_uri_replacement(timeline: ProjectTimeline) -> TrickFinding | None:
    """Token metadata URIs being set or swapped out; rewriting a token's
    current URI to itself does not count."""
    last_uri: dict[int, str] = {}
    count = 0
    tokens: set[int] = set()
    initiators: set[str] = set()
    for uc in timeline.uri_changes:
        if last_uri.get(uc.token_id) != uc.new_uri:
            count += 1
            tokens.add(uc.token_id)
            initiators.add(uc.initiator)
        last_uri[uc.token_id] = uc.new_uri
    if count == 0:
        return None
    return TrickFinding(
        Trick.URI_REPLACEMENT,
        {"count": count, "tokens": sorted(tokens), "initiators": sorted(initiators)},
    )


# ---------------------------------------------------------------------------
# implicit tricks


def detect_mint_fee_withdraw(timeline: ProjectTimeline) -> TrickFinding | None:
    """Mint fees charged, then Ether pulled out of the contract."""
    paid_mints = sum(
        1 for ev in timeline.transfers if ev.kind is TransferKind.MINT and ev.value_wei > 0
    )
    if paid_mints == 0 or not timeline.withdrawals:
        return None
    total = sum(w.amount_wei for w in timeline.withdrawals)
    return TrickFinding(
        Trick.MINT_FEE_WITHDRAW,
        {
            "total_withdrawn_wei": total,
            "withdrawal_count": len(timeline.withdrawals),
            "paid_mint_count": paid_mints,
        },
    )


def levenshtein_distance(a: str, b: str) -> int:
    """Unit-cost edit distance over Unicode scalar values.

    Row-wise dynamic program; the sequential insertion chain is resolved
    with a running prefix minimum so each row is pure array arithmetic.
    """
    if a == b:
        return 0
    n, m = len(a), len(b)
    if n == 0:
        return m
    if m == 0:
        return n
    a_codes = np.fromiter((ord(c) for c in a), dtype=np.int64, count=n)
    b_codes = np.fromiter((ord(c) for c in b), dtype=np.int64, count=m)
    idx = np.arange(1, m + 1, dtype=np.int64)
    prev = np.arange(m + 1, dtype=np.int64)
    cur = np.empty(m + 1, dtype=np.int64)
    for i in range(1, n + 1):
        sub = prev[:-1] + (b_codes != a_codes[i - 1])
        best = np.minimum(sub, prev[1:] + 1)
        run = np.minimum.accumulate(best - idx)
        cur[0] = i
        cur[1:] = idx + np.minimum(run, i)
        prev, cur = cur, prev
    return int(prev[m])


def levenshtein_ratio(a: str, b: str) -> float:
    """((|a|+|b|) - lev(a,b)) / (|a|+|b|); 1.0 for two empty strings."""
    total = len(a) + len(b)
    if total == 0:
        return 1.0
    return (total - levenshtein_distance(a, b)) / total


def detect_counterfeit(
    name: str,
    reference_names: Sequence[str],
    ratio_high: float = DEFAULT_RATIO_HIGH,
    ratio_medium: float = DEFAULT_RATIO_MEDIUM,
) -> TrickFinding | None:
    """Name-squatting against a list of well-known collection names.

    Tiers are disjoint: identical (exact match after trimming surrounding
    whitespace, case-sensitive), high (ratio >= ratio_high), medium
    (ratio_medium <= ratio < ratio_high).
    """
    if not reference_names:
        raise EmptyReferenceList("need at least one reference name")
    trimmed = name.strip()
    identical: list[str] = []
    high: list[dict] = []
    medium: list[dict] = []
    for ref in reference_names:
        ref_trimmed = ref.strip()
        if trimmed == ref_trimmed:
            identical.append(ref)
            continue
        ratio = levenshtein_ratio(trimmed, ref_trimmed)
        if ratio >= ratio_high:
            high.append({"reference": ref, "ratio": ratio})
        elif ratio >= ratio_medium:
            medium.append({"reference": ref, "ratio": ratio})
    if not identical and not high and not medium:
        return None
    return TrickFinding(
        Trick.COUNTERFEIT,
        {"name": name, "identical": identical, "high": high, "medium": medium},
    )


def detect_wash_trading(
    trades: Sequence[TradeRecord], threshold: int = DEFAULT_WASH_THRESHOLD
) -> TrickFinding | None:
    """Address pairs trading with each other more than `threshold` times."""
    graph = build_trade_pair_graph(trades)
    flagged = []
    for (a, b), stats in sorted(graph.pairs.items()):
        if stats.count > threshold:
            flagged.append(
                {
                    "a": a,
                    "b": b,
                    "count": stats.count,
                    "volume_usd": stats.volume_usd,
                    "a_to_b": stats.a_to_b,
                    "b_to_a": stats.b_to_a,
                }
            )
    if not flagged:
        return None
    return TrickFinding(Trick.WASH_TRADING, {"pairs": flagged})


def detect_middleman_reselling(timeline: ProjectTimeline) -> TrickFinding | None:
    """Whole collection minted to one address that outsiders then paid."""
    recipients = {
        ev.to_addr for ev in timeline.transfers if ev.kind is TransferKind.MINT
    }
    if len(recipients) != 1:
        return None
    middleman = next(iter(recipients))
    insiders = {middleman, timeline.metadata.creator}
    payments = [p for p in timeline.direct_payments if p.from_addr not in insiders]
    if not payments:
        return None
    mint_count = sum(
        1 for ev in timeline.transfers if ev.kind is TransferKind.MINT
    )
    return TrickFinding(
        Trick.MIDDLEMAN_RESELLING,
        {
            "middleman": middleman,
            "mint_count": mint_count,
            "payment_total_wei": sum(p.amount_wei for p in payments),
            "payer_count": len({p.from_addr for p in payments}),
        },
    )


def detect_creator_fee(
    timeline: ProjectTimeline, wyvern_only: bool = False
) -> TrickFinding | None:
    """Creator fees collected on secondary trades; optionally restricted to
    the one marketplace protocol that pays them out automatically."""
    trades = timeline.trades
    if wyvern_only:
        trades = tuple(t for t in trades if t.market == MARKET_OPENSEA_WYVERN)
    contributing = [t for t in trades if t.creator_fee_usd > 0]
    if not contributing:
        return None
    return TrickFinding(
        Trick.BONUS_CREATOR_FEE,
        {
            "total_fee_usd": sum(t.creator_fee_usd for t in contributing),
            "trade_count": len(contributing),
        },
    )


# ---------------------------------------------------------------------------
# consolidated report


def analyze_tricks(
    timeline: ProjectTimeline,
    reference_names: Sequence[str] = (),
    wash_threshold: int = DEFAULT_WASH_THRESHOLD,
    ratio_high: float = DEFAULT_RATIO_HIGH,
    ratio_medium: float = DEFAULT_RATIO_MEDIUM,
    wyvern_only: bool = False,
) -> TrickReport:
    """Run every applicable analyzer and collect the findings.

    Hidden-mint analysis is skipped where it does not apply; counterfeit
    matching is skipped without reference names; middleman analysis is
    skipped without mints.
    """
    findings: list[TrickFinding] = []

    try:
        f = detect_hidden_mint(timeline)
        if f:
            findings.append(f)
    except (NotApplicable, MissingSupply):
        pass

    f = detect_unapproved_transfers(timeline, build_approval_graph(timeline.approvals))
    if f:
        findings.append(f)

    f = detect_uri_replacement(timeline)
    if f:
        findings.append(f)

    f = detect_mint_fee_withdraw(timeline)
    if f:
        findings.append(f)

    if reference_names:
        f = detect_counterfeit(
            timeline.metadata.name, reference_names, ratio_high, ratio_medium
        )
        if f:
            findings.append(f)

    f = detect_wash_trading(timeline.trades, wash_threshold)
    if f:
        findings.append(f)

    if any(ev.kind is TransferKind.MINT for ev in timeline.transfers):
        f = detect_middleman_reselling(timeline)
        if f:
            findings.append(f)

    f = detect_creator_fee(timeline, wyvern_only)
    if f:
        findings.append(f)

    return TrickReport(project=timeline.project, findings=tuple(findings))
