"""Fixed-schema feature extraction for a (timeline, cutoff) pair.

55 features in a frozen canonical order: 9 time-series shapes, 15 transfer-
log statistics, 31 secondary-market statistics. A feature whose defining
record set or denominator is empty is -1; plain counts and volumes are 0.
"""
from __future__ import annotations

import csv
import os
from bisect import bisect_left
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CutoffBeforeLaunch
from .records import (
    BURN_ADDRESSES,
    ProjectTimeline,
    TradeRecord,
    TransferKind,
)

DAY = 86400

TIME_SERIES_FEATURE_NAMES: tuple[str, ...] = (
    "t_launch_and_mint",
    "p_transfer",
    "p_mint",
    "p_swap",
    "p_burn",
    "p_trade",
    "p_top_price",
    "p_floor_price",
    "p_highest_24h_trade",
)

EVENT_FEATURE_NAMES: tuple[str, ...] = (
    "n_transfer",
    "n_mint",
    "n_swap",
    "n_burn",
    "rn_mint_transfer",
    "rn_swap_transfer",
    "rn_burn_transfer",
    "a_all",
    "a_mint",
    "a_swap",
    "a_burn",
    "ra_mint_all",
    "ra_swap_all",
    "ra_burn_all",
    "n_token",
)

TRADE_FEATURE_NAMES: tuple[str, ...] = (
    "n_trade",
    "v_volume",
    "v_average_price",
    "n_beyond_average",
    "n_below_average",
    "rn_beyond_average",
    "rn_below_average",
    "v_top_price",
    "v_floor_price",
    "rv_floor_top_price",
    "u_all",
    "u_buyer",
    "u_seller",
    "ru_buyer_all",
    "ru_seller_all",
    "n_highest_24h_trade",
    "rn_highest_24h_trade",
    "v_highest_24h_volume",
    "rv_highest_24h_volume",
    "v_highest_24h_average_price",
    "rv_highest_24h_average_price",
    "u_highest_24h_user",
    "ru_highest_24h_user",
    "n_recent_24h_trade",
    "rn_recent_24h_trade",
    "v_recent_24h_volume",
    "rv_recent_24h_volume",
    "v_recent_24h_average_price",
    "rv_recent_24h_average_price",
    "u_recent_24h_user",
    "ru_recent_24h_user",
)

FEATURE_NAMES: tuple[str, ...] = (
    TIME_SERIES_FEATURE_NAMES + EVENT_FEATURE_NAMES + TRADE_FEATURE_NAMES
)

FEATURE_COUNT = len(FEATURE_NAMES)

SENTINEL = -1.0


@dataclass(frozen=True)
class FeatureWindow:
    """Half-closed observation span [start, end]; both bounds inclusive."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError(f"window start {self.start} after end {self.end}")

    def contains(self, ts: int) -> bool:
        return self.start <= ts <= self.end


@dataclass(frozen=True)
class FeatureVector:
    project: str
    cutoff: int
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) != FEATURE_COUNT:
            raise ValueError(
                f"feature vector must have {FEATURE_COUNT} values, got {len(self.values)}"
            )

    def as_dict(self) -> dict[str, float]:
        return dict(zip(FEATURE_NAMES, self.values))


def activity_concentration(timestamps: Sequence[int], window: FeatureWindow) -> float:
    """Where inside its own active span does this activity cluster?

    0 means front-loaded, 1 back-loaded, uniform activity sits near 0.5.
    -1 when fewer than two events fall in the window or the span is zero.
    """
    ts = [t for t in timestamps if window.contains(t)]
    if len(ts) < 2:
        return SENTINEL
    t_start = min(ts)
    t_end = max(ts)
    if t_end == t_start:
        return SENTINEL
    mean_offset = sum(t - t_start for t in ts) / len(ts)
    return mean_offset / (t_end - t_start)


def _position_in_span(target_ts: int, ts_list: Sequence[int]) -> float:
    t_start = min(ts_list)
    t_end = max(ts_list)
    if t_end == t_start:
        return SENTINEL
    return (target_ts - t_start) / (t_end - t_start)


def _busiest_day_slice(sorted_ts: Sequence[int]) -> tuple[int, int]:
    """Index slice [lo, hi) of the sliding 24h window holding the most
    events, anchored at event timestamps; ties pick the earliest anchor."""
    best = (0, 0)
    best_count = 0
    seen: set[int] = set()
    for t in sorted_ts:
        if t in seen:
            continue
        seen.add(t)
        lo = bisect_left(sorted_ts, t)
        hi = bisect_left(sorted_ts, t + DAY)
        if hi - lo > best_count:
            best_count = hi - lo
            best = (lo, hi)
    return best


def extract_time_series_features(
    timeline: ProjectTimeline, window: FeatureWindow
) -> list[float]:
    """The nine activity-shape features."""
    transfers = [ev for ev in timeline.transfers if window.contains(ev.timestamp)]
    trades = [t for t in timeline.trades if window.contains(t.timestamp)]
    mint_ts = [ev.timestamp for ev in transfers if ev.kind is TransferKind.MINT]
    swap_ts = [ev.timestamp for ev in transfers if ev.kind is TransferKind.SWAP]
    burn_ts = [ev.timestamp for ev in transfers if ev.kind is TransferKind.BURN]
    trade_ts = [t.timestamp for t in trades]

    if mint_ts:
        t_launch_and_mint = float(min(mint_ts) - timeline.metadata.launch_timestamp)
    else:
        t_launch_and_mint = SENTINEL

    p_transfer = activity_concentration([ev.timestamp for ev in transfers], window)
    p_mint = activity_concentration(mint_ts, window)
    p_swap = activity_concentration(swap_ts, window)
    p_burn = activity_concentration(burn_ts, window)
    p_trade = activity_concentration(trade_ts, window)

    if trades:
        top = max(trades, key=lambda t: t.price_usd)
        floor = min(trades, key=lambda t: t.price_usd)
        p_top_price = _position_in_span(top.timestamp, trade_ts)
        p_floor_price = _position_in_span(floor.timestamp, trade_ts)
    else:
        p_top_price = SENTINEL
        p_floor_price = SENTINEL

    if trade_ts:
        lo, hi = _busiest_day_slice(trade_ts)
        p_highest_24h_trade = activity_concentration(trade_ts[lo:hi], window)
    else:
        p_highest_24h_trade = SENTINEL

    return [
        t_launch_and_mint,
        p_transfer,
        p_mint,
        p_swap,
        p_burn,
        p_trade,
        p_top_price,
        p_floor_price,
        p_highest_24h_trade,
    ]


def extract_event_features(
    timeline: ProjectTimeline, window: FeatureWindow
) -> list[float]:
    """The fifteen transfer-log features."""
    transfers = [ev for ev in timeline.transfers if window.contains(ev.timestamp)]
    mints = [ev for ev in transfers if ev.kind is TransferKind.MINT]
    swaps = [ev for ev in transfers if ev.kind is TransferKind.SWAP]
    burns = [ev for ev in transfers if ev.kind is TransferKind.BURN]

    n_transfer = len(transfers)
    n_mint = len(mints)
    n_swap = len(swaps)
    n_burn = len(burns)

    def ratio(num: int, den: int) -> float:
        return num / den if den > 0 else SENTINEL

    a_all_set: set[str] = set()
    for ev in transfers:
        for addr in (ev.from_addr, ev.to_addr):
            if addr not in BURN_ADDRESSES:
                a_all_set.add(addr)
    a_mint_set = {ev.to_addr for ev in mints}
    a_swap_set = {ev.from_addr for ev in swaps} | {ev.to_addr for ev in swaps}
    a_burn_set = {ev.from_addr for ev in burns}
    n_token = len({ev.token_id for ev in transfers})

    a_all = len(a_all_set)
    return [
        float(n_transfer),
        float(n_mint),
        float(n_swap),
        float(n_burn),
        ratio(n_mint, n_transfer),
        ratio(n_swap, n_transfer),
        ratio(n_burn, n_transfer),
        float(a_all),
        float(len(a_mint_set)),
        float(len(a_swap_set)),
        float(len(a_burn_set)),
        ratio(len(a_mint_set), a_all),
        ratio(len(a_swap_set), a_all),
        ratio(len(a_burn_set), a_all),
        float(n_token),
    ]


def _day_stats(trades: Sequence[TradeRecord]) -> tuple[float, float, float, int]:
    """(count, volume, average price or -1, unique users) of a trade set."""
    n = len(trades)
    vol = sum(t.price_usd for t in trades)
    avg = vol / n if n else SENTINEL
    users = {t.buyer for t in trades} | {t.seller for t in trades}
    return float(n), vol, avg, len(users)


def extract_trade_features(
    timeline: ProjectTimeline, window: FeatureWindow
) -> list[float]:
    """The thirty-one secondary-market features."""
    trades = [t for t in timeline.trades if window.contains(t.timestamp)]

    def ratio(num: float, den: float) -> float:
        return num / den if den > 0 else SENTINEL

    n_trade = len(trades)
    v_volume = sum(t.price_usd for t in trades)
    v_average_price = v_volume / n_trade if n_trade else SENTINEL

    n_beyond = sum(1 for t in trades if t.price_usd > v_average_price) if n_trade else 0
    n_below = sum(1 for t in trades if t.price_usd < v_average_price) if n_trade else 0

    if trades:
        v_top_price = max(t.price_usd for t in trades)
        v_floor_price = min(t.price_usd for t in trades)
        rv_floor_top = ratio(v_floor_price, v_top_price)
    else:
        v_top_price = SENTINEL
        v_floor_price = SENTINEL
        rv_floor_top = SENTINEL

    buyers = {t.buyer for t in trades}
    sellers = {t.seller for t in trades}
    u_all = len(buyers | sellers)

    # busiest sliding 24h day
    trade_ts = [t.timestamp for t in trades]
    if trades:
        lo, hi = _busiest_day_slice(trade_ts)
        day = trades[lo:hi]
    else:
        day = []
    n_high, v_high, avg_high, u_high = _day_stats(day)

    # most recent 24h: (end - DAY, end]
    recent = [t for t in trades if window.end - DAY < t.timestamp <= window.end]
    n_rec, v_rec, avg_rec, u_rec = _day_stats(recent)

    return [
        float(n_trade),
        v_volume,
        v_average_price,
        float(n_beyond),
        float(n_below),
        ratio(n_beyond, n_trade),
        ratio(n_below, n_trade),
        v_top_price,
        v_floor_price,
        rv_floor_top,
        float(u_all),
        float(len(buyers)),
        float(len(sellers)),
        ratio(len(buyers), u_all),
        ratio(len(sellers), u_all),
        n_high,
        ratio(n_high, n_trade),
        v_high,
        ratio(v_high, v_volume),
        avg_high,
        ratio(avg_high, v_average_price) if avg_high != SENTINEL else SENTINEL,
        float(u_high),
        ratio(u_high, u_all),
        n_rec,
        ratio(n_rec, n_trade),
        v_rec,
        ratio(v_rec, v_volume),
        avg_rec,
        ratio(avg_rec, v_average_price) if avg_rec != SENTINEL else SENTINEL,
        float(u_rec),
        ratio(u_rec, u_all),
    ]


def featurize(timeline: ProjectTimeline, cutoff: int) -> FeatureVector:
    """Full 55-value vector over the window [launch, cutoff]."""
    launch = timeline.metadata.launch_timestamp
    if cutoff < launch:
        raise CutoffBeforeLaunch(
            f"cutoff {cutoff} predates launch {launch} of {timeline.project}"
        )
    window = FeatureWindow(launch, cutoff)
    values = (
        extract_time_series_features(timeline, window)
        + extract_event_features(timeline, window)
        + extract_trade_features(timeline, window)
    )
    return FeatureVector(project=timeline.project, cutoff=cutoff, values=tuple(values))


# ---------------------------------------------------------------------------
# delimited storage

CSV_HEADER = ("project", "cutoff") + FEATURE_NAMES


def write_features_csv(vectors: Iterable[FeatureVector], path: str | os.PathLike) -> None:
    """One row per vector; floats use round-trip repr."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for fv in vectors:
            writer.writerow([fv.project, fv.cutoff] + [repr(v) for v in fv.values])


def read_features_csv(path: str | os.PathLike) -> list[FeatureVector]:
    """Inverse of write_features_csv; header must match the canonical order."""
    with open(Path(path), newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != CSV_HEADER:
            raise ValueError(f"{path}: header does not match the canonical feature order")
        out = []
        for row in reader:
            if not row:
                continue
            if len(row) != len(CSV_HEADER):
                raise ValueError(f"{path}: row has {len(row)} columns, expected {len(CSV_HEADER)}")
            out.append(
                FeatureVector(
                    project=row[0],
                    cutoff=int(row[1]),
                    values=tuple(float(v) for v in row[2:]),
                )
            )
        return out
