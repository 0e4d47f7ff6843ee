"""Brute-force reference implementations for cross-checking the fast paths.

Everything here is written naively and independently of the production
modules: quadratic loops, no shared helpers, no shortcuts. Tests compare
the two sides; agreement is the point, speed is not.
"""
from __future__ import annotations

from typing import Sequence

from ..errors import EmptySequence
from ..features import FEATURE_NAMES, FeatureVector
from ..records import BURN_ADDRESSES, ProjectTimeline, TradeRecord, TransferKind

DAY = 86400


def oracle_drawdown(prices: Sequence[float]) -> list[float]:
    """max over j>i of (p_i - p_j) / p_i, evaluated pair by pair."""
    if len(prices) == 0:
        raise EmptySequence("no prices")
    out = []
    for i in range(len(prices) - 1):
        p_i = prices[i]
        out.append(max((p_i - prices[j]) / p_i for j in range(i + 1, len(prices))))
    return out


def oracle_recovery(
    token_ids: Sequence[int], prices: Sequence[float], j: int
) -> float:
    """max over k>j of (p_k - p_j)/p_j among trades of token_ids[j]."""
    if j < 0 or j >= len(prices):
        raise IndexError(j)
    rebounds = [
        (prices[k] - prices[j]) / prices[j]
        for k in range(j + 1, len(prices))
        if token_ids[k] == token_ids[j]
    ]
    return max(rebounds) if rebounds else 0.0


def oracle_wash_pairs(
    trades: Sequence[TradeRecord], threshold: int = 10
) -> list[tuple[str, str]]:
    """All unordered address pairs trading together more than `threshold`
    times, found by scanning the whole trade list per candidate pair."""
    candidates = sorted({tuple(sorted((t.buyer, t.seller))) for t in trades})
    flagged = []
    for a, b in candidates:
        count = 0
        for t in trades:
            if {t.buyer, t.seller} == {a, b}:
                count += 1
        if count > threshold:
            flagged.append((a, b))
    return flagged


def oracle_levenshtein(a: str, b: str) -> int:
    """Textbook full-matrix edit-distance dynamic program."""
    n, m = len(a), len(b)
    dist = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        dist[i][0] = i
    for j in range(m + 1):
        dist[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            dist[i][j] = min(
                dist[i - 1][j] + 1,
                dist[i][j - 1] + 1,
                dist[i - 1][j - 1] + cost,
            )
    return dist[n][m]


# ---------------------------------------------------------------------------
# feature oracle


def _concentration(ts: list[int]) -> float:
    if len(ts) < 2:
        return -1.0
    lo, hi = min(ts), max(ts)
    if hi == lo:
        return -1.0
    total = 0.0
    for t in ts:
        total += t - lo
    return (total / len(ts)) / (hi - lo)


def _position(target: int, ts: list[int]) -> float:
    lo, hi = min(ts), max(ts)
    if hi == lo:
        return -1.0
    return (target - lo) / (hi - lo)


def _best_day_trades(trades: list[TradeRecord]) -> list[TradeRecord]:
    """Brute force: count trades inside [anchor, anchor+1d) for every
    anchor; keep the earliest anchor with the highest count."""
    best_anchor = None
    best_count = -1
    for t in trades:
        anchor = t.timestamp
        count = 0
        for u in trades:
            if anchor <= u.timestamp < anchor + DAY:
                count += 1
        if count > best_count or (count == best_count and anchor < best_anchor):
            best_count = count
            best_anchor = anchor
    return [u for u in trades if best_anchor <= u.timestamp < best_anchor + DAY]


def oracle_features(timeline: ProjectTimeline, cutoff: int) -> FeatureVector:
    """Recompute every feature with plain loops, keyed by name."""
    launch = timeline.metadata.launch_timestamp
    transfers = [e for e in timeline.transfers if launch <= e.timestamp <= cutoff]
    trades = [t for t in timeline.trades if launch <= t.timestamp <= cutoff]
    f: dict[str, float] = {}

    mints = [e for e in transfers if e.kind is TransferKind.MINT]
    swaps = [e for e in transfers if e.kind is TransferKind.SWAP]
    burns = [e for e in transfers if e.kind is TransferKind.BURN]

    # time-series group
    f["t_launch_and_mint"] = (
        float(min(e.timestamp for e in mints) - launch) if mints else -1.0
    )
    f["p_transfer"] = _concentration([e.timestamp for e in transfers])
    f["p_mint"] = _concentration([e.timestamp for e in mints])
    f["p_swap"] = _concentration([e.timestamp for e in swaps])
    f["p_burn"] = _concentration([e.timestamp for e in burns])
    f["p_trade"] = _concentration([t.timestamp for t in trades])
    if trades:
        top = trades[0]
        floor = trades[0]
        for t in trades[1:]:
            if t.price_usd > top.price_usd:
                top = t
            if t.price_usd < floor.price_usd:
                floor = t
        all_ts = [t.timestamp for t in trades]
        f["p_top_price"] = _position(top.timestamp, all_ts)
        f["p_floor_price"] = _position(floor.timestamp, all_ts)
        f["p_highest_24h_trade"] = _concentration(
            [t.timestamp for t in _best_day_trades(trades)]
        )
    else:
        f["p_top_price"] = -1.0
        f["p_floor_price"] = -1.0
        f["p_highest_24h_trade"] = -1.0

    # transfer-log group
    n_transfer = len(transfers)
    f["n_transfer"] = float(n_transfer)
    f["n_mint"] = float(len(mints))
    f["n_swap"] = float(len(swaps))
    f["n_burn"] = float(len(burns))
    f["rn_mint_transfer"] = len(mints) / n_transfer if n_transfer else -1.0
    f["rn_swap_transfer"] = len(swaps) / n_transfer if n_transfer else -1.0
    f["rn_burn_transfer"] = len(burns) / n_transfer if n_transfer else -1.0
    a_all: set[str] = set()
    for e in transfers:
        if e.from_addr not in BURN_ADDRESSES:
            a_all.add(e.from_addr)
        if e.to_addr not in BURN_ADDRESSES:
            a_all.add(e.to_addr)
    a_mint = {e.to_addr for e in mints}
    a_swap = set()
    for e in swaps:
        a_swap.add(e.from_addr)
        a_swap.add(e.to_addr)
    a_burn = {e.from_addr for e in burns}
    f["a_all"] = float(len(a_all))
    f["a_mint"] = float(len(a_mint))
    f["a_swap"] = float(len(a_swap))
    f["a_burn"] = float(len(a_burn))
    f["ra_mint_all"] = len(a_mint) / len(a_all) if a_all else -1.0
    f["ra_swap_all"] = len(a_swap) / len(a_all) if a_all else -1.0
    f["ra_burn_all"] = len(a_burn) / len(a_all) if a_all else -1.0
    f["n_token"] = float(len({e.token_id for e in transfers}))

    # secondary-market group
    n_trade = len(trades)
    volume = 0.0
    for t in trades:
        volume += t.price_usd
    avg = volume / n_trade if n_trade else -1.0
    f["n_trade"] = float(n_trade)
    f["v_volume"] = volume
    f["v_average_price"] = avg
    beyond = below = 0
    if n_trade:
        for t in trades:
            if t.price_usd > avg:
                beyond += 1
            if t.price_usd < avg:
                below += 1
    f["n_beyond_average"] = float(beyond)
    f["n_below_average"] = float(below)
    f["rn_beyond_average"] = beyond / n_trade if n_trade else -1.0
    f["rn_below_average"] = below / n_trade if n_trade else -1.0
    if trades:
        top_price = max(t.price_usd for t in trades)
        floor_price = min(t.price_usd for t in trades)
        f["v_top_price"] = top_price
        f["v_floor_price"] = floor_price
        f["rv_floor_top_price"] = floor_price / top_price if top_price > 0 else -1.0
    else:
        f["v_top_price"] = -1.0
        f["v_floor_price"] = -1.0
        f["rv_floor_top_price"] = -1.0
    buyers = {t.buyer for t in trades}
    sellers = {t.seller for t in trades}
    users = buyers | sellers
    f["u_all"] = float(len(users))
    f["u_buyer"] = float(len(buyers))
    f["u_seller"] = float(len(sellers))
    f["ru_buyer_all"] = len(buyers) / len(users) if users else -1.0
    f["ru_seller_all"] = len(sellers) / len(users) if users else -1.0

    def day_block(prefix: str, block: list[TradeRecord]) -> None:
        n = len(block)
        vol = 0.0
        for t in block:
            vol += t.price_usd
        block_users = {t.buyer for t in block} | {t.seller for t in block}
        f[f"n_{prefix}_trade"] = float(n)
        f[f"rn_{prefix}_trade"] = n / n_trade if n_trade else -1.0
        f[f"v_{prefix}_volume"] = vol
        f[f"rv_{prefix}_volume"] = vol / volume if volume > 0 else -1.0
        block_avg = vol / n if n else -1.0
        f[f"v_{prefix}_average_price"] = block_avg
        if block_avg == -1.0 or avg <= 0:
            f[f"rv_{prefix}_average_price"] = -1.0
        else:
            f[f"rv_{prefix}_average_price"] = block_avg / avg
        f[f"u_{prefix}_user"] = float(len(block_users))
        f[f"ru_{prefix}_user"] = len(block_users) / len(users) if users else -1.0

    day_block("highest_24h", _best_day_trades(trades) if trades else [])
    day_block("recent_24h", [t for t in trades if cutoff - DAY < t.timestamp <= cutoff])

    values = tuple(f[name] for name in FEATURE_NAMES)
    return FeatureVector(project=timeline.project, cutoff=cutoff, values=values)
