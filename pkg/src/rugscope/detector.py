"""Four independent rug-pull checkers and their composite verdict.

A project is flagged only when all four agree: it took money in (profit),
its market price collapsed without recovering (price), its on-chain
activity died (liveness), and its social accounts are gone or silent
(social).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import EmptySequence, NoMint, TooYoung
from .ingest import slice_until
from .records import (
    DEAD_STATUSES,
    ProjectTimeline,
    SocialPlatform,
    TradeRecord,
    TransferKind,
)

DAY = 86400
MONTH = 30 * DAY

DEFAULT_DRAWDOWN_THRESHOLD = 0.99
DEFAULT_RECOVERY_THRESHOLD = 0.01
DEFAULT_LIVENESS_THRESHOLD = 0.99
DEFAULT_INACTIVITY_DAYS = 30


class Checker(str, enum.Enum):
    PROFIT = "Profit"
    PRICE = "Price"
    LIVENESS = "Liveness"
    SOCIAL = "Social"


@dataclass(frozen=True)
class PricePoint:
    """One positive-price sale projected out of a trade record."""

    token_id: int
    price_usd: float
    timestamp: int

    def __post_init__(self) -> None:
        if not self.price_usd > 0.0:
            raise ValueError(f"price point must be positive, got {self.price_usd}")


@dataclass(frozen=True)
class PriceSequence:
    """Chronological trading prices for a whole project, all tokens mixed."""

    points: tuple[PricePoint, ...] = ()

    def __post_init__(self) -> None:
        for a, b in zip(self.points, self.points[1:]):
            if b.timestamp < a.timestamp:
                raise ValueError("price points must be in chronological order")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[PricePoint]:
        return iter(self.points)

    def __getitem__(self, i: int) -> PricePoint:
        return self.points[i]


@dataclass(frozen=True)
class CheckResult:
    checker: Checker
    triggered: bool
    evidence: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.triggered and not self.evidence:
            raise ValueError("a triggered check must carry evidence")

    def to_json_dict(self) -> dict:
        return {
            "checker": self.checker.value,
            "triggered": self.triggered,
            "evidence": list(self.evidence),
        }


@dataclass(frozen=True)
class DetectionReport:
    project: str
    analysis_time: int
    checks: tuple[CheckResult, ...]
    rug_pull: bool = field(init=False)

    def __post_init__(self) -> None:
        if len(self.checks) != 4:
            raise ValueError("a report carries exactly four check results")
        object.__setattr__(self, "rug_pull", all(c.triggered for c in self.checks))

    def to_json_dict(self) -> dict:
        return {
            "project": self.project,
            "analysis_time": self.analysis_time,
            "rug_pull": self.rug_pull,
            "checks": [c.to_json_dict() for c in self.checks],
        }


# ---------------------------------------------------------------------------
# profit


def check_profit(timeline: ProjectTimeline) -> CheckResult:
    """Did any money flow to the project? Mint fees, creator fees, or Ether
    paid straight to the contract all count; amounts do not matter."""
    evidence = []
    paid_mints = sum(
        1 for ev in timeline.transfers if ev.kind is TransferKind.MINT and ev.value_wei > 0
    )
    if paid_mints:
        evidence.append(f"{paid_mints} mint(s) carried a mint fee")
    fee_trades = [t for t in timeline.trades if t.creator_fee_usd > 0]
    if fee_trades:
        total = sum(t.creator_fee_usd for t in fee_trades)
        evidence.append(f"{len(fee_trades)} trade(s) paid {total:.2f} USD creator fees")
    if timeline.direct_payments:
        total_wei = sum(p.amount_wei for p in timeline.direct_payments)
        evidence.append(
            f"{len(timeline.direct_payments)} direct payment(s) totaling {total_wei} wei"
        )
    return CheckResult(Checker.PROFIT, bool(evidence), tuple(evidence))


# ---------------------------------------------------------------------------
# price


def price_sequence(trades: Sequence[TradeRecord]) -> PriceSequence:
    """Project sorted trades to price points, dropping zero-price sales."""
    return PriceSequence(
        tuple(
            PricePoint(t.token_id, t.price_usd, t.timestamp)
            for t in trades
            if t.price_usd > 0.0
        )
    )


def _drawdowns_with_troughs(seq: PriceSequence) -> list[tuple[float, int]]:
    """For each index i return (drawdown_i, trough index j).

    drawdown_i = (p_i - min_{j>i} p_j) / p_i; the trough is the earliest j
    attaining that minimum. Single backward scan; the arithmetic expression
    matches the pairwise definition bit for bit because the running minimum
    is always one of the original prices.
    """
    pts = seq.points
    n = len(pts)
    if n == 0:
        raise EmptySequence("drawdowns need at least one price point")
    out: list[tuple[float, int]] = [(0.0, 0)] * (n - 1)
    min_p = pts[n - 1].price_usd
    min_j = n - 1
    for i in range(n - 2, -1, -1):
        p_i = pts[i].price_usd
        out[i] = ((p_i - min_p) / p_i, min_j)
        if p_i <= min_p:
            min_p = p_i
            min_j = i
    return out


def drawdown_sequence(seq: PriceSequence) -> list[float]:
    """Worst later fractional price drop for every point but the last."""
    return [d for d, _ in _drawdowns_with_troughs(seq)]


def recovery(seq: PriceSequence, j: int) -> float:
    """Best later rebound of the token that traded at index j.

    Only trades of the same token count; 0.0 when it never trades again.
    """
    if j < 0 or j >= len(seq):
        raise IndexError(f"index {j} out of range for sequence of {len(seq)}")
    trough = seq[j]
    best: float | None = None
    for k in range(j + 1, len(seq)):
        pt = seq[k]
        if pt.token_id != trough.token_id:
            continue
        r = (pt.price_usd - trough.price_usd) / trough.price_usd
        if best is None or r > best:
            best = r
    return 0.0 if best is None else best


def check_price(
    seq: PriceSequence,
    drawdown_threshold: float = DEFAULT_DRAWDOWN_THRESHOLD,
    recovery_threshold: float = DEFAULT_RECOVERY_THRESHOLD,
) -> CheckResult:
    """Collapsed and stayed collapsed?

    Triggered iff some drawdown exceeds the threshold and every such
    drawdown's trough token failed to rebound past the recovery threshold.
    """
    if len(seq) < 2:
        return CheckResult(Checker.PRICE, False, ("fewer than two priced trades",))
    pairs = _drawdowns_with_troughs(seq)
    qualifying = [(i, d, j) for i, (d, j) in enumerate(pairs) if d > drawdown_threshold]
    if not qualifying:
        worst = max(d for d, _ in pairs)
        return CheckResult(
            Checker.PRICE, False, (f"worst drawdown {worst:.6f} <= {drawdown_threshold}",)
        )
    recoveries = {j: recovery(seq, j) for j in sorted({j for _, _, j in qualifying})}
    rebounded = [(j, r) for j, r in recoveries.items() if r > recovery_threshold]
    if rebounded:
        j, r = rebounded[0]
        return CheckResult(
            Checker.PRICE,
            False,
            (
                f"{len(qualifying)} drawdown(s) > {drawdown_threshold} but trough at "
                f"index {j} (token {seq[j].token_id}) recovered {r:.6f} > {recovery_threshold}",
            ),
        )
    worst_i, worst_d, worst_j = max(qualifying, key=lambda q: q[1])
    evidence = (
        f"{len(qualifying)} drawdown(s) > {drawdown_threshold}, none recovered past "
        f"{recovery_threshold}",
        f"worst drawdown {worst_d:.6f}: token {seq[worst_i].token_id} at ts "
        f"{seq[worst_i].timestamp} down to token {seq[worst_j].token_id} at ts "
        f"{seq[worst_j].timestamp}",
    )
    return CheckResult(Checker.PRICE, True, evidence)


# ---------------------------------------------------------------------------
# liveness


def liveness(timeline: ProjectTimeline, asof: int) -> float:
    """(N1 - N2) / N1 with N1 = transfers in the 30 days from the first
    mint and N2 = transfers in the 30 days ending at asof."""
    first_mint = timeline.first_mint_timestamp()
    if first_mint is None:
        raise NoMint(f"{timeline.project} never minted")
    if asof < first_mint + 2 * MONTH:
        raise TooYoung(
            f"{timeline.project} is younger than 60 days at {asof}; windows would overlap"
        )
    n1 = sum(1 for ev in timeline.transfers if first_mint <= ev.timestamp < first_mint + MONTH)
    n2 = sum(1 for ev in timeline.transfers if asof - MONTH < ev.timestamp <= asof)
    return (n1 - n2) / n1


def check_liveness(
    timeline: ProjectTimeline,
    asof: int,
    threshold: float = DEFAULT_LIVENESS_THRESHOLD,
) -> CheckResult:
    """Did on-chain activity die off relative to the first month?"""
    try:
        value = liveness(timeline, asof)
    except NoMint:
        return CheckResult(Checker.LIVENESS, False, ("no mint events, liveness undefined",))
    except TooYoung:
        return CheckResult(Checker.LIVENESS, False, ("too young: under 60 days of history",))
    if value > threshold:
        return CheckResult(
            Checker.LIVENESS, True, (f"liveness {value:.6f} > {threshold}",)
        )
    return CheckResult(Checker.LIVENESS, False, (f"liveness {value:.6f} <= {threshold}",))


# ---------------------------------------------------------------------------
# social


def check_social(
    timeline: ProjectTimeline,
    asof: int,
    inactivity_days: int = DEFAULT_INACTIVITY_DAYS,
) -> CheckResult:
    """Are the project's social accounts dead, gone, or long silent?

    Looks at the latest snapshot per platform taken at or before asof.
    Projects with no social records never trigger.
    """
    latest: dict[SocialPlatform, object] = {}
    for snap in timeline.socials:
        if snap.snapshot_timestamp <= asof:
            latest[snap.platform] = snap
    if not latest:
        return CheckResult(Checker.SOCIAL, False, ("no social records",))
    evidence = []
    for platform in sorted(latest, key=lambda p: p.value):
        snap = latest[platform]
        if snap.status in DEAD_STATUSES:
            evidence.append(f"{platform.value} account {snap.status.value}")
        elif (
            platform is SocialPlatform.TWITTER
            and snap.last_post_timestamp is not None
            and asof - snap.last_post_timestamp >= inactivity_days * DAY
        ):
            idle = (asof - snap.last_post_timestamp) // DAY
            evidence.append(f"Twitter silent for {idle} days")
    if evidence:
        return CheckResult(Checker.SOCIAL, True, tuple(evidence))
    return CheckResult(Checker.SOCIAL, False, ("all observed social accounts look alive",))


# ---------------------------------------------------------------------------
# composite


def detect_rug_pull(
    timeline: ProjectTimeline,
    asof: int,
    drawdown_threshold: float = DEFAULT_DRAWDOWN_THRESHOLD,
    recovery_threshold: float = DEFAULT_RECOVERY_THRESHOLD,
    liveness_threshold: float = DEFAULT_LIVENESS_THRESHOLD,
    inactivity_days: int = DEFAULT_INACTIVITY_DAYS,
) -> DetectionReport:
    """Run all four checkers against the state of the world at asof.

    Records after asof are invisible; the verdict is the conjunction of the
    four triggered flags.
    """
    view = slice_until(timeline, asof)
    checks = (
        check_profit(view),
        check_price(price_sequence(view.trades), drawdown_threshold, recovery_threshold),
        check_liveness(view, asof, liveness_threshold),
        check_social(view, asof, inactivity_days),
    )
    return DetectionReport(project=timeline.project, analysis_time=asof, checks=checks)
