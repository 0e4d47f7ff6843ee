"""Figure rendering for detection and monitoring reports.

Every function takes already-computed results and writes one PNG, returning
the path. Rendering is optional everywhere in the CLI; nothing here feeds
back into detection.
"""
from __future__ import annotations

import os
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.dates as mdates
import matplotlib.pyplot as plt

from .detector import DetectionReport, PriceSequence, drawdown_sequence
from .monitor import AlarmReport
from .tricks import Trick, TrickReport

_CHECK_COLORS = {
    "Profit": "#7a5195",
    "Price": "#bc5090",
    "Liveness": "#ef5675",
    "Social": "#ffa600",
}


def _utc(ts: int) -> datetime:
    return datetime.fromtimestamp(ts, tz=timezone.utc)


def render_price_figure(
    project: str,
    seq: PriceSequence,
    out_dir: str | os.PathLike,
    drawdown_threshold: float = 0.99,
) -> Path | None:
    """Price trace with the running worst future drop underneath; skipped
    (returns None) when there are fewer than two priced trades."""
    if len(seq) < 2:
        return None
    times = [_utc(p.timestamp) for p in seq]
    prices = [p.price_usd for p in seq]
    drawdowns = drawdown_sequence(seq)

    fig, (ax_p, ax_d) = plt.subplots(
        2, 1, sharex=True, figsize=(9, 6), height_ratios=[2, 1]
    )
    ax_p.plot(times, prices, lw=1.0, color="#003f5c")
    ax_p.set_yscale("log")
    ax_p.set_ylabel("trade price (USD)")
    ax_p.set_title(f"{project}: price and forward drawdown")

    ax_d.plot(times[:-1], drawdowns, lw=1.0, color="#bc5090")
    ax_d.axhline(drawdown_threshold, ls="--", lw=0.8, color="#444444")
    ax_d.set_ylim(-0.05, 1.05)
    ax_d.set_ylabel("max future drop")
    ax_d.xaxis.set_major_formatter(mdates.DateFormatter("%Y-%m-%d"))
    fig.autofmt_xdate()

    out = Path(out_dir) / f"{project}_price.png"
    fig.savefig(out, dpi=110)
    plt.close(fig)
    return out


def render_detection_summary(
    reports: Mapping[str, DetectionReport], out_dir: str | os.PathLike
) -> Path:
    """How often each checker fired, plus the full-conjunction count."""
    names = list(_CHECK_COLORS)
    counts = {name: 0 for name in names}
    flagged = 0
    for report in reports.values():
        for check in report.checks:
            if check.triggered:
                counts[check.checker.value] += 1
        if report.rug_pull:
            flagged += 1

    fig, ax = plt.subplots(figsize=(7, 4.5))
    labels = names + ["all four"]
    values = [counts[n] for n in names] + [flagged]
    colors = [_CHECK_COLORS[n] for n in names] + ["#2f4b7c"]
    bars = ax.bar(labels, values, color=colors)
    ax.bar_label(bars)
    ax.set_ylabel("projects")
    ax.set_title(f"checker trigger counts over {len(reports)} projects")

    out = Path(out_dir) / "detection_summary.png"
    fig.savefig(out, dpi=110)
    plt.close(fig)
    return out


def render_trick_summary(
    reports: Mapping[str, TrickReport], out_dir: str | os.PathLike
) -> Path:
    """Projects per trick type, explicit tricks left of implicit ones."""
    counts = {trick: 0 for trick in Trick}
    for report in reports.values():
        for trick in {f.trick for f in report.findings}:
            counts[trick] += 1

    fig, ax = plt.subplots(figsize=(9, 4.5))
    labels = [t.value for t in Trick]
    bars = ax.bar(labels, [counts[t] for t in Trick], color="#665191")
    ax.bar_label(bars)
    ax.set_ylabel("projects")
    ax.set_title(f"trick findings over {len(reports)} projects")
    ax.tick_params(axis="x", labelrotation=25)
    fig.tight_layout()

    out = Path(out_dir) / "trick_summary.png"
    fig.savefig(out, dpi=110)
    plt.close(fig)
    return out


def render_alarm_timeline(report: AlarmReport, out_dir: str | os.PathLike) -> Path:
    """New and repeated alarms per monitored day."""
    dates = [day.date for day in report.days]
    new = [len(day.new) for day in report.days]
    repeated = [len(day.repeated) for day in report.days]

    fig, ax = plt.subplots(figsize=(max(7.0, 0.3 * len(dates) + 4), 4.5))
    xs = range(len(dates))
    ax.bar(xs, new, label="new", color="#ef5675")
    ax.bar(xs, repeated, bottom=new, label="repeated", color="#ffa600")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(dates, rotation=60, ha="right", fontsize=7)
    ax.set_ylabel("alarms")
    ax.set_title("daily alarms")
    ax.legend()
    fig.tight_layout()

    out = Path(out_dir) / "alarm_timeline.png"
    fig.savefig(out, dpi=110)
    plt.close(fig)
    return out


def render_feature_grid(
    names: Sequence[str],
    rows: Sequence[Sequence[float]],
    labels: Sequence[bool],
    out_dir: str | os.PathLike,
    max_features: int = 12,
) -> Path:
    """Per-class mean comparison for the widest-spread features."""
    import numpy as np

    X = np.asarray(rows, dtype=float)
    y = np.asarray(labels, dtype=bool)
    mean_pos = X[y].mean(axis=0) if y.any() else np.zeros(X.shape[1])
    mean_neg = X[~y].mean(axis=0) if (~y).any() else np.zeros(X.shape[1])
    spread = np.abs(mean_pos - mean_neg)
    order = np.argsort(-spread)[:max_features]

    fig, ax = plt.subplots(figsize=(8, 0.45 * len(order) + 2))
    ys = range(len(order))
    ax.barh([i - 0.2 for i in ys], mean_pos[order], height=0.4, label="positive", color="#ef5675")
    ax.barh([i + 0.2 for i in ys], mean_neg[order], height=0.4, label="negative", color="#2f4b7c")
    ax.set_yticks(list(ys))
    ax.set_yticklabels([names[i] for i in order], fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("class mean")
    ax.set_title("largest class-mean gaps")
    ax.legend()
    fig.tight_layout()

    out = Path(out_dir) / "feature_means.png"
    fig.savefig(out, dpi=110)
    plt.close(fig)
    return out
