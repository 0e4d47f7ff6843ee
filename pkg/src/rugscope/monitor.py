"""Daily early-warning loop: featurize at midnight, alarm on model union.

State is a single versioned JSON file mapping project to its alarm record;
records are only ever added or updated, never removed, so re-fires dedupe
into a repeat count.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from datetime import date as date_type
from datetime import datetime, time, timedelta, timezone
from pathlib import Path
from typing import Callable, Mapping

from .errors import SchemaMismatch, StateCorrupt
from .features import FEATURE_COUNT, FEATURE_NAMES, featurize
from .learn import KIND_LOGREG, KIND_SVM, Model, predict
from .records import ProjectTimeline

STATE_SCHEMA_VERSION = 1

MODEL_NAME_LOGREG = "LogReg"
MODEL_NAME_SVM = "SVM"


def _as_date(d: str | date_type) -> date_type:
    if isinstance(d, date_type):
        return d
    return date_type.fromisoformat(d)


def midnight_utc(d: str | date_type) -> int:
    """Unix timestamp of 00:00:00 UTC on the given date."""
    return int(datetime.combine(_as_date(d), time(0), tzinfo=timezone.utc).timestamp())


@dataclass(frozen=True)
class AlarmRecord:
    project: str
    first_alarm_date: str
    models_fired: tuple[str, ...]
    score_logreg: float
    score_svm: float
    repeat_count: int = 1

    def __post_init__(self) -> None:
        if not self.models_fired:
            raise ValueError("an alarm must name at least one model")
        if self.repeat_count < 1:
            raise ValueError("repeat_count starts at 1")

    def to_json_dict(self) -> dict:
        return {
            "project": self.project,
            "first_alarm_date": self.first_alarm_date,
            "models_fired": list(self.models_fired),
            "score_logreg": self.score_logreg,
            "score_svm": self.score_svm,
            "repeat_count": self.repeat_count,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "AlarmRecord":
        return cls(
            project=d["project"],
            first_alarm_date=d["first_alarm_date"],
            models_fired=tuple(d["models_fired"]),
            score_logreg=float(d["score_logreg"]),
            score_svm=float(d["score_svm"]),
            repeat_count=int(d["repeat_count"]),
        )


@dataclass
class MonitorState:
    records: dict[str, AlarmRecord] = field(default_factory=dict)
    last_run_date: str | None = None


def load_state(path: str | os.PathLike) -> MonitorState:
    """Missing file means a fresh start; an unreadable or wrong-schema file
    aborts rather than silently resetting."""
    p = Path(path)
    if not p.exists():
        return MonitorState()
    try:
        payload = json.loads(p.read_text())
        if not isinstance(payload, dict):
            raise ValueError("state must be a JSON object")
        if payload.get("schema_version") != STATE_SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {payload.get('schema_version')!r}")
        records = {
            proj: AlarmRecord.from_json_dict(rec)
            for proj, rec in payload["records"].items()
        }
        return MonitorState(records=records, last_run_date=payload.get("last_run_date"))
    except (ValueError, KeyError, TypeError) as exc:
        raise StateCorrupt(f"{p}: {exc}") from exc


def save_state(state: MonitorState, path: str | os.PathLike) -> None:
    payload = {
        "schema_version": STATE_SCHEMA_VERSION,
        "last_run_date": state.last_run_date,
        "records": {
            proj: rec.to_json_dict() for proj, rec in sorted(state.records.items())
        },
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")


@dataclass(frozen=True)
class DailyAlarms:
    date: str
    new: tuple[AlarmRecord, ...]
    repeated: tuple[AlarmRecord, ...]


@dataclass(frozen=True)
class AlarmReport:
    days: tuple[DailyAlarms, ...]


def _check_models(logreg: Model, svm: Model) -> None:
    for model, kind in ((logreg, KIND_LOGREG), (svm, KIND_SVM)):
        if model.kind != kind:
            raise SchemaMismatch(f"expected a {kind} model, got {model.kind}")
        if model.dimension != FEATURE_COUNT:
            raise SchemaMismatch(
                f"{kind} model has {model.dimension} features, expected {FEATURE_COUNT}"
            )
        if tuple(model.feature_names) != FEATURE_NAMES:
            raise SchemaMismatch(f"{kind} model feature names do not match the schema")


def run_daily(
    manifest: Mapping[str, ProjectTimeline],
    logreg: Model,
    svm: Model,
    date: str | date_type,
    state: MonitorState,
) -> tuple[DailyAlarms, MonitorState]:
    """Score every launched project as of midnight UTC and fold alarms into
    the state. Projects not yet launched are skipped."""
    _check_models(logreg, svm)
    day = _as_date(date)
    day_s = day.isoformat()
    cutoff = midnight_utc(day)
    new: list[AlarmRecord] = []
    repeated: list[AlarmRecord] = []
    for addr in sorted(manifest):
        timeline = manifest[addr]
        if timeline.metadata.launch_timestamp > cutoff:
            continue
        fv = featurize(timeline, cutoff)
        fired_lr, score_lr = predict(logreg, fv)
        fired_svm, score_svm = predict(svm, fv)
        fired = []
        if fired_lr:
            fired.append(MODEL_NAME_LOGREG)
        if fired_svm:
            fired.append(MODEL_NAME_SVM)
        if not fired:
            continue
        prev = state.records.get(addr)
        if prev is None:
            rec = AlarmRecord(addr, day_s, tuple(fired), score_lr, score_svm, 1)
            new.append(rec)
        else:
            rec = AlarmRecord(
                project=addr,
                first_alarm_date=prev.first_alarm_date,
                models_fired=tuple(sorted(set(prev.models_fired) | set(fired))),
                score_logreg=score_lr,
                score_svm=score_svm,
                repeat_count=prev.repeat_count + 1,
            )
            repeated.append(rec)
        state.records[addr] = rec
    state.last_run_date = day_s
    return DailyAlarms(day_s, tuple(new), tuple(repeated)), state


def replay(
    manifest: Mapping[str, ProjectTimeline],
    logreg: Model,
    svm: Model,
    start_date: str | date_type,
    end_date: str | date_type,
    state: MonitorState,
    on_day: Callable[[DailyAlarms], None] | None = None,
) -> MonitorState:
    """Run the daily loop for every date in [start, end]; the final state is
    exactly what incremental daily runs would have produced."""
    start = _as_date(start_date)
    end = _as_date(end_date)
    if start > end:
        raise ValueError(f"start {start} after end {end}")
    day = start
    while day <= end:
        daily, state = run_daily(manifest, logreg, svm, day, state)
        if on_day is not None:
            on_day(daily)
        day += timedelta(days=1)
    return state


# ---------------------------------------------------------------------------
# report rendering


def _sorted_records(records: tuple[AlarmRecord, ...]) -> list[AlarmRecord]:
    return sorted(records, key=lambda r: (r.first_alarm_date, r.project))


def render_report(report: AlarmReport, format: str) -> str:
    """Deterministic text for a report; formats: jsonl, csv, text."""
    if format == "jsonl":
        lines = []
        for day in report.days:
            for status, records in (("new", day.new), ("repeated", day.repeated)):
                for rec in _sorted_records(records):
                    obj = {"date": day.date, "status": status}
                    obj.update(rec.to_json_dict())
                    lines.append(json.dumps(obj, separators=(",", ":")))
        return "\n".join(lines) + ("\n" if lines else "")
    if format == "csv":
        rows = [
            "date,status,project,first_alarm_date,models_fired,"
            "score_logreg,score_svm,repeat_count"
        ]
        for day in report.days:
            for status, records in (("new", day.new), ("repeated", day.repeated)):
                for rec in _sorted_records(records):
                    rows.append(
                        f"{day.date},{status},{rec.project},{rec.first_alarm_date},"
                        f"{'+'.join(rec.models_fired)},{rec.score_logreg!r},"
                        f"{rec.score_svm!r},{rec.repeat_count}"
                    )
        return "\n".join(rows) + "\n"
    if format == "text":
        lines = []
        total_new = total_rep = 0
        for day in report.days:
            lines.append(f"{day.date}: {len(day.new)} new, {len(day.repeated)} repeated")
            total_new += len(day.new)
            total_rep += len(day.repeated)
            for rec in _sorted_records(day.new):
                lines.append(
                    f"  NEW {rec.project} models={'+'.join(rec.models_fired)} "
                    f"logreg={rec.score_logreg:.4f} svm={rec.score_svm:.4f}"
                )
            for rec in _sorted_records(day.repeated):
                lines.append(
                    f"  REP {rec.project} first={rec.first_alarm_date} "
                    f"count={rec.repeat_count}"
                )
        lines.append(f"total: {total_new} new, {total_rep} repeated")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {format!r}")


def emit_report(report: AlarmReport, format: str, path: str | os.PathLike) -> Path:
    """Write the rendered report; identical reports yield identical bytes."""
    p = Path(path)
    p.write_text(render_report(report, format))
    return p


def alarm_count(report: AlarmReport) -> int:
    return sum(len(d.new) + len(d.repeated) for d in report.days)
