"""Daily monitoring loop: state lifecycle, dedupe, replay, rendering."""
from __future__ import annotations

import json
from datetime import date

import pytest

from rugscope.errors import SchemaMismatch, StateCorrupt
from rugscope.features import FEATURE_COUNT, FEATURE_NAMES
from rugscope.learn import KIND_LOGREG, KIND_SVM, Model
from rugscope.monitor import (
    MODEL_NAME_LOGREG,
    MODEL_NAME_SVM,
    AlarmRecord,
    AlarmReport,
    DailyAlarms,
    MonitorState,
    alarm_count,
    emit_report,
    load_state,
    midnight_utc,
    render_report,
    replay,
    run_daily,
    save_state,
)
from rugscope.records import (
    NULL_ADDRESS,
    ProjectMetadata,
    ProjectTimeline,
    TokenStandard,
    TradeRecord,
    TransferEvent,
)

from conftest import CREATOR, U1, U2

_IDX = {name: i for i, name in enumerate(FEATURE_NAMES)}


def _linear_weights(**named: float) -> tuple[float, ...]:
    w = [0.0] * FEATURE_COUNT
    for name, value in named.items():
        w[_IDX[name]] = value
    return tuple(w)


def _model(kind: str, weights: tuple[float, ...], bias: float) -> Model:
    return Model(
        kind=kind,
        config={},
        window_hours=24,
        seed=0,
        feature_names=FEATURE_NAMES,
        mean=(0.0,) * FEATURE_COUNT,
        std=(1.0,) * FEATURE_COUNT,
        weights=weights,
        bias=bias,
    )


# fires when at least one mint is visible
LOGREG = _model(KIND_LOGREG, _linear_weights(n_mint=4.0), -2.0)
# fires when at least one trade is visible
SVM = _model(KIND_SVM, _linear_weights(n_trade=1.0), -0.5)


def _addr(n: int) -> str:
    return "0x" + f"{n:02x}" * 20


def _project(addr: str, launch: int, mint_ts: int | None = None, trade_ts: int | None = None):
    transfers = ()
    if mint_ts is not None:
        transfers = (
            TransferEvent(
                addr, 1, NULL_ADDRESS, U1, 1, 0, mint_ts, "0x" + "4" * 64,
                TokenStandard.ERC721,
            ),
        )
    trades = ()
    if trade_ts is not None:
        trades = (TradeRecord(addr, 1, U1, U2, 5.0, trade_ts, "M"),)
    meta = ProjectMetadata(addr, "Quiet Garden Club", CREATOR, launch, TokenStandard.ERC721)
    return ProjectTimeline(metadata=meta, transfers=transfers, trades=trades)


D1, D2, D3, D4 = "2022-03-01", "2022-03-02", "2022-03-03", "2022-03-04"
M1 = midnight_utc(D1)

EARLY = _addr(0x11)       # mints long before the window: LogReg every day
AT_MIDNIGHT = _addr(0x12) # launches exactly at the first cutoff
UNION = _addr(0x13)       # mint first, trade appears a day later
LATE_TRADE = _addr(0x14)  # only ever trades, starting day three
UNLAUNCHED = _addr(0x15)  # launches after the whole range
QUIET = _addr(0x16)       # never does anything alarming


def _manifest():
    return {
        EARLY: _project(EARLY, M1 - 10 * 86400, mint_ts=M1 - 9 * 86400),
        AT_MIDNIGHT: _project(AT_MIDNIGHT, M1, mint_ts=M1),
        UNION: _project(UNION, M1 - 5 * 86400, mint_ts=M1 - 86400, trade_ts=M1 + 3600),
        LATE_TRADE: _project(LATE_TRADE, M1 - 5 * 86400, trade_ts=midnight_utc(D2) + 3600),
        UNLAUNCHED: _project(UNLAUNCHED, midnight_utc("2022-03-10"), mint_ts=midnight_utc("2022-03-10")),
        QUIET: _project(QUIET, M1 - 5 * 86400),
    }


def test_midnight_utc_pin():
    assert midnight_utc("2022-01-01") == 1640995200
    assert midnight_utc("2022-03-01") == 1640995200 + 59 * 86400
    assert midnight_utc(date(2022, 3, 1)) == midnight_utc("2022-03-01")


def test_alarm_record_validation_and_json():
    with pytest.raises(ValueError):
        AlarmRecord(EARLY, D1, (), 0.1, 0.2)
    with pytest.raises(ValueError):
        AlarmRecord(EARLY, D1, (MODEL_NAME_SVM,), 0.1, 0.2, repeat_count=0)
    rec = AlarmRecord(EARLY, D1, (MODEL_NAME_LOGREG, MODEL_NAME_SVM), 0.9, 1.5, 3)
    assert AlarmRecord.from_json_dict(rec.to_json_dict()) == rec


# ---------------------------------------------------------------------------
# state files


def test_state_round_trip(tmp_path):
    state = MonitorState(
        records={EARLY: AlarmRecord(EARLY, D1, (MODEL_NAME_SVM,), 0.1, 0.7, 2)},
        last_run_date=D2,
    )
    path = tmp_path / "state.json"
    save_state(state, path)
    loaded = load_state(path)
    assert loaded.records == state.records
    assert loaded.last_run_date == state.last_run_date


def test_missing_state_file_starts_fresh(tmp_path):
    state = load_state(tmp_path / "absent.json")
    assert state.records == {} and state.last_run_date is None


@pytest.mark.parametrize(
    "content",
    [
        "{ not json",
        json.dumps({"schema_version": 99, "records": {}}),
        json.dumps({"schema_version": 1}),  # records key missing
        json.dumps([1, 2, 3]),
    ],
    ids=["bad_json", "wrong_schema", "missing_records", "not_an_object"],
)
def test_corrupt_state_aborts(tmp_path, content):
    path = tmp_path / "state.json"
    path.write_text(content)
    with pytest.raises(StateCorrupt):
        load_state(path)


# ---------------------------------------------------------------------------
# the daily loop


def test_first_day_alarms():
    daily, state = run_daily(_manifest(), LOGREG, SVM, D1, MonitorState())
    assert daily.date == D1 and daily.repeated == ()
    by_project = {r.project: r for r in daily.new}
    # mint-only projects trip the logreg; nothing has traded yet
    assert set(by_project) == {EARLY, AT_MIDNIGHT, UNION}
    for rec in by_project.values():
        assert rec.models_fired == (MODEL_NAME_LOGREG,)
        assert rec.first_alarm_date == D1 and rec.repeat_count == 1
        assert rec.score_logreg > 0.5 and rec.score_svm <= 0.0
    assert state.last_run_date == D1
    assert UNLAUNCHED not in state.records and QUIET not in state.records


def test_repeat_preserves_first_date_and_unions_models():
    state = MonitorState()
    manifest = _manifest()
    _, state = run_daily(manifest, LOGREG, SVM, D1, state)
    daily2, state = run_daily(manifest, LOGREG, SVM, D2, state)
    assert daily2.new == ()
    by_project = {r.project: r for r in daily2.repeated}
    assert set(by_project) == {EARLY, AT_MIDNIGHT, UNION}
    for rec in by_project.values():
        assert rec.first_alarm_date == D1
        assert rec.repeat_count == 2
    # the union project's trade became visible: both models now on record
    assert by_project[UNION].models_fired == (MODEL_NAME_LOGREG, MODEL_NAME_SVM)
    assert by_project[UNION].score_svm == 0.5
    assert by_project[EARLY].models_fired == (MODEL_NAME_LOGREG,)


def test_projects_start_alarming_when_evidence_lands():
    state = MonitorState()
    manifest = _manifest()
    for d in (D1, D2):
        _, state = run_daily(manifest, LOGREG, SVM, d, state)
    daily3, state = run_daily(manifest, LOGREG, SVM, D3, state)
    assert {r.project for r in daily3.new} == {LATE_TRADE}
    (rec,) = daily3.new
    assert rec.models_fired == (MODEL_NAME_SVM,)
    assert rec.first_alarm_date == D3


def test_model_schema_is_checked():
    manifest = _manifest()
    with pytest.raises(SchemaMismatch, match="expected a logreg"):
        run_daily(manifest, SVM, LOGREG, D1, MonitorState())
    small = Model(
        kind=KIND_LOGREG, config={}, window_hours=24, seed=0,
        feature_names=("a", "b"), mean=(0.0, 0.0), std=(1.0, 1.0),
        weights=(0.0, 0.0), bias=0.0,
    )
    with pytest.raises(SchemaMismatch, match="features"):
        run_daily(manifest, small, SVM, D1, MonitorState())
    renamed = _model(KIND_LOGREG, _linear_weights(n_mint=4.0), -2.0)
    renamed.feature_names = tuple(reversed(FEATURE_NAMES))
    with pytest.raises(SchemaMismatch, match="names"):
        run_daily(manifest, renamed, SVM, D1, MonitorState())


# ---------------------------------------------------------------------------
# replay


def test_replay_matches_incremental_state_bytes(tmp_path):
    manifest = _manifest()

    replay_days: list[DailyAlarms] = []
    replay_state = replay(
        manifest, LOGREG, SVM, D1, D4, MonitorState(), on_day=replay_days.append
    )
    replay_path = tmp_path / "replay.json"
    save_state(replay_state, replay_path)

    # the incremental run persists and reloads its state between days
    inc_path = tmp_path / "incremental.json"
    inc_days: list[DailyAlarms] = []
    for d in (D1, D2, D3, D4):
        state = load_state(inc_path)
        daily, state = run_daily(manifest, LOGREG, SVM, d, state)
        inc_days.append(daily)
        save_state(state, inc_path)

    assert replay_path.read_bytes() == inc_path.read_bytes()
    assert AlarmReport(tuple(replay_days)) == AlarmReport(tuple(inc_days))


def test_replay_rejects_reversed_range():
    with pytest.raises(ValueError, match="after"):
        replay(_manifest(), LOGREG, SVM, D2, D1, MonitorState())


# ---------------------------------------------------------------------------
# rendering


def _small_report() -> AlarmReport:
    days: list[DailyAlarms] = []
    replay(_manifest(), LOGREG, SVM, D1, D3, MonitorState(), on_day=days.append)
    return AlarmReport(tuple(days))


def test_render_jsonl_lines_parse():
    report = _small_report()
    text = render_report(report, "jsonl")
    lines = text.splitlines()
    assert len(lines) == alarm_count(report)
    for line in lines:
        obj = json.loads(line)
        assert set(obj) == {
            "date", "status", "project", "first_alarm_date", "models_fired",
            "score_logreg", "score_svm", "repeat_count",
        }
        assert obj["status"] in {"new", "repeated"}


def test_render_csv_shape():
    report = _small_report()
    lines = render_report(report, "csv").splitlines()
    assert lines[0].startswith("date,status,project,")
    assert len(lines) == 1 + alarm_count(report)


def test_render_text_totals():
    report = _small_report()
    text = render_report(report, "text")
    new = sum(len(d.new) for d in report.days)
    rep = sum(len(d.repeated) for d in report.days)
    assert text.endswith(f"total: {new} new, {rep} repeated\n")
    assert f"{D1}: {len(report.days[0].new)} new" in text


def test_render_is_deterministic_and_emit_matches(tmp_path):
    report = _small_report()
    for fmt in ("jsonl", "csv", "text"):
        once = render_report(report, fmt)
        again = render_report(report, fmt)
        assert once == again
        path = emit_report(report, fmt, tmp_path / f"out.{fmt}")
        assert path.read_text() == once
    with pytest.raises(ValueError, match="format"):
        render_report(report, "xml")


def test_alarm_count_sums_new_and_repeated():
    report = _small_report()
    # D1: three new; D2: three repeats; D3: one new + three repeats
    assert alarm_count(report) == 10
