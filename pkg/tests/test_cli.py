"""Command-line entry points, run in-process against a small scenario."""
from __future__ import annotations

import json

import pytest

from rugscope.cli import EXIT_ALARMS, EXIT_ERROR, EXIT_OK, main
from rugscope.features import read_features_csv
from rugscope.learn import load_labels_csv, load_model
from rugscope.monitor import load_state
from rugscope.synth.generate import BASE_TS, DAY

END = BASE_TS + 100 * DAY


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """One generated scenario, featurized and with both models trained."""
    base = tmp_path_factory.mktemp("cli")
    paths = {
        "base": base,
        "manifest": base / "scenario" / "manifest.json",
        "labels": base / "scenario" / "labels.csv",
        "names": base / "scenario" / "reference_names.txt",
        "features": base / "features.csv",
        "logreg": base / "logreg.json",
        "svm": base / "svm.json",
    }
    assert main([
        "synth", "--seed", "23", "--counts", "scam=5,benign=5",
        "--horizon-days", "100", "--out-dir", str(base / "scenario"),
    ]) == EXIT_OK
    assert main([
        "featurize", "--manifest", str(paths["manifest"]),
        "--cutoff", str(END), "--out", str(paths["features"]),
    ]) == EXIT_OK
    for kind in ("logreg", "svm"):
        assert main([
            "train", "--features", str(paths["features"]),
            "--labels", str(paths["labels"]), "--window", "0",
            "--model", kind, "--out", str(paths[kind]),
        ]) == EXIT_OK
    return paths


def test_synth_artifacts(workspace):
    manifest = json.loads(workspace["manifest"].read_text())
    assert len(manifest) == 10
    labels = load_labels_csv(workspace["labels"])
    assert sum(labels.values()) == 5
    assert len(workspace["names"].read_text().splitlines()) == 16
    assert len(read_features_csv(workspace["features"])) == 10
    assert load_model(workspace["logreg"]).kind == "logreg"


def test_detect_flags_exactly_the_scams(workspace, tmp_path, capsys):
    out = tmp_path / "detect.jsonl"
    figs = tmp_path / "figs"
    rc = main([
        "detect", "--manifest", str(workspace["manifest"]), "--asof", str(END),
        "--out", str(out), "--figures-dir", str(figs),
    ])
    assert rc == EXIT_OK
    assert capsys.readouterr().out.strip() == "5/10 projects flagged"
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(rows) == 10
    labels = load_labels_csv(workspace["labels"])
    assert {r["project"] for r in rows if r["rug_pull"]} == {
        p for p, scam in labels.items() if scam
    }
    assert (figs / "detection_summary.png").exists()
    assert len(list(figs.glob("0x*_price.png"))) == 10


def test_tricks_report(workspace, tmp_path, capsys):
    out = tmp_path / "tricks.jsonl"
    rc = main([
        "tricks", "--manifest", str(workspace["manifest"]),
        "--reference-names", str(workspace["names"]), "--out", str(out),
    ])
    assert rc == EXIT_OK
    stdout = capsys.readouterr().out
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(rows) == 10
    hits = sum(1 for r in rows if r["findings"])
    assert stdout.strip() == f"{hits}/10 projects with findings"
    for r in rows:
        assert set(r) == {"project", "explicit_any", "implicit_any", "findings"}


def test_featurize_accepts_cutoff_csv(workspace, tmp_path, capsys):
    manifest = json.loads(workspace["manifest"].read_text())
    picked = sorted(manifest)[:2]
    cutoffs = tmp_path / "cutoffs.csv"
    cutoffs.write_text("project,cutoff\n" + "".join(f"{p},{END}\n" for p in picked))
    out = tmp_path / "features.csv"
    rc = main([
        "featurize", "--manifest", str(workspace["manifest"]),
        "--cutoff", str(cutoffs), "--out", str(out),
    ])
    assert rc == EXIT_OK
    captured = capsys.readouterr()
    assert "skipping" in captured.err
    vectors = read_features_csv(out)
    assert sorted(fv.project for fv in vectors) == picked


def test_eval_prints_metrics_json(workspace, capsys):
    rc = main([
        "eval", "--model", str(workspace["logreg"]),
        "--features", str(workspace["features"]),
        "--labels", str(workspace["labels"]), "--folds", "2",
    ])
    assert rc == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["holdout"]["f1"] == 1.0
    assert len(doc["cv_full"]["folds"]) == 2


def test_monitor_alarms_and_repeats(workspace, tmp_path, capsys):
    state_path = tmp_path / "state.json"
    out = tmp_path / "alarms.jsonl"
    argv = [
        "monitor", "--date", "2022-04-11",
        "--manifest", str(workspace["manifest"]),
        "--logreg", str(workspace["logreg"]), "--svm", str(workspace["svm"]),
        "--state", str(state_path), "--out", str(out),
    ]
    assert main(argv) == EXIT_ALARMS
    assert capsys.readouterr().out.strip() == f"5 alarm(s) -> {out}"
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(rows) == 5 and all(r["status"] == "new" for r in rows)
    assert len(load_state(state_path).records) == 5
    # same day again: the five come back as repeats against the saved state
    assert main(argv) == EXIT_ALARMS
    capsys.readouterr()
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert all(r["status"] == "repeated" and r["repeat_count"] == 2 for r in rows)


def test_replay_range_with_figures(workspace, tmp_path, capsys):
    out = tmp_path / "alarms.csv"
    figs = tmp_path / "figs"
    rc = main([
        "replay", "--from", "2022-04-09", "--to", "2022-04-11",
        "--manifest", str(workspace["manifest"]),
        "--logreg", str(workspace["logreg"]), "--svm", str(workspace["svm"]),
        "--state", str(tmp_path / "state.json"), "--out", str(out),
        "--format", "csv", "--figures-dir", str(figs),
    ])
    assert rc == EXIT_ALARMS
    capsys.readouterr()
    lines = out.read_text().splitlines()
    assert lines[0].startswith("date,status,project,")
    assert len(lines) == 1 + 15  # five projects, three days
    assert (figs / "alarm_timeline.png").exists()


def test_quiet_day_exits_zero(workspace, tmp_path, capsys):
    # nothing has launched yet on this date, so nothing can alarm
    rc = main([
        "monitor", "--date", "2021-06-01",
        "--manifest", str(workspace["manifest"]),
        "--logreg", str(workspace["logreg"]), "--svm", str(workspace["svm"]),
        "--state", str(tmp_path / "state.json"),
        "--out", str(tmp_path / "alarms.jsonl"),
    ])
    assert rc == EXIT_OK
    capsys.readouterr()


def test_errors_exit_one(workspace, tmp_path, capsys):
    rc = main([
        "detect", "--manifest", str(tmp_path / "absent.json"),
        "--asof", str(END), "--out", str(tmp_path / "out.jsonl"),
    ])
    assert rc == EXIT_ERROR
    assert capsys.readouterr().err.startswith("rugscope:")

    rc = main([
        "synth", "--seed", "1", "--counts", "wizards=3",
        "--out-dir", str(tmp_path / "scenario"),
    ])
    assert rc == EXIT_ERROR
    assert "wizards" in capsys.readouterr().err

    rc = main([
        "eval", "--model", str(workspace["logreg"]),
        "--features", str(workspace["features"]),
        "--labels", str(workspace["labels"]), "--folds", "1",
    ])
    assert rc == EXIT_ERROR
    assert "folds" in capsys.readouterr().err
