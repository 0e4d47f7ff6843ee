"""Command-line interface.

Subcommands mirror the library layers: synth, detect, tricks, featurize,
train, eval, monitor, replay. Exit codes: 0 success, 1 error, 2 the run
completed and raised at least one alarm.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .detector import (
    DEFAULT_DRAWDOWN_THRESHOLD,
    DEFAULT_INACTIVITY_DAYS,
    DEFAULT_LIVENESS_THRESHOLD,
    DEFAULT_RECOVERY_THRESHOLD,
    detect_rug_pull,
    price_sequence,
)
from .errors import RugscopeError
from .features import featurize, read_features_csv, write_features_csv
from .ingest import load_manifest, slice_until
from .learn import (
    TRAINERS,
    dataset_from_features,
    evaluate,
    load_labels_csv,
    load_model,
    save_model,
)
from .monitor import (
    AlarmReport,
    alarm_count,
    emit_report,
    load_state,
    replay,
    run_daily,
    save_state,
)
from .tricks import (
    DEFAULT_RATIO_HIGH,
    DEFAULT_RATIO_MEDIUM,
    DEFAULT_WASH_THRESHOLD,
    analyze_tricks,
)
from .synth import generate, parse_counts_spec, write_scenario

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_ALARMS = 2


def _write_jsonl(path: str, dicts) -> None:
    with open(path, "w") as fh:
        for d in dicts:
            fh.write(json.dumps(d, sort_keys=True) + "\n")


def _read_names(path: str) -> tuple[str, ...]:
    lines = Path(path).read_text().splitlines()
    return tuple(line.strip() for line in lines if line.strip())


def _cutoff_map(raw: str, projects) -> dict[str, int]:
    """--cutoff is either one unix timestamp for every project or a CSV file
    of project,cutoff rows."""
    try:
        ts = int(raw)
    except ValueError:
        pass
    else:
        return {p: ts for p in projects}
    import csv

    out: dict[str, int] = {}
    with open(raw, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"project", "cutoff"} <= set(reader.fieldnames):
            raise ValueError(f"{raw}: need 'project' and 'cutoff' columns")
        for row in reader:
            out[row["project"]] = int(row["cutoff"])
    return out


# ---------------------------------------------------------------------------
# subcommands


def _cmd_synth(args: argparse.Namespace) -> int:
    scenario = generate(
        args.seed,
        parse_counts_spec(args.counts),
        horizon_days=args.horizon_days,
        launch_spread_days=args.launch_spread_days,
    )
    manifest = write_scenario(scenario, args.out_dir)
    print(manifest)
    return EXIT_OK


def _cmd_detect(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest)
    reports = {}
    for addr, tl in manifest.items():
        reports[addr] = detect_rug_pull(
            tl,
            args.asof,
            drawdown_threshold=args.drawdown,
            recovery_threshold=args.recovery,
            liveness_threshold=args.liveness,
            inactivity_days=args.inactivity_days,
        )
    _write_jsonl(args.out, (r.to_json_dict() for r in reports.values()))
    if args.figures_dir:
        from . import report as rpt

        fig_dir = Path(args.figures_dir)
        fig_dir.mkdir(parents=True, exist_ok=True)
        rpt.render_detection_summary(reports, fig_dir)
        for addr, tl in manifest.items():
            seq = price_sequence(slice_until(tl, args.asof).trades)
            rpt.render_price_figure(addr, seq, fig_dir, args.drawdown)
    flagged = sum(1 for r in reports.values() if r.rug_pull)
    print(f"{flagged}/{len(reports)} projects flagged")
    return EXIT_OK


def _cmd_tricks(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest)
    names = _read_names(args.reference_names) if args.reference_names else ()
    reports = {}
    for addr, tl in manifest.items():
        reports[addr] = analyze_tricks(
            tl,
            reference_names=names,
            wash_threshold=args.wash_threshold,
            ratio_high=args.ratio_high,
            ratio_medium=args.ratio_medium,
            wyvern_only=args.wyvern_only,
        )
    _write_jsonl(args.out, (r.to_json_dict() for r in reports.values()))
    if args.figures_dir:
        from . import report as rpt

        fig_dir = Path(args.figures_dir)
        fig_dir.mkdir(parents=True, exist_ok=True)
        rpt.render_trick_summary(reports, fig_dir)
    hit = sum(1 for r in reports.values() if r.findings)
    print(f"{hit}/{len(reports)} projects with findings")
    return EXIT_OK


def _cmd_featurize(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest)
    cutoffs = _cutoff_map(args.cutoff, list(manifest))
    vectors = []
    for addr, tl in manifest.items():
        if addr not in cutoffs:
            print(f"skipping {addr}: no cutoff given", file=sys.stderr)
            continue
        if cutoffs[addr] < tl.metadata.launch_timestamp:
            print(f"skipping {addr}: cutoff precedes launch", file=sys.stderr)
            continue
        vectors.append(featurize(tl, cutoffs[addr]))
    write_features_csv(vectors, args.out)
    print(f"{len(vectors)} feature rows -> {args.out}")
    return EXIT_OK


def _cmd_train(args: argparse.Namespace) -> int:
    vectors = read_features_csv(args.features)
    labels = load_labels_csv(args.labels)
    dataset = dataset_from_features(vectors, labels, args.window, split_seed=args.split_seed)
    model = TRAINERS[args.model](dataset, None, args.seed)
    save_model(model, args.out)
    print(f"{args.model} (window {args.window}h) -> {args.out}")
    return EXIT_OK


def _cmd_eval(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    vectors = read_features_csv(args.features)
    labels = load_labels_csv(args.labels)
    dataset = dataset_from_features(
        vectors, labels, model.window_hours, split_seed=args.split_seed
    )
    report = evaluate(model, dataset, folds=args.folds)
    print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
    return EXIT_OK


def _finish_monitoring(args: argparse.Namespace, report: AlarmReport, state) -> int:
    save_state(state, args.state)
    emit_report(report, args.format, args.out)
    if args.figures_dir:
        from . import report as rpt

        fig_dir = Path(args.figures_dir)
        fig_dir.mkdir(parents=True, exist_ok=True)
        rpt.render_alarm_timeline(report, fig_dir)
    n = alarm_count(report)
    print(f"{n} alarm(s) -> {args.out}")
    return EXIT_ALARMS if n else EXIT_OK


def _cmd_monitor(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest)
    logreg = load_model(args.logreg)
    svm = load_model(args.svm)
    state = load_state(args.state)
    daily, state = run_daily(manifest, logreg, svm, args.date, state)
    return _finish_monitoring(args, AlarmReport(days=(daily,)), state)


def _cmd_replay(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest)
    logreg = load_model(args.logreg)
    svm = load_model(args.svm)
    state = load_state(args.state)
    days = []
    state = replay(
        manifest, logreg, svm, args.from_date, args.to_date, state,
        on_day=days.append,
    )
    return _finish_monitoring(args, AlarmReport(days=tuple(days)), state)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rugscope", description="NFT rug-pull detection toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a seeded synthetic scenario")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument(
        "--counts", required=True,
        help="name=count[,name=count...]; names are archetypes or scam/benign",
    )
    p.add_argument("--horizon-days", type=int, default=180)
    p.add_argument("--launch-spread-days", type=int, default=None)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("detect", help="run the four-check rule detector")
    p.add_argument("--manifest", required=True)
    p.add_argument("--asof", type=int, required=True, help="analysis time (unix)")
    p.add_argument("--drawdown", type=float, default=DEFAULT_DRAWDOWN_THRESHOLD)
    p.add_argument("--recovery", type=float, default=DEFAULT_RECOVERY_THRESHOLD)
    p.add_argument("--liveness", type=float, default=DEFAULT_LIVENESS_THRESHOLD)
    p.add_argument("--inactivity-days", type=int, default=DEFAULT_INACTIVITY_DAYS)
    p.add_argument("--out", required=True, help="report JSONL path")
    p.add_argument("--figures-dir", default=None)
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("tricks", help="scan for scam trick patterns")
    p.add_argument("--manifest", required=True)
    p.add_argument("--reference-names", default=None, help="one name per line")
    p.add_argument("--wash-threshold", type=int, default=DEFAULT_WASH_THRESHOLD)
    p.add_argument("--ratio-high", type=float, default=DEFAULT_RATIO_HIGH)
    p.add_argument("--ratio-medium", type=float, default=DEFAULT_RATIO_MEDIUM)
    p.add_argument("--wyvern-only", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--figures-dir", default=None)
    p.set_defaults(func=_cmd_tricks)

    p = sub.add_parser("featurize", help="extract the 55-feature vectors")
    p.add_argument("--manifest", required=True)
    p.add_argument(
        "--cutoff", required=True,
        help="unix timestamp, or a CSV of project,cutoff rows",
    )
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_featurize)

    p = sub.add_parser("train", help="train a classifier on featurized rows")
    p.add_argument("--features", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--window", type=int, required=True, help="lead time in hours")
    p.add_argument("--model", choices=sorted(TRAINERS), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--split-seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="holdout + cross-validation metrics")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--split-seed", type=int, default=0)
    p.set_defaults(func=_cmd_eval)

    def monitoring_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--manifest", required=True)
        p.add_argument("--logreg", required=True)
        p.add_argument("--svm", required=True)
        p.add_argument("--state", required=True)
        p.add_argument("--out", required=True)
        p.add_argument("--format", choices=("jsonl", "csv", "text"), default="jsonl")
        p.add_argument("--figures-dir", default=None)

    p = sub.add_parser("monitor", help="score one day and update alarm state")
    p.add_argument("--date", required=True, help="YYYY-MM-DD")
    monitoring_args(p)
    p.set_defaults(func=_cmd_monitor)

    p = sub.add_parser("replay", help="run the daily monitor over a date range")
    p.add_argument("--from", dest="from_date", required=True, help="YYYY-MM-DD")
    p.add_argument("--to", dest="to_date", required=True, help="YYYY-MM-DD")
    monitoring_args(p)
    p.set_defaults(func=_cmd_replay)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RugscopeError, OSError, ValueError) as exc:
        print(f"rugscope: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
