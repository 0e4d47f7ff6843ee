"""Parsing, serialization, and timeline assembly for project event logs.

Each record type lives in its own JSONL file: one JSON object per line,
unknown fields rejected, optional fields omitted when absent. A manifest is
a JSON object mapping project address to the per-type file paths, relative
to the manifest's own directory.
"""
from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import (
    BeforeLaunch,
    EmptyTimeline,
    MalformedEvent,
    ParseError,
    ProjectMismatch,
    SchemaMismatch,
)
from .records import (
    ApprovalEvent,
    ApprovalScope,
    DirectPayment,
    ProjectMetadata,
    ProjectTimeline,
    SocialPlatform,
    SocialSnapshot,
    SocialStatus,
    TokenStandard,
    TradeRecord,
    TransferEvent,
    UriChange,
    Withdrawal,
    normalize_address,
)

# ---------------------------------------------------------------------------
# field helpers


def _no_extras(d: dict) -> None:
    if d:
        names = ", ".join(sorted(d))
        raise ValueError(f"unknown field(s): {names}")


def _pop(d: dict, key: str, optional: bool):
    if key not in d:
        if optional:
            return None
        raise ValueError(f"missing field {key!r}")
    return d.pop(key)


def _pop_int(d: dict, key: str, optional: bool = False) -> int | None:
    v = _pop(d, key, optional)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValueError(f"field {key!r} must be an integer, got {v!r}")
    return v


def _pop_float(d: dict, key: str, optional: bool = False) -> float | None:
    v = _pop(d, key, optional)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValueError(f"field {key!r} must be a number, got {v!r}")
    return float(v)


def _pop_str(d: dict, key: str, optional: bool = False) -> str | None:
    v = _pop(d, key, optional)
    if v is None:
        return None
    if not isinstance(v, str):
        raise ValueError(f"field {key!r} must be a string, got {v!r}")
    return v


def _pop_bool(d: dict, key: str) -> bool:
    v = _pop(d, key, optional=False)
    if not isinstance(v, bool):
        raise ValueError(f"field {key!r} must be a boolean, got {v!r}")
    return v


# ---------------------------------------------------------------------------
# record <-> dict codecs (dict key order is the canonical line layout)


def transfer_to_dict(ev: TransferEvent) -> dict:
    d = {
        "project": ev.project,
        "token_id": ev.token_id,
        "from": ev.from_addr,
        "to": ev.to_addr,
        "quantity": ev.quantity,
        "value_wei": ev.value_wei,
        "timestamp": ev.timestamp,
        "tx_hash": ev.tx_hash,
        "standard": ev.standard.value,
    }
    if ev.operator is not None:
        d["operator"] = ev.operator
    return d


def transfer_from_dict(d: dict) -> TransferEvent:
    ev = TransferEvent(
        project=_pop_str(d, "project"),
        token_id=_pop_int(d, "token_id"),
        from_addr=_pop_str(d, "from"),
        to_addr=_pop_str(d, "to"),
        quantity=_pop_int(d, "quantity"),
        value_wei=_pop_int(d, "value_wei"),
        timestamp=_pop_int(d, "timestamp"),
        tx_hash=_pop_str(d, "tx_hash"),
        standard=TokenStandard(_pop_str(d, "standard")),
        operator=_pop_str(d, "operator", optional=True),
    )
    _no_extras(d)
    return ev


def trade_to_dict(tr: TradeRecord) -> dict:
    return {
        "project": tr.project,
        "token_id": tr.token_id,
        "buyer": tr.buyer,
        "seller": tr.seller,
        "price_usd": tr.price_usd,
        "timestamp": tr.timestamp,
        "market": tr.market,
        "creator_fee_usd": tr.creator_fee_usd,
    }


def trade_from_dict(d: dict) -> TradeRecord:
    tr = TradeRecord(
        project=_pop_str(d, "project"),
        token_id=_pop_int(d, "token_id"),
        buyer=_pop_str(d, "buyer"),
        seller=_pop_str(d, "seller"),
        price_usd=_pop_float(d, "price_usd"),
        timestamp=_pop_int(d, "timestamp"),
        market=_pop_str(d, "market"),
        creator_fee_usd=_pop_float(d, "creator_fee_usd"),
    )
    _no_extras(d)
    return tr


def approval_to_dict(ap: ApprovalEvent) -> dict:
    d = {
        "project": ap.project,
        "owner": ap.owner,
        "operator": ap.operator,
        "scope": ap.scope.value,
    }
    if ap.token_id is not None:
        d["token_id"] = ap.token_id
    d["granted"] = ap.granted
    d["timestamp"] = ap.timestamp
    return d


def approval_from_dict(d: dict) -> ApprovalEvent:
    ap = ApprovalEvent(
        project=_pop_str(d, "project"),
        owner=_pop_str(d, "owner"),
        operator=_pop_str(d, "operator"),
        scope=ApprovalScope(_pop_str(d, "scope")),
        token_id=_pop_int(d, "token_id", optional=True),
        granted=_pop_bool(d, "granted"),
        timestamp=_pop_int(d, "timestamp"),
    )
    _no_extras(d)
    return ap


def social_to_dict(sn: SocialSnapshot) -> dict:
    d = {
        "project": sn.project,
        "platform": sn.platform.value,
        "status": sn.status.value,
        "snapshot_timestamp": sn.snapshot_timestamp,
    }
    if sn.last_post_timestamp is not None:
        d["last_post_timestamp"] = sn.last_post_timestamp
    return d


def social_from_dict(d: dict) -> SocialSnapshot:
    sn = SocialSnapshot(
        project=_pop_str(d, "project"),
        platform=SocialPlatform(_pop_str(d, "platform")),
        status=SocialStatus(_pop_str(d, "status")),
        snapshot_timestamp=_pop_int(d, "snapshot_timestamp"),
        last_post_timestamp=_pop_int(d, "last_post_timestamp", optional=True),
    )
    _no_extras(d)
    return sn


def metadata_to_dict(md: ProjectMetadata) -> dict:
    d = {
        "project": md.project,
        "name": md.name,
        "creator": md.creator,
        "launch_timestamp": md.launch_timestamp,
        "standard": md.standard.value,
    }
    if md.declared_total_supply is not None:
        d["declared_total_supply"] = md.declared_total_supply
    return d


def metadata_from_dict(d: dict) -> ProjectMetadata:
    md = ProjectMetadata(
        project=_pop_str(d, "project"),
        name=_pop_str(d, "name"),
        creator=_pop_str(d, "creator"),
        launch_timestamp=_pop_int(d, "launch_timestamp"),
        standard=TokenStandard(_pop_str(d, "standard")),
        declared_total_supply=_pop_int(d, "declared_total_supply", optional=True),
    )
    _no_extras(d)
    return md


def uri_change_to_dict(uc: UriChange) -> dict:
    return {
        "project": uc.project,
        "token_id": uc.token_id,
        "new_uri": uc.new_uri,
        "timestamp": uc.timestamp,
        "initiator": uc.initiator,
    }


def uri_change_from_dict(d: dict) -> UriChange:
    uc = UriChange(
        project=_pop_str(d, "project"),
        token_id=_pop_int(d, "token_id"),
        new_uri=_pop_str(d, "new_uri"),
        timestamp=_pop_int(d, "timestamp"),
        initiator=_pop_str(d, "initiator"),
    )
    _no_extras(d)
    return uc


def withdrawal_to_dict(w: Withdrawal) -> dict:
    return {
        "project": w.project,
        "amount_wei": w.amount_wei,
        "to": w.to_addr,
        "timestamp": w.timestamp,
    }


def withdrawal_from_dict(d: dict) -> Withdrawal:
    w = Withdrawal(
        project=_pop_str(d, "project"),
        amount_wei=_pop_int(d, "amount_wei"),
        to_addr=_pop_str(d, "to"),
        timestamp=_pop_int(d, "timestamp"),
    )
    _no_extras(d)
    return w


def direct_payment_to_dict(p: DirectPayment) -> dict:
    return {
        "project": p.project,
        "amount_wei": p.amount_wei,
        "from": p.from_addr,
        "timestamp": p.timestamp,
    }


def direct_payment_from_dict(d: dict) -> DirectPayment:
    p = DirectPayment(
        project=_pop_str(d, "project"),
        amount_wei=_pop_int(d, "amount_wei"),
        from_addr=_pop_str(d, "from"),
        timestamp=_pop_int(d, "timestamp"),
    )
    _no_extras(d)
    return p


# ---------------------------------------------------------------------------
# JSONL drivers


def _parse_jsonl(
    text_or_lines: str | Iterable[str],
    from_dict: Callable[[dict], object],
    source: str | None = None,
) -> list:
    if isinstance(text_or_lines, str):
        lines = text_or_lines.splitlines()
    else:
        lines = list(text_or_lines)
    out = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("record must be a JSON object")
            out.append(from_dict(obj))
        except json.JSONDecodeError as exc:
            raise ParseError(line_no, f"invalid JSON: {exc.msg}", source) from exc
        except (ValueError, MalformedEvent) as exc:
            raise ParseError(line_no, str(exc), source) from exc
    return out


def _serialize_jsonl(records: Sequence, to_dict: Callable) -> str:
    if not records:
        return ""
    return "\n".join(json.dumps(to_dict(r), separators=(",", ":")) for r in records) + "\n"


def parse_transfers(text, source=None) -> list[TransferEvent]:
    """Decode transfer JSONL; raises ParseError with the offending line."""
    return _parse_jsonl(text, transfer_from_dict, source)


def parse_trades(text, source=None) -> list[TradeRecord]:
    return _parse_jsonl(text, trade_from_dict, source)


def parse_approvals(text, source=None) -> list[ApprovalEvent]:
    return _parse_jsonl(text, approval_from_dict, source)


def parse_socials(text, source=None) -> list[SocialSnapshot]:
    return _parse_jsonl(text, social_from_dict, source)


def parse_metadata(text, source=None) -> list[ProjectMetadata]:
    return _parse_jsonl(text, metadata_from_dict, source)


def parse_uri_changes(text, source=None) -> list[UriChange]:
    return _parse_jsonl(text, uri_change_from_dict, source)


def parse_withdrawals(text, source=None) -> list[Withdrawal]:
    return _parse_jsonl(text, withdrawal_from_dict, source)


def parse_direct_payments(text, source=None) -> list[DirectPayment]:
    return _parse_jsonl(text, direct_payment_from_dict, source)


def serialize_transfers(records: Sequence[TransferEvent]) -> str:
    """Encode records as canonical JSONL (fixed key order, compact)."""
    return _serialize_jsonl(records, transfer_to_dict)


def serialize_trades(records: Sequence[TradeRecord]) -> str:
    return _serialize_jsonl(records, trade_to_dict)


def serialize_approvals(records: Sequence[ApprovalEvent]) -> str:
    return _serialize_jsonl(records, approval_to_dict)


def serialize_socials(records: Sequence[SocialSnapshot]) -> str:
    return _serialize_jsonl(records, social_to_dict)


def serialize_metadata(records: Sequence[ProjectMetadata]) -> str:
    return _serialize_jsonl(records, metadata_to_dict)


def serialize_uri_changes(records: Sequence[UriChange]) -> str:
    return _serialize_jsonl(records, uri_change_to_dict)


def serialize_withdrawals(records: Sequence[Withdrawal]) -> str:
    return _serialize_jsonl(records, withdrawal_to_dict)


def serialize_direct_payments(records: Sequence[DirectPayment]) -> str:
    return _serialize_jsonl(records, direct_payment_to_dict)


#: stream name -> (parser, serializer); "metadata" handled separately since a
#: project has exactly one metadata record.
STREAM_CODECS = {
    "transfers": (parse_transfers, serialize_transfers),
    "trades": (parse_trades, serialize_trades),
    "approvals": (parse_approvals, serialize_approvals),
    "socials": (parse_socials, serialize_socials),
    "uri_changes": (parse_uri_changes, serialize_uri_changes),
    "withdrawals": (parse_withdrawals, serialize_withdrawals),
    "direct_payments": (parse_direct_payments, serialize_direct_payments),
}

STREAM_NAMES = tuple(STREAM_CODECS)


# ---------------------------------------------------------------------------
# timeline assembly


def _check_project(records: Sequence, project: str) -> None:
    for r in records:
        if r.project != project:
            raise ProjectMismatch(f"record for {r.project} mixed into {project}")


def build_timeline(
    metadata: ProjectMetadata,
    transfers: Sequence[TransferEvent],
    trades: Sequence[TradeRecord] = (),
    approvals: Sequence[ApprovalEvent] = (),
    socials: Sequence[SocialSnapshot] = (),
    uri_changes: Sequence[UriChange] = (),
    withdrawals: Sequence[Withdrawal] = (),
    direct_payments: Sequence[DirectPayment] = (),
) -> ProjectTimeline:
    """Assemble one project's streams, sorted by time and cross-checked.

    Every record must belong to metadata.project, at least one transfer must
    exist, and nothing may predate the launch timestamp.
    """
    if not transfers:
        raise EmptyTimeline(f"no transfer events for {metadata.project}")
    streams = (transfers, trades, approvals, socials, uri_changes, withdrawals, direct_payments)
    for s in streams:
        _check_project(s, metadata.project)
    launch = metadata.launch_timestamp
    for s in streams:
        for r in s:
            ts = r.snapshot_timestamp if isinstance(r, SocialSnapshot) else r.timestamp
            if ts < launch:
                raise BeforeLaunch(
                    f"{type(r).__name__} at {ts} predates launch {launch} of {metadata.project}"
                )
    return ProjectTimeline(
        metadata=metadata,
        transfers=tuple(sorted(transfers, key=lambda e: e.timestamp)),
        trades=tuple(sorted(trades, key=lambda t: t.timestamp)),
        approvals=tuple(sorted(approvals, key=lambda a: a.timestamp)),
        socials=tuple(sorted(socials, key=lambda s: s.snapshot_timestamp)),
        uri_changes=tuple(sorted(uri_changes, key=lambda u: u.timestamp)),
        withdrawals=tuple(sorted(withdrawals, key=lambda w: w.timestamp)),
        direct_payments=tuple(sorted(direct_payments, key=lambda p: p.timestamp)),
    )


def slice_until(timeline: ProjectTimeline, asof: int) -> ProjectTimeline:
    """Causal view of a timeline: drop every record after asof.

    The result may have empty streams; downstream checks treat that as
    absence of evidence, not an error.
    """
    return ProjectTimeline(
        metadata=timeline.metadata,
        transfers=tuple(e for e in timeline.transfers if e.timestamp <= asof),
        trades=tuple(t for t in timeline.trades if t.timestamp <= asof),
        approvals=tuple(a for a in timeline.approvals if a.timestamp <= asof),
        socials=tuple(s for s in timeline.socials if s.snapshot_timestamp <= asof),
        uri_changes=tuple(u for u in timeline.uri_changes if u.timestamp <= asof),
        withdrawals=tuple(w for w in timeline.withdrawals if w.timestamp <= asof),
        direct_payments=tuple(p for p in timeline.direct_payments if p.timestamp <= asof),
    )


# ---------------------------------------------------------------------------
# manifests


def load_manifest(path: str | os.PathLike) -> dict[str, ProjectTimeline]:
    """Load every project timeline named by a manifest file.

    The manifest maps project address -> {stream name -> relative path}.
    `metadata` and `transfers` entries are required per project; the other
    streams are optional. Returns timelines keyed by address, sorted.
    """
    p = Path(path)
    try:
        obj = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, f"invalid manifest JSON: {exc.msg}", str(p)) from exc
    if not isinstance(obj, dict):
        raise SchemaMismatch(f"{p}: manifest must be a JSON object")
    base = p.parent
    out: dict[str, ProjectTimeline] = {}
    for addr in sorted(obj):
        entry = obj[addr]
        if not isinstance(entry, dict):
            raise SchemaMismatch(f"{p}: entry for {addr} must be an object")
        out[normalize_address(addr)] = load_project(base, addr, entry)
    return out


def load_project(base: Path, addr: str, entry: dict) -> ProjectTimeline:
    for required in ("metadata", "transfers"):
        if required not in entry:
            raise SchemaMismatch(f"manifest entry for {addr} missing {required!r}")
    unknown = set(entry) - set(STREAM_NAMES) - {"metadata"}
    if unknown:
        raise SchemaMismatch(f"manifest entry for {addr} has unknown stream(s): {sorted(unknown)}")

    md_path = base / entry["metadata"]
    md_records = parse_metadata(md_path.read_text(), source=str(md_path))
    if len(md_records) != 1:
        raise SchemaMismatch(f"{md_path}: expected exactly one metadata record, got {len(md_records)}")

    streams: dict[str, list] = {}
    for name in STREAM_NAMES:
        if name in entry:
            f = base / entry[name]
            parser = STREAM_CODECS[name][0]
            streams[name] = parser(f.read_text(), source=str(f))
        else:
            streams[name] = []
    return build_timeline(
        md_records[0],
        streams["transfers"],
        trades=streams["trades"],
        approvals=streams["approvals"],
        socials=streams["socials"],
        uri_changes=streams["uri_changes"],
        withdrawals=streams["withdrawals"],
        direct_payments=streams["direct_payments"],
    )


def write_project(
    out_dir: str | os.PathLike, timeline: ProjectTimeline
) -> dict[str, str]:
    """Write one timeline's streams under out_dir/<address>/ and return the
    manifest entry (paths relative to out_dir)."""
    base = Path(out_dir)
    addr = timeline.project
    proj_dir = base / addr
    proj_dir.mkdir(parents=True, exist_ok=True)
    entry: dict[str, str] = {}

    md_file = proj_dir / "metadata.jsonl"
    md_file.write_text(serialize_metadata([timeline.metadata]))
    entry["metadata"] = f"{addr}/metadata.jsonl"

    stream_data = {
        "transfers": (timeline.transfers, serialize_transfers),
        "trades": (timeline.trades, serialize_trades),
        "approvals": (timeline.approvals, serialize_approvals),
        "socials": (timeline.socials, serialize_socials),
        "uri_changes": (timeline.uri_changes, serialize_uri_changes),
        "withdrawals": (timeline.withdrawals, serialize_withdrawals),
        "direct_payments": (timeline.direct_payments, serialize_direct_payments),
    }
    for name, (records, serializer) in stream_data.items():
        if not records and name != "transfers":
            continue
        f = proj_dir / f"{name}.jsonl"
        f.write_text(serializer(records))
        entry[name] = f"{addr}/{name}.jsonl"
    return entry


def write_manifest(
    out_dir: str | os.PathLike, timelines: Iterable[ProjectTimeline]
) -> Path:
    """Write all timelines plus a manifest.json under out_dir."""
    base = Path(out_dir)
    base.mkdir(parents=True, exist_ok=True)
    manifest = {}
    for tl in sorted(timelines, key=lambda t: t.project):
        manifest[tl.project] = write_project(base, tl)
    mf = base / "manifest.json"
    mf.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return mf
