"""Stream codecs, timeline assembly, manifests, and error reporting."""
from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rugscope.errors import (
    BeforeLaunch,
    EmptyTimeline,
    MalformedEvent,
    ParseError,
    ProjectMismatch,
    SchemaMismatch,
)
from rugscope.ingest import (
    STREAM_CODECS,
    build_timeline,
    load_manifest,
    parse_trades,
    parse_transfers,
    serialize_trades,
    serialize_transfers,
    slice_until,
    write_manifest,
)
from rugscope.records import (
    MARKET_OPENSEA_SEAPORT,
    NULL_ADDRESS,
    ProjectMetadata,
    SocialPlatform,
    SocialSnapshot,
    SocialStatus,
    TokenStandard,
    TradeRecord,
    TransferEvent,
)

from conftest import ADDR_A, DATA_DIR, LAUNCH, U1, U2, make_project_a

FIXTURE_MANIFEST = DATA_DIR / "scope_fixture" / "manifest.json"


# ---------------------------------------------------------------------------
# round trips

addresses = st.integers(min_value=1, max_value=2**160 - 1).map(
    lambda n: "0x" + format(n, "040x")
)
tx_hashes = st.integers(min_value=0, max_value=2**256 - 1).map(
    lambda n: "0x" + format(n, "064x")
)
timestamps = st.integers(min_value=0, max_value=2**33)


@st.composite
def transfer_events(draw):
    frm = draw(addresses)
    to = draw(addresses.filter(lambda a: a != frm))
    if draw(st.booleans()):
        frm = NULL_ADDRESS
    return TransferEvent(
        project=ADDR_A,
        token_id=draw(st.integers(min_value=0, max_value=10**6)),
        from_addr=frm,
        to_addr=to,
        quantity=draw(st.integers(min_value=1, max_value=50)),
        value_wei=draw(st.integers(min_value=0, max_value=10**20)),
        timestamp=draw(timestamps),
        tx_hash=draw(tx_hashes),
        standard=draw(st.sampled_from(TokenStandard)),
        operator=draw(st.none() | addresses),
    )


@st.composite
def trade_records(draw):
    buyer = draw(addresses)
    seller = draw(addresses.filter(lambda a: a != buyer))
    return TradeRecord(
        project=ADDR_A,
        token_id=draw(st.integers(min_value=0, max_value=10**6)),
        buyer=buyer,
        seller=seller,
        price_usd=draw(
            st.floats(min_value=0.0, max_value=1e9, allow_nan=False, allow_infinity=False)
        ),
        timestamp=draw(timestamps),
        market=MARKET_OPENSEA_SEAPORT,
        creator_fee_usd=draw(
            st.floats(min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False)
        ),
    )


@settings(max_examples=200)
@given(st.lists(transfer_events(), max_size=20))
def test_transfer_round_trip(events):
    assert parse_transfers(serialize_transfers(events)) == events


@settings(max_examples=200)
@given(st.lists(trade_records(), max_size=20))
def test_trade_round_trip(trades):
    assert parse_trades(serialize_trades(trades)) == trades


def test_all_streams_round_trip_on_fixture(project_a):
    from rugscope.ingest import parse_metadata, serialize_metadata

    for stream, (parse, serialize) in STREAM_CODECS.items():
        records = list(getattr(project_a, stream))
        text = serialize(records)
        assert parse(text) == records
        # serialize(parse(serialize(x))) is a fixpoint
        assert serialize(parse(text)) == text
    md_text = serialize_metadata([project_a.metadata])
    assert parse_metadata(md_text) == [project_a.metadata]
    assert serialize_metadata(parse_metadata(md_text)) == md_text


# ---------------------------------------------------------------------------
# error reporting


@pytest.mark.parametrize(
    "name,line_no,fragment",
    [
        ("bad_json", 3, "invalid JSON"),
        ("missing_field", 2, "missing field 'to'"),
        ("self_transfer", 4, "itself"),
        ("extra_field", 1, "unknown field(s): extra"),
        ("bad_type", 2, "'timestamp' must be an integer"),
    ],
)
def test_malformed_lines_report_position(name, line_no, fragment):
    path = DATA_DIR / "malformed" / f"{name}.jsonl"
    with pytest.raises(ParseError) as exc_info:
        parse_transfers(path.read_text(), source=str(path))
    err = exc_info.value
    assert err.line_no == line_no
    assert fragment in str(err)
    assert f":{line_no}:" in str(err)


def test_blank_lines_are_skipped_but_counted():
    good = serialize_transfers(
        [
            TransferEvent(
                ADDR_A, 1, NULL_ADDRESS, U1, 1, 0, 5, "0x" + "0" * 64, TokenStandard.ERC721
            )
        ]
    ).strip()
    text = f"\n{good}\n\n{good}\n"
    assert len(parse_transfers(text)) == 2
    with pytest.raises(ParseError) as exc_info:
        parse_transfers(text + "not json\n")
    assert exc_info.value.line_no == 5


def test_non_object_record_rejected():
    with pytest.raises(ParseError) as exc_info:
        parse_transfers("[1, 2, 3]\n")
    assert "JSON object" in str(exc_info.value)


# ---------------------------------------------------------------------------
# timeline assembly


def _meta(project=ADDR_A, launch=LAUNCH):
    return ProjectMetadata(project, "X", U2, launch, TokenStandard.ERC721, 10)


def _mint(ts, project=ADDR_A):
    return TransferEvent(
        project, 1, NULL_ADDRESS, U1, 1, 0, ts, "0x" + "0" * 64, TokenStandard.ERC721
    )


def test_build_timeline_sorts_streams():
    tl = build_timeline(_meta(), [_mint(LAUNCH + 50), _mint(LAUNCH + 10)])
    assert [e.timestamp for e in tl.transfers] == [LAUNCH + 10, LAUNCH + 50]


def test_build_timeline_requires_transfers():
    with pytest.raises(EmptyTimeline):
        build_timeline(_meta(), [])


def test_build_timeline_rejects_foreign_records():
    other = "0x" + "bb" * 20
    with pytest.raises(ProjectMismatch):
        build_timeline(_meta(), [_mint(LAUNCH + 10, project=other)])


def test_build_timeline_rejects_pre_launch_records():
    with pytest.raises(BeforeLaunch):
        build_timeline(_meta(), [_mint(LAUNCH - 1)])


def test_pre_launch_social_checked_on_snapshot_time():
    snap = SocialSnapshot(ADDR_A, SocialPlatform.TWITTER, SocialStatus.ACTIVE, LAUNCH - 5)
    with pytest.raises(BeforeLaunch):
        build_timeline(_meta(), [_mint(LAUNCH + 10)], socials=[snap])


def test_self_transfer_rejected_at_construction():
    with pytest.raises(MalformedEvent):
        TransferEvent(ADDR_A, 1, U1, U1, 1, 0, 5, "0x" + "0" * 64, TokenStandard.ERC721)


def test_slice_until_is_causal(project_a):
    cut = LAUNCH + 2500
    sliced = slice_until(project_a, cut)
    assert all(e.timestamp <= cut for e in sliced.transfers)
    assert all(t.timestamp <= cut for t in sliced.trades)
    assert len(sliced.trades) == 2
    assert sliced.metadata == project_a.metadata
    # slicing the slice is a no-op
    assert slice_until(sliced, cut) == sliced


# ---------------------------------------------------------------------------
# manifests


def test_manifest_round_trip(tmp_path, project_a):
    loaded = load_manifest(FIXTURE_MANIFEST)
    assert list(loaded) == [ADDR_A]
    assert loaded[ADDR_A] == project_a

    # rewriting what was loaded reproduces the files byte for byte
    write_manifest(tmp_path, loaded.values())
    src_root = FIXTURE_MANIFEST.parent
    for path in sorted(src_root.rglob("*")):
        if path.is_file():
            rel = path.relative_to(src_root)
            assert (tmp_path / rel).read_bytes() == path.read_bytes(), rel


def test_manifest_requires_known_streams(tmp_path):
    obj = json.loads(FIXTURE_MANIFEST.read_text())
    obj[ADDR_A]["bogus_stream"] = "nope.jsonl"
    bad = tmp_path / "manifest.json"
    bad.write_text(json.dumps(obj))
    with pytest.raises(SchemaMismatch):
        load_manifest(bad)


def test_manifest_requires_metadata_and_transfers(tmp_path):
    obj = json.loads(FIXTURE_MANIFEST.read_text())
    del obj[ADDR_A]["transfers"]
    bad = tmp_path / "manifest.json"
    bad.write_text(json.dumps(obj))
    with pytest.raises(SchemaMismatch):
        load_manifest(bad)


def test_fixture_timeline_matches_handbuilt(project_a):
    assert make_project_a() == project_a
