"""Shared hand-built fixtures.

PROJECT_A is a small timeline touching every stream, with prices chosen so
drawdown/recovery values are exact by hand: the price walk 100, 150, 1, 2
gives forward drops of 0.99, 149/150, -1 and a trough that rebounds 100%.
"""
from __future__ import annotations

from pathlib import Path

import pytest

from rugscope.ingest import build_timeline
from rugscope.records import (
    DEAD_ADDRESS,
    MARKET_OPENSEA_SEAPORT,
    MARKET_OPENSEA_WYVERN,
    NULL_ADDRESS,
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
)

DATA_DIR = Path(__file__).parent / "data"

ADDR_A = "0x" + "aa" * 20
CREATOR = "0x" + "cc" * 20
U1 = "0x" + "01" * 20
U2 = "0x" + "02" * 20
U3 = "0x" + "03" * 20
OPERATOR = "0x" + "0f" * 20

LAUNCH = 1_650_000_000


def _tx(n: int) -> str:
    return "0x" + format(n, "064x")


def make_project_a() -> ProjectTimeline:
    metadata = ProjectMetadata(
        project=ADDR_A,
        name="Test Collection Alpha",
        creator=CREATOR,
        launch_timestamp=LAUNCH,
        standard=TokenStandard.ERC721,
        declared_total_supply=100,
    )
    transfers = [
        TransferEvent(ADDR_A, 1, NULL_ADDRESS, U1, 1, 2 * 10**16, LAUNCH + 100, _tx(1), TokenStandard.ERC721),
        TransferEvent(ADDR_A, 2, NULL_ADDRESS, U2, 1, 2 * 10**16, LAUNCH + 200, _tx(2), TokenStandard.ERC721),
        TransferEvent(ADDR_A, 3, NULL_ADDRESS, U2, 1, 0, LAUNCH + 300, _tx(3), TokenStandard.ERC721),
        TransferEvent(ADDR_A, 1, U1, U2, 1, 0, LAUNCH + 400, _tx(4), TokenStandard.ERC721),
        TransferEvent(ADDR_A, 3, U2, DEAD_ADDRESS, 1, 0, LAUNCH + 500, _tx(5), TokenStandard.ERC721),
    ]
    trades = [
        TradeRecord(ADDR_A, 1, U2, U1, 100.0, LAUNCH + 1000, MARKET_OPENSEA_SEAPORT, 2.5),
        TradeRecord(ADDR_A, 2, U3, U2, 150.0, LAUNCH + 2000, MARKET_OPENSEA_WYVERN, 0.0),
        TradeRecord(ADDR_A, 1, U1, U2, 1.0, LAUNCH + 3000, MARKET_OPENSEA_SEAPORT, 0.0),
        TradeRecord(ADDR_A, 1, U3, U1, 2.0, LAUNCH + 4000, MARKET_OPENSEA_SEAPORT, 0.0),
    ]
    approvals = [
        ApprovalEvent(ADDR_A, U1, OPERATOR, ApprovalScope.ALL, True, LAUNCH + 50),
        ApprovalEvent(ADDR_A, U1, OPERATOR, ApprovalScope.ALL, False, LAUNCH + 450),
    ]
    socials = [
        SocialSnapshot(ADDR_A, SocialPlatform.TWITTER, SocialStatus.ACTIVE, LAUNCH + 5000, LAUNCH + 4500),
        SocialSnapshot(ADDR_A, SocialPlatform.DISCORD, SocialStatus.ACTIVE, LAUNCH + 5000),
    ]
    uri_changes = [
        UriChange(ADDR_A, 1, "ipfs://alpha/1.json", LAUNCH + 600, CREATOR),
    ]
    withdrawals = [
        Withdrawal(ADDR_A, 10**18, CREATOR, LAUNCH + 5500),
        Withdrawal(ADDR_A, 5 * 10**18, CREATOR, LAUNCH + 6000),
    ]
    payments = [
        DirectPayment(ADDR_A, 10**17, U3, LAUNCH + 700),
    ]
    return build_timeline(
        metadata,
        transfers,
        trades=trades,
        approvals=approvals,
        socials=socials,
        uri_changes=uri_changes,
        withdrawals=withdrawals,
        direct_payments=payments,
    )


@pytest.fixture(scope="session")
def project_a() -> ProjectTimeline:
    return make_project_a()
