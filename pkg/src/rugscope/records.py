"""Domain records for NFT project event logs.

All timestamps are unix seconds (UTC). Monetary amounts are plain ints in
wei for on-chain value and floats for USD. Addresses normalize to lowercase
hex with the 0x prefix.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from .errors import MalformedEvent

NULL_ADDRESS = "0x" + "0" * 40
DEAD_ADDRESS = "0x000000000000000000000000000000000000dead"
BURN_ADDRESSES = frozenset({NULL_ADDRESS, DEAD_ADDRESS})

_ADDRESS_RE = re.compile(r"^0x[0-9a-fA-F]{40}$")


def normalize_address(value: str) -> str:
    """Lowercase a hex address, rejecting anything that is not one."""
    if not isinstance(value, str) or not _ADDRESS_RE.match(value):
        raise ValueError(f"not a hex address: {value!r}")
    return value.lower()


class TransferKind(str, enum.Enum):
    MINT = "Mint"
    SWAP = "Swap"
    BURN = "Burn"


class TokenStandard(str, enum.Enum):
    ERC721 = "ERC721"
    ERC1155 = "ERC1155"


class ApprovalScope(str, enum.Enum):
    ALL = "All"
    SINGLE_TOKEN = "SingleToken"


class SocialPlatform(str, enum.Enum):
    TWITTER = "Twitter"
    DISCORD = "Discord"
    TELEGRAM = "Telegram"


class SocialStatus(str, enum.Enum):
    ACTIVE = "Active"
    SUSPENDED = "Suspended"
    DELETED = "Deleted"
    INVITE_EXPIRED = "InviteExpired"
    SERVER_DOWN = "ServerDown"


#: Statuses that on their own mean the account is gone.
DEAD_STATUSES = frozenset(
    {
        SocialStatus.SUSPENDED,
        SocialStatus.DELETED,
        SocialStatus.INVITE_EXPIRED,
        SocialStatus.SERVER_DOWN,
    }
)

#: Marketplace identifiers seen in trade records. Free-form strings are
#: accepted; these two matter for the creator-fee market filter.
MARKET_OPENSEA_WYVERN = "OpenSeaWyvern"
MARKET_OPENSEA_SEAPORT = "OpenSeaSeaport"


def _classify(from_addr: str, to_addr: str) -> TransferKind:
    if from_addr == to_addr:
        raise MalformedEvent(f"transfer from an address to itself: {from_addr}")
    if from_addr == NULL_ADDRESS:
        if to_addr in BURN_ADDRESSES:
            raise MalformedEvent("mint straight into a burn address")
        return TransferKind.MINT
    if to_addr in BURN_ADDRESSES:
        return TransferKind.BURN
    return TransferKind.SWAP


@dataclass(frozen=True)
class TransferEvent:
    """One token transfer. `operator` is the tx initiator when it differs
    from the sender (absent means the sender moved its own token)."""

    project: str
    token_id: int
    from_addr: str
    to_addr: str
    quantity: int
    value_wei: int
    timestamp: int
    tx_hash: str
    standard: TokenStandard
    operator: str | None = None
    kind: TransferKind = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "project", normalize_address(self.project))
        object.__setattr__(self, "from_addr", normalize_address(self.from_addr))
        object.__setattr__(self, "to_addr", normalize_address(self.to_addr))
        if self.operator is not None:
            object.__setattr__(self, "operator", normalize_address(self.operator))
        if self.token_id < 0:
            raise ValueError(f"negative token id: {self.token_id}")
        if self.quantity < 1:
            raise ValueError(f"quantity must be >= 1, got {self.quantity}")
        if self.value_wei < 0:
            raise ValueError(f"negative value_wei: {self.value_wei}")
        if self.timestamp < 0:
            raise ValueError(f"negative timestamp: {self.timestamp}")
        object.__setattr__(self, "kind", _classify(self.from_addr, self.to_addr))

    @property
    def initiator(self) -> str:
        return self.operator if self.operator is not None else self.from_addr


def classify_transfer(event: TransferEvent) -> TransferKind:
    """Mint when from is the null address, burn when to is a burn address,
    swap otherwise. Self-transfers and mints into burn addresses are
    malformed."""
    return _classify(event.from_addr, event.to_addr)


@dataclass(frozen=True)
class TradeRecord:
    """One completed sale on a marketplace, denominated in USD."""

    project: str
    token_id: int
    buyer: str
    seller: str
    price_usd: float
    timestamp: int
    market: str
    creator_fee_usd: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "project", normalize_address(self.project))
        object.__setattr__(self, "buyer", normalize_address(self.buyer))
        object.__setattr__(self, "seller", normalize_address(self.seller))
        if self.buyer == self.seller:
            raise MalformedEvent(f"trade with buyer == seller: {self.buyer}")
        if self.token_id < 0:
            raise ValueError(f"negative token id: {self.token_id}")
        if not self.price_usd >= 0.0:
            raise ValueError(f"price_usd must be >= 0, got {self.price_usd}")
        if not self.creator_fee_usd >= 0.0:
            raise ValueError(f"creator_fee_usd must be >= 0, got {self.creator_fee_usd}")
        if self.timestamp < 0:
            raise ValueError(f"negative timestamp: {self.timestamp}")
        if not self.market:
            raise ValueError("market must be a non-empty string")


@dataclass(frozen=True)
class ApprovalEvent:
    """A grant or revocation of transfer rights from owner to operator."""

    project: str
    owner: str
    operator: str
    scope: ApprovalScope
    granted: bool
    timestamp: int
    token_id: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "project", normalize_address(self.project))
        object.__setattr__(self, "owner", normalize_address(self.owner))
        object.__setattr__(self, "operator", normalize_address(self.operator))
        if self.scope is ApprovalScope.SINGLE_TOKEN:
            if self.token_id is None:
                raise ValueError("SingleToken approval needs a token_id")
            if self.token_id < 0:
                raise ValueError(f"negative token id: {self.token_id}")
        elif self.token_id is not None:
            raise ValueError("All-scope approval must not carry a token_id")
        if self.timestamp < 0:
            raise ValueError(f"negative timestamp: {self.timestamp}")


@dataclass(frozen=True)
class SocialSnapshot:
    """State of one social account observed at snapshot_timestamp."""

    project: str
    platform: SocialPlatform
    status: SocialStatus
    snapshot_timestamp: int
    last_post_timestamp: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "project", normalize_address(self.project))
        if self.snapshot_timestamp < 0:
            raise ValueError(f"negative timestamp: {self.snapshot_timestamp}")
        if self.last_post_timestamp is not None and self.last_post_timestamp < 0:
            raise ValueError(f"negative timestamp: {self.last_post_timestamp}")


@dataclass(frozen=True)
class ProjectMetadata:
    """Static facts about an NFT project contract."""

    project: str
    name: str
    creator: str
    launch_timestamp: int
    standard: TokenStandard
    declared_total_supply: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "project", normalize_address(self.project))
        object.__setattr__(self, "creator", normalize_address(self.creator))
        if not self.name:
            raise ValueError("project name must be non-empty")
        if self.launch_timestamp < 0:
            raise ValueError(f"negative timestamp: {self.launch_timestamp}")
        if self.declared_total_supply is not None and self.declared_total_supply < 0:
            raise ValueError("declared_total_supply must be >= 0")


@dataclass(frozen=True)
class UriChange:
    """A token's metadata URI being set or replaced."""

    project: str
    token_id: int
    new_uri: str
    timestamp: int
    initiator: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "project", normalize_address(self.project))
        object.__setattr__(self, "initiator", normalize_address(self.initiator))
        if self.token_id < 0:
            raise ValueError(f"negative token id: {self.token_id}")
        if self.timestamp < 0:
            raise ValueError(f"negative timestamp: {self.timestamp}")


@dataclass(frozen=True)
class Withdrawal:
    """Ether leaving the project contract."""

    project: str
    amount_wei: int
    to_addr: str
    timestamp: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "project", normalize_address(self.project))
        object.__setattr__(self, "to_addr", normalize_address(self.to_addr))
        if self.amount_wei <= 0:
            raise ValueError(f"withdrawal amount must be > 0, got {self.amount_wei}")
        if self.timestamp < 0:
            raise ValueError(f"negative timestamp: {self.timestamp}")


@dataclass(frozen=True)
class DirectPayment:
    """Ether paid straight into the project contract."""

    project: str
    amount_wei: int
    from_addr: str
    timestamp: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "project", normalize_address(self.project))
        object.__setattr__(self, "from_addr", normalize_address(self.from_addr))
        if self.amount_wei <= 0:
            raise ValueError(f"payment amount must be > 0, got {self.amount_wei}")
        if self.timestamp < 0:
            raise ValueError(f"negative timestamp: {self.timestamp}")


@dataclass(frozen=True)
class ProjectTimeline:
    """Everything known about one project, each stream sorted by time."""

    metadata: ProjectMetadata
    transfers: tuple[TransferEvent, ...] = ()
    trades: tuple[TradeRecord, ...] = ()
    approvals: tuple[ApprovalEvent, ...] = ()
    socials: tuple[SocialSnapshot, ...] = ()
    uri_changes: tuple[UriChange, ...] = ()
    withdrawals: tuple[Withdrawal, ...] = ()
    direct_payments: tuple[DirectPayment, ...] = ()

    @property
    def project(self) -> str:
        return self.metadata.project

    def first_mint_timestamp(self) -> int | None:
        for ev in self.transfers:
            if ev.kind is TransferKind.MINT:
                return ev.timestamp
        return None
