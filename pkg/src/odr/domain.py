"""Core dispute data model.

All types are immutable value objects: construction validates invariants and
instances are safe to share across threads. The numeric label coding is fixed
throughout the codebase: a seller win is 1, a buyer win is 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class DomainError(ValueError):
    """A field value violates a domain invariant."""


class OutcomeLabel(enum.Enum):
    SELLER_WINS = "SELLER_WINS"
    BUYER_WINS = "BUYER_WINS"

    @property
    def numeric(self) -> int:
        return 1 if self is OutcomeLabel.SELLER_WINS else 0


class ClaimType(enum.Enum):
    INR = "INR"
    SNAD = "SNAD"


class Party(enum.Enum):
    BUYER = "BUYER"
    SELLER = "SELLER"


class SellerType(enum.Enum):
    B2C = "B2C"
    C2C = "C2C"


class Phase(enum.Enum):
    PRE_PURCHASE = "PRE_PURCHASE"
    PRE_DISPUTE = "PRE_DISPUTE"
    DURING_DISPUTE = "DURING_DISPUTE"


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise DomainError(message)


@dataclass(frozen=True)
class ClaimRecord:
    claim_type: ClaimType
    first_escalating_party: Party
    recent_escalating_party: Party
    seller_responded: bool
    seller_responded_before_escalation: bool
    appeal_count: int
    agent_summary: str = ""

    def __post_init__(self) -> None:
        _require(self.appeal_count >= 0, "appeal_count must be >= 0")
        _require(
            not self.seller_responded_before_escalation or self.seller_responded,
            "seller_responded_before_escalation requires seller_responded",
        )


@dataclass(frozen=True)
class TransactionRecord:
    item_price_cents: int
    category_id: str
    shipping_tracking_present: bool
    auction: bool
    transaction_date: str  # ISO-8601 calendar date

    def __post_init__(self) -> None:
        _require(self.item_price_cents >= 0, "item_price_cents must be >= 0")


@dataclass(frozen=True)
class SellerProfile:
    tenure_days: int
    seller_type: SellerType
    feedback_score: int
    past_dispute_count: int
    top_rated: bool
    account_confirmed: bool
    country: str
    site_locale: str
    info_last_modified_days_ago: int
    credit_card_on_file: bool
    transaction_volume: int

    def __post_init__(self) -> None:
        _require(self.tenure_days >= 0, "tenure_days must be >= 0")
        _require(self.past_dispute_count >= 0, "past_dispute_count must be >= 0")
        _require(self.info_last_modified_days_ago >= 0, "info_last_modified_days_ago must be >= 0")
        _require(self.transaction_volume >= 0, "transaction_volume must be >= 0")


@dataclass(frozen=True)
class BuyerProfile:
    tenure_days: int
    past_dispute_count_last_year: int
    country: str
    anonymous_email: bool
    tax_status: str
    transaction_volume: int

    def __post_init__(self) -> None:
        _require(self.tenure_days >= 0, "tenure_days must be >= 0")
        _require(self.past_dispute_count_last_year >= 0, "past_dispute_count_last_year must be >= 0")
        _require(self.transaction_volume >= 0, "transaction_volume must be >= 0")


@dataclass(frozen=True)
class Message:
    author: Party
    timestamp_ms: int
    body: str
    phase: Phase

    def __post_init__(self) -> None:
        _require(bool(self.body.strip()), "message body must be non-empty after trimming")


@dataclass(frozen=True)
class Conversation:
    messages: tuple[Message, ...] = ()

    def __post_init__(self) -> None:
        stamps = [m.timestamp_ms for m in self.messages]
        _require(stamps == sorted(stamps), "conversation messages must be timestamp-sorted")

    def __len__(self) -> int:
        return len(self.messages)

    def during_dispute(self, author: Party | None = None) -> tuple[Message, ...]:
        out = [m for m in self.messages if m.phase is Phase.DURING_DISPUTE]
        if author is not None:
            out = [m for m in out if m.author is author]
        return tuple(out)


@dataclass(frozen=True)
class DisputeCase:
    case_id: str
    claim: ClaimRecord
    transaction: TransactionRecord
    seller: SellerProfile
    buyer: BuyerProfile
    conversation: Conversation = field(default_factory=Conversation)
    outcome: OutcomeLabel | None = None

    def __post_init__(self) -> None:
        _require(bool(self.case_id), "case_id must be non-empty")


@dataclass(frozen=True)
class BuyerTimeline:
    """Weekly transaction counts around a buyer's dispute.

    Week indices in ``dispute_week_indices`` are 1-based positions into
    ``weekly_transaction_counts``.
    """

    buyer_id: str
    weekly_transaction_counts: tuple[int, ...]
    dispute_week_indices: tuple[int, ...]

    def __post_init__(self) -> None:
        _require(all(c >= 0 for c in self.weekly_transaction_counts), "weekly counts must be >= 0")
        _require(
            all(1 <= w <= len(self.weekly_transaction_counts) for w in self.dispute_week_indices),
            "dispute week indices must fall inside the timeline",
        )
