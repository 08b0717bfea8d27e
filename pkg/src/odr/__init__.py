"""Dispute-outcome prediction, explanation, and analytics for e-commerce arbitration."""

__version__ = "0.1.0"

from odr.domain import (
    BuyerProfile,
    BuyerTimeline,
    ClaimRecord,
    Conversation,
    DisputeCase,
    Message,
    OutcomeLabel,
    SellerProfile,
    TransactionRecord,
)
from odr.corpus_io import read_corpus, write_corpus

__all__ = [
    "BuyerProfile",
    "BuyerTimeline",
    "ClaimRecord",
    "Conversation",
    "DisputeCase",
    "Message",
    "OutcomeLabel",
    "SellerProfile",
    "TransactionRecord",
    "read_corpus",
    "write_corpus",
]
