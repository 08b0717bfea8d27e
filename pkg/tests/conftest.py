import numpy as np
import pytest

from odr.domain import (
    BuyerProfile,
    ClaimRecord,
    ClaimType,
    Conversation,
    DisputeCase,
    Message,
    OutcomeLabel,
    Party,
    Phase,
    SellerProfile,
    SellerType,
    TransactionRecord,
)


def make_claim(**overrides) -> ClaimRecord:
    base = dict(
        claim_type=ClaimType.INR,
        first_escalating_party=Party.BUYER,
        recent_escalating_party=Party.BUYER,
        seller_responded=True,
        seller_responded_before_escalation=False,
        appeal_count=0,
        agent_summary="Buyer reported the parcel never arrived.",
    )
    base.update(overrides)
    return ClaimRecord(**base)


def make_transaction(**overrides) -> TransactionRecord:
    base = dict(
        item_price_cents=2599,
        category_id="CAT_ELECTRONICS",
        shipping_tracking_present=True,
        auction=False,
        transaction_date="2023-04-12",
    )
    base.update(overrides)
    return TransactionRecord(**base)


def make_seller(**overrides) -> SellerProfile:
    base = dict(
        tenure_days=1200,
        seller_type=SellerType.C2C,
        feedback_score=350,
        past_dispute_count=2,
        top_rated=False,
        account_confirmed=True,
        country="US",
        site_locale="en-US",
        info_last_modified_days_ago=90,
        credit_card_on_file=True,
        transaction_volume=57,
    )
    base.update(overrides)
    return SellerProfile(**base)


def make_buyer(**overrides) -> BuyerProfile:
    base = dict(
        tenure_days=800,
        past_dispute_count_last_year=1,
        country="US",
        anonymous_email=False,
        tax_status="NONE",
        transaction_volume=23,
    )
    base.update(overrides)
    return BuyerProfile(**base)


def make_conversation(bodies=None) -> Conversation:
    if bodies is None:
        bodies = [
            (Party.BUYER, "Hi, my package never arrived and tracking shows no movement."),
            (Party.SELLER, "I shipped it last week, please check with the carrier."),
        ]
    messages = tuple(
        Message(
            author=author,
            timestamp_ms=1_680_000_000_000 + i * 60_000,
            body=body,
            phase=Phase.DURING_DISPUTE,
        )
        for i, (author, body) in enumerate(bodies)
    )
    return Conversation(messages=messages)


def make_case(case_id="case-0001", outcome=OutcomeLabel.BUYER_WINS, **overrides) -> DisputeCase:
    base = dict(
        case_id=case_id,
        claim=make_claim(),
        transaction=make_transaction(),
        seller=make_seller(),
        buyer=make_buyer(),
        conversation=make_conversation(),
        outcome=outcome,
    )
    base.update(overrides)
    return DisputeCase(**base)


def brute_auroc(scores, labels):
    """O(n^2) pairwise AUROC with half credit for ties."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    wins = (pos[:, None] > neg[None, :]).sum() + 0.5 * (pos[:, None] == neg[None, :]).sum()
    return wins / (len(pos) * len(neg))


@pytest.fixture
def sample_case() -> DisputeCase:
    return make_case()


@pytest.fixture(scope="session")
def mid_corpus():
    """20k generated cases plus manifest, shared across test modules."""
    from odr.synth import GeneratorConfig, generate_corpus

    return generate_corpus(GeneratorConfig(n_cases=20_000, seed=7))


@pytest.fixture(scope="session")
def big_corpus():
    """100k generated cases plus manifest, for rate and churn checks."""
    from odr.synth import GeneratorConfig, generate_corpus

    return generate_corpus(GeneratorConfig(n_cases=100_000, seed=3))
