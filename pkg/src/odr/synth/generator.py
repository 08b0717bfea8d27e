"""Synthetic dispute corpus with planted, auditable outcome logic.

Labels come from an additive log-odds score over boolean rules evaluated
against the finished case (profile fields and rendered conversation text
alike), thresholded at a corpus quantile chosen so the post-noise seller
win rate lands on the configured target, then flipped with the configured
noise rate. Because rules are re-evaluable on the emitted cases, a
noise-free corpus is perfectly separable by the manifest and every planted
signal can be recovered by tests.

Randomness is partitioned per case index into independent counter-based
streams, so generation order and parallelism cannot change the output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from datetime import date, timedelta
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np

from odr.domain import (
    BuyerProfile,
    BuyerTimeline,
    ClaimRecord,
    ClaimType,
    Conversation,
    DisputeCase,
    DomainError,
    Message,
    OutcomeLabel,
    Party,
    Phase,
    SellerProfile,
    SellerType,
    TransactionRecord,
)
from odr.features import FeatureFamily
from odr.text.normalize import normalize

from . import templates as T

GENERATOR_VERSION = 1

# disjoint sub-stream offsets within one seed; case index i stays < 2**48
_STREAM_RENDER = 0
_STREAM_LABEL = 1 << 48
_STREAM_SUMMARY = 1 << 49
_STREAM_TIMELINE = 1 << 50

_FAMILIES = tuple(f.value for f in FeatureFamily)

# appeal count distribution, conditioned on whether the label was noise-flipped;
# at noise 0.05 these mix to the documented aggregate {0: .80, 1: .14, 2: .04, 3+: .02}
_APPEALS_CLEAN = (0.81316, 0.13263, 0.03632, 0.01789)
_APPEALS_FLIPPED = (0.55, 0.28, 0.11, 0.06)

_SELLER_COUNTRIES = ("US", "CN", "GB", "DE", "AU", "CA", "IN", "FR")
_SELLER_COUNTRY_P = (0.42, 0.18, 0.12, 0.10, 0.06, 0.05, 0.04, 0.03)
_BUYER_COUNTRIES = ("US", "GB", "DE", "CA", "AU", "FR", "IN")
_BUYER_COUNTRY_P = (0.55, 0.13, 0.09, 0.08, 0.07, 0.04, 0.04)


class ConfigError(DomainError):
    """Generator configuration violates an invariant."""


@dataclass(frozen=True)
class GeneratorConfig:
    n_cases: int
    seed: int
    seller_win_rate_target: float = 0.596
    noise_rate: float = 0.05
    family_signal_weights: Mapping[str, float] = field(default_factory=dict)
    template_bank: str = "v1"
    n_categories: int = 12

    def __post_init__(self) -> None:
        if self.n_cases < 0:
            raise ConfigError("n_cases must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 unsigned bits")
        if not 0.0 <= self.seller_win_rate_target <= 1.0:
            raise ConfigError("seller_win_rate_target must be a probability")
        if not 0.0 <= self.noise_rate < 0.5:
            raise ConfigError("noise_rate must lie in [0, 0.5)")
        lo, hi = self.noise_rate, 1.0 - self.noise_rate
        if not lo <= self.seller_win_rate_target <= hi:
            raise ConfigError(
                f"seller_win_rate_target {self.seller_win_rate_target} is unreachable "
                f"under noise_rate {self.noise_rate} (feasible range [{lo}, {hi}])"
            )
        if self.template_bank != "v1":
            raise ConfigError(f"unknown template bank {self.template_bank!r}")
        if self.n_categories < 1:
            raise ConfigError("n_categories must be >= 1")
        unknown = set(self.family_signal_weights) - set(_FAMILIES)
        if unknown:
            raise ConfigError(f"unknown feature families in weights: {sorted(unknown)}")
        resolved = self.resolved_weights()
        if any(not 0.0 <= w <= 1.0 for w in resolved.values()):
            raise ConfigError("family weights must lie in [0, 1]")
        if sum(1 for w in resolved.values() if w > 0.0) < 3:
            raise ConfigError("at least 3 families need strictly positive weight")

    def resolved_weights(self) -> dict[str, float]:
        """Weights for all seven families, defaulting absent ones to 1.0."""
        return {f: float(self.family_signal_weights.get(f, 1.0)) for f in _FAMILIES}


@dataclass(frozen=True)
class PlantedRule:
    rule_id: str
    family: str
    description: str
    effect: float
    predicate: Callable[[DisputeCase], bool]


@lru_cache(maxsize=4096)
def _during_tokens(case: DisputeCase) -> tuple[tuple[str, ...], ...]:
    return tuple(tuple(normalize(m.body)) for m in case.conversation.during_dispute())


def _says(case: DisputeCase, stems: tuple[str, ...]) -> bool:
    """True when any during-dispute message contains the stems contiguously."""
    width = len(stems)
    for tokens in _during_tokens(case):
        for j in range(len(tokens) - width + 1):
            if tokens[j : j + width] == stems:
                return True
    return False


def planted_rules() -> tuple[PlantedRule, ...]:
    """The full rule registry, in score-accumulation order."""
    c = FeatureFamily.CLAIM.value
    t = FeatureFamily.TRANSACTION.value
    cs = FeatureFamily.CLAIM_SELLER.value
    cb = FeatureFamily.CLAIM_BUYER.value
    sd = FeatureFamily.SELLER_DATA.value
    bd = FeatureFamily.BUYER_DATA.value
    tx = FeatureFamily.TEXTUAL.value
    return (
        PlantedRule(
            "first-escalation-by-seller", c,
            "the seller escalated the dispute first", 1.13,
            lambda x: x.claim.first_escalating_party is Party.SELLER),
        PlantedRule(
            "recent-escalation-by-seller", c,
            "the most recent escalation came from the seller", 0.57,
            lambda x: x.claim.recent_escalating_party is Party.SELLER),
        PlantedRule(
            "seller-responded", c,
            "the seller responded to the claim at all", 0.62,
            lambda x: x.claim.seller_responded),
        PlantedRule(
            "seller-responded-before-escalation", c,
            "the seller responded before anyone escalated", 0.34,
            lambda x: x.claim.seller_responded_before_escalation),
        PlantedRule(
            "inr-with-tracking", t,
            "item-not-received claim but shipping tracking exists", 0.82,
            lambda x: x.claim.claim_type is ClaimType.INR
            and x.transaction.shipping_tracking_present),
        PlantedRule(
            "inr-without-tracking", t,
            "item-not-received claim and no shipping tracking", -0.88,
            lambda x: x.claim.claim_type is ClaimType.INR
            and not x.transaction.shipping_tracking_present),
        PlantedRule(
            "high-price", t,
            "item price is 9000 cents or more", -0.47,
            lambda x: x.transaction.item_price_cents >= 9000),
        PlantedRule(
            "auction-format", t,
            "the transaction was an auction", -0.29,
            lambda x: x.transaction.auction),
        PlantedRule(
            "head-category", t,
            "the item sits in the highest-volume category", -0.33,
            lambda x: x.transaction.category_id == "CAT_00"),
        PlantedRule(
            "established-seller", cs,
            "seller tenure of 1200 days or more", 0.58,
            lambda x: x.seller.tenure_days >= 1200),
        PlantedRule(
            "c2c-seller", cs,
            "the seller is a consumer, not a business", -0.52,
            lambda x: x.seller.seller_type is SellerType.C2C),
        PlantedRule(
            "top-rated-seller", sd,
            "the seller holds top-rated status", 0.54,
            lambda x: x.seller.top_rated),
        PlantedRule(
            "credit-card-on-file", sd,
            "the seller keeps a credit card on file", 0.51,
            lambda x: x.seller.credit_card_on_file),
        PlantedRule(
            "confirmed-account", sd,
            "the seller account is confirmed", 0.31,
            lambda x: x.seller.account_confirmed),
        PlantedRule(
            "fresh-account-info", sd,
            "seller account info touched within 60 days", 0.46,
            lambda x: x.seller.info_last_modified_days_ago < 60),
        PlantedRule(
            "high-feedback", sd,
            "seller feedback score of 800 or more", 0.41,
            lambda x: x.seller.feedback_score >= 800),
        PlantedRule(
            "dispute-prone-seller", sd,
            "seller has 3 or more past disputes", -0.49,
            lambda x: x.seller.past_dispute_count >= 3),
        PlantedRule(
            "new-buyer", cb,
            "buyer tenure under 180 days", 0.44,
            lambda x: x.buyer.tenure_days < 180),
        PlantedRule(
            "serial-filer", cb,
            "buyer filed 2 or more disputes in the last year", 0.72,
            lambda x: x.buyer.past_dispute_count_last_year >= 2),
        PlantedRule(
            "anonymous-buyer-email", bd,
            "buyer registered with an anonymous email domain", 0.56,
            lambda x: x.buyer.anonymous_email),
        PlantedRule(
            "business-tax-buyer", bd,
            "buyer holds business tax status", 0.44,
            lambda x: x.buyer.tax_status == "BUSINESS"),
        PlantedRule(
            "says-tracking-delivered", tx,
            "a message states the tracked package was delivered", 0.92,
            lambda x: _says(x, ("packag", "deliv"))),
        PlantedRule(
            "says-empty-box", tx,
            "a message reports an empty box", -0.86,
            lambda x: _says(x, ("empti", "box"))),
        PlantedRule(
            "says-incomplete-address", tx,
            "a message blames an incomplete shipping address", 0.81,
            lambda x: _says(x, ("address", "incomplet"))),
        PlantedRule(
            "says-not-as-described", tx,
            "a message says the item was not as described", -0.77,
            lambda x: _says(x, ("item", "describ"))),
        PlantedRule(
            "says-matches-listing", tx,
            "a message claims the item matches the listing", 0.69,
            lambda x: _says(x, ("match", "list"))),
        PlantedRule(
            "says-replacement-sent", tx,
            "a message offers or reports a replacement shipment", 0.52,
            lambda x: _says(x, ("replac",))),
    )


_REGISTRY = {r.rule_id: r for r in planted_rules()}


def oracle_scores(
    cases: Sequence[DisputeCase],
    manifest: Mapping,
    exclude_family: str | None = None,
) -> np.ndarray:
    """Re-apply the manifest rules to cases, returning raw log-odds scores.

    The manifest is the authority for effects and family weights; predicates
    are looked up in the in-code registry by rule id. Passing exclude_family
    zeroes that family's rules, which is how family-necessity is audited.
    """
    terms: list[tuple[Callable[[DisputeCase], bool], float]] = []
    weights = manifest["family_signal_weights"]
    for entry in manifest["rules"]:
        rule = _REGISTRY.get(entry["rule_id"])
        if rule is None:
            raise DomainError(f"manifest names unknown rule {entry['rule_id']!r}")
        if entry["family"] == exclude_family:
            continue
        w = float(weights.get(entry["family"], 1.0))
        terms.append((rule.predicate, float(entry["effect"]) * w))
    out = np.empty(len(cases), dtype=np.float64)
    for i, case in enumerate(cases):
        s = 0.0
        for predicate, effect in terms:
            if predicate(case):
                s += effect
        out[i] = s
    return out


def oracle_probabilities(
    cases: Sequence[DisputeCase],
    manifest: Mapping,
    exclude_family: str | None = None,
) -> np.ndarray:
    """Bayes-rule seller-win probabilities implied by the manifest."""
    margin = oracle_scores(cases, manifest, exclude_family) + manifest["intercept"]
    return 1.0 / (1.0 + np.exp(-margin))


def _case_rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, stream]))


def _pick(rng: np.random.Generator, bank: Sequence[str]) -> str:
    return bank[int(rng.integers(len(bank)))]


def _category_probs(n: int) -> np.ndarray:
    w = 1.0 / (np.arange(n) + 1.3)
    return w / w.sum()


def _expit(x: float) -> float:
    return 1.0 / (1.0 + math.exp(-x))


def _render_case(config: GeneratorConfig, index: int, cat_p: np.ndarray) -> DisputeCase:
    """Build one unlabeled case (appeal count and summary come after labeling)."""
    rng = _case_rng(config.seed, index + _STREAM_RENDER)
    z_s, z_b, z_c, z_t, z_x = rng.normal(size=5)

    def gate(loading: float, noise: float, threshold: float) -> bool:
        return bool(loading + noise * rng.normal() > threshold)

    first_seller = gate(0.9 * z_c, 0.436, 0.84)
    recent_seller = first_seller ^ bool(rng.random() < 0.13)
    responded = gate(0.72 * z_s + 0.4 * z_c, 0.56, -0.35)
    responded_early = responded and gate(0.75 * z_s, 0.66, 0.10)
    claim_type = ClaimType.SNAD if rng.random() < 0.5 else ClaimType.INR

    tracking = gate(0.75 * z_t + 0.35 * z_s, 0.56, -0.25)
    price_cents = int(min(max(round(math.exp(8.3 - 0.5 * z_t + 0.8 * rng.normal())), 99), 5_000_000))
    auction = bool(rng.random() < 0.3)
    category = f"CAT_{int(rng.choice(len(cat_p), p=cat_p)):02d}"
    txn_ordinal = int(rng.integers(date(2019, 1, 1).toordinal(), date(2022, 12, 31).toordinal() + 1))
    txn_date = date.fromordinal(txn_ordinal)

    seller = SellerProfile(
        tenure_days=int(min(max(1100 + 620 * z_s + 260 * rng.normal(), 0), 12_000)),
        seller_type=SellerType.C2C if gate(-0.82 * z_s, 0.57, 0.25) else SellerType.B2C,
        feedback_score=int(max(620 + 470 * z_s + 230 * rng.normal(), 0)),
        past_dispute_count=int(rng.poisson(math.exp(0.15 - 0.6 * z_s + 0.3 * rng.normal()))),
        top_rated=gate(1.05 * z_s, 0.62, 0.55),
        account_confirmed=gate(0.85 * z_s, 0.70, -0.95),
        country=_SELLER_COUNTRIES[int(rng.choice(len(_SELLER_COUNTRIES), p=_SELLER_COUNTRY_P))],
        site_locale="",
        info_last_modified_days_ago=int(min(math.exp(4.3 - 0.8 * z_s + 0.6 * rng.normal()), 4000)),
        credit_card_on_file=gate(0.95 * z_s, 0.70, -0.20),
        transaction_volume=int(min(math.exp(5.8 + 1.05 * z_s + 0.5 * rng.normal()), 10_000_000)),
    )
    locale = f"EBAY_{seller.country}" if rng.random() < 0.85 else "EBAY_US"
    seller = replace(seller, site_locale=locale)

    tax_u = 0.6 * z_b + 0.8 * rng.normal()
    if tax_u > 1.15:
        tax = "BUSINESS"
    else:
        r = rng.random()
        tax = "EXEMPT" if r < 0.06 else ("PERSONAL" if r < 0.62 else "NONE")
    buyer = BuyerProfile(
        tenure_days=int(min(max(760 + 420 * z_b + 210 * rng.normal(), 0), 12_000)),
        past_dispute_count_last_year=int(rng.poisson(math.exp(-0.3 - 0.85 * z_b + 0.3 * rng.normal()))),
        country=_BUYER_COUNTRIES[int(rng.choice(len(_BUYER_COUNTRIES), p=_BUYER_COUNTRY_P))],
        anonymous_email=gate(-1.05 * z_b, 0.66, 0.95),
        tax_status=tax,
        transaction_volume=int(min(math.exp(4.2 + 0.9 * z_b + 0.5 * rng.normal()), 10_000_000)),
    )

    is_inr = claim_type is ClaimType.INR
    want_tracking_text = tracking and is_inr and gate(0.85 * z_x, 0.53, 0.30)
    want_empty_box = is_inr and gate(-0.85 * z_x, 0.53, 0.55)
    want_incomplete = is_inr and not tracking and gate(0.8 * z_x, 0.6, 0.85)
    want_nad = not is_inr and gate(-0.85 * z_x, 0.53, 0.25)
    want_match = not is_inr and gate(0.85 * z_x, 0.53, 0.45)
    want_replacement = gate(0.6 * z_x + 0.5 * z_s, 0.62, 0.95)

    grateful = rng.random() < _expit(0.57 * (z_s + z_x) - 0.3)
    apologetic = rng.random() < _expit(0.7 * z_s - 0.7)
    pleading = rng.random() < _expit(0.5 * z_b - 0.8)

    n_msgs = max(1, round(rng.lognormal(mean=1.29, sigma=1.294)))
    n_msgs = min(n_msgs, 5000)
    k_pp = int(rng.binomial(n_msgs, 0.08))
    k_pd = int(rng.binomial(n_msgs - k_pp, 0.196))
    k_d = n_msgs - k_pp - k_pd
    if k_d == 0:
        if k_pd > 0:
            k_pd -= 1
        else:
            k_pp -= 1
        k_d = 1

    order_n = int(rng.integers(10_000, 100_000))
    ship_date = (txn_date + timedelta(days=int(rng.integers(1, 5)))).isoformat()

    def fill(template: str) -> str:
        return template.format(n=order_n, date=ship_date)

    messages: list[Message] = []
    day_ms = 86_400_000
    txn_ms = (txn_ordinal - date(1970, 1, 1).toordinal()) * day_ms
    ts = txn_ms - int(rng.integers(3, 15)) * day_ms
    for j in range(k_pp):
        author = Party.BUYER if j % 2 == 0 else Party.SELLER
        messages.append(Message(author, ts, fill(_pick(rng, T.PRE_PURCHASE_FILLER)), Phase.PRE_PURCHASE))
        ts += int(rng.integers(600_000, day_ms))
    ts = max(ts, txn_ms + int(rng.integers(3_600_000, 2 * day_ms)))
    for j in range(k_pd):
        author = Party.BUYER if j % 2 == 0 else Party.SELLER
        messages.append(Message(author, ts, fill(_pick(rng, T.PRE_DISPUTE_FILLER)), Phase.PRE_DISPUTE))
        ts += int(rng.integers(600_000, day_ms))
    ts = max(ts, txn_ms + int(rng.integers(5, 21)) * day_ms)

    authors = [Party.BUYER]
    for _ in range(k_d - 1):
        authors.append(Party.BUYER if rng.random() < 0.55 else Party.SELLER)
    seller_slots = [j for j, a in enumerate(authors) if a is Party.SELLER]
    buyer_slots = [j for j, a in enumerate(authors) if a is Party.BUYER]

    for j, author in enumerate(authors):
        parts: list[str] = []
        if j == 0:
            if is_inr:
                parts.append(_pick(rng, T.EMPTY_BOX) if want_empty_box else _pick(rng, _NEVER_ARRIVED))
            else:
                parts.append(_pick(rng, T.NOT_AS_DESCRIBED) if want_nad else _pick(rng, _SNAD_GENERIC))
            if rng.random() < 0.5:
                parts.append(fill(_pick(rng, T.BUYER_FILLER)))
        elif author is Party.SELLER and j == seller_slots[0]:
            if apologetic:
                parts.append(T.APOLOGY)
            if want_tracking_text:
                parts.append(fill(_pick(rng, T.TRACKING_DELIVERED)))
            if want_incomplete:
                parts.append(_pick(rng, T.INCOMPLETE_ADDRESS))
            if want_match:
                parts.append(_pick(rng, T.MATCHES_LISTING))
            if want_replacement:
                parts.append(_pick(rng, T.REPLACEMENT_SENT))
            if len(parts) == (1 if apologetic else 0):
                parts.append(fill(_pick(rng, T.SELLER_FILLER)))
        else:
            bank = T.SELLER_FILLER if author is Party.SELLER else T.BUYER_FILLER
            if author is Party.BUYER and pleading and len(buyer_slots) > 1 and j == buyer_slots[1]:
                parts.append(T.PLEASE_START)
            parts.append(fill(_pick(rng, bank)))
            if author is Party.SELLER and grateful and j == seller_slots[-1]:
                parts.append(T.GRATITUDE)
        messages.append(Message(author, ts, ". ".join(parts) + ".", Phase.DURING_DISPUTE))
        ts += int(rng.integers(900_000, int(1.5 * day_ms)))

    claim = ClaimRecord(
        claim_type=claim_type,
        first_escalating_party=Party.SELLER if first_seller else Party.BUYER,
        recent_escalating_party=Party.SELLER if recent_seller else Party.BUYER,
        seller_responded=responded,
        seller_responded_before_escalation=responded_early,
        appeal_count=0,
    )
    transaction = TransactionRecord(
        item_price_cents=price_cents,
        category_id=category,
        shipping_tracking_present=tracking,
        auction=auction,
        transaction_date=txn_date.isoformat(),
    )
    return DisputeCase(
        case_id=f"case-{index:06d}",
        claim=claim,
        transaction=transaction,
        seller=seller,
        buyer=buyer,
        conversation=Conversation(tuple(messages)),
    )


_NEVER_ARRIVED = (
    "my package never arrived",
    "the package never arrived and it has been two weeks",
    "my package never arrived even though the estimate passed days ago",
)
_SNAD_GENERIC = (
    "the size runs small and the color is different",
    "the color is way off from the photos",
    "it came in the wrong size",
)


def _draw_appeals(rng: np.random.Generator, flipped: bool) -> int:
    dist = _APPEALS_FLIPPED if flipped else _APPEALS_CLEAN
    u = rng.random()
    acc = 0.0
    for k, p in enumerate(dist[:3]):
        acc += p
        if u < acc:
            return k
    return 3 + min(int(rng.geometric(0.55)) - 1, 4)


def _render_summary(
    rng: np.random.Generator, outcome: OutcomeLabel, flipped: bool, appeals: int
) -> str:
    bank = T.SUMMARY_SELLER_WINS if outcome is OutcomeLabel.SELLER_WINS else T.SUMMARY_BUYER_WINS
    parts = [_pick(rng, bank)]
    if appeals > 0:
        parts.append(_pick(rng, T.SUMMARY_APPEAL))
        if appeals >= 2:
            parts.append("a further appeal kept the case open")
    if flipped:
        n_hard = 2 + int(rng.integers(3))
        order = rng.permutation(len(T.SUMMARY_HARD))[:n_hard]
        parts.extend(T.SUMMARY_HARD[i] for i in sorted(int(i) for i in order))
    elif rng.random() < 0.3:
        parts.append("standard checks were completed without incident")
    return ". ".join(parts) + "."


def generate_corpus(config: GeneratorConfig) -> tuple[list[DisputeCase], dict]:
    """Generate the labeled corpus and its rule manifest sidecar."""
    weights = config.resolved_weights()
    rules = planted_rules()
    manifest = {
        "generator_version": GENERATOR_VERSION,
        "seed": config.seed,
        "n_cases": config.n_cases,
        "seller_win_rate_target": config.seller_win_rate_target,
        "noise_rate": config.noise_rate,
        "template_bank": config.template_bank,
        "n_categories": config.n_categories,
        "family_signal_weights": weights,
        "intercept": 0.0,
        "rules": [
            {"rule_id": r.rule_id, "family": r.family, "description": r.description, "effect": r.effect}
            for r in rules
        ],
    }
    if config.n_cases == 0:
        return [], manifest

    cat_p = _category_probs(config.n_categories)
    drafts = [_render_case(config, i, cat_p) for i in range(config.n_cases)]
    scores = oracle_scores(drafts, manifest)

    # quantile intercept: the pre-noise positive rate q* mixes with the flip
    # rate to land the post-noise rate exactly on target in expectation
    q_star = (config.seller_win_rate_target - config.noise_rate) / (1.0 - 2.0 * config.noise_rate)
    k = int(round((1.0 - q_star) * config.n_cases))
    k = min(max(k, 0), config.n_cases)
    ordered = np.sort(scores)
    threshold = float(ordered[0] - 1.0) if k == 0 else float(ordered[k - 1])
    manifest["intercept"] = -threshold

    cases: list[DisputeCase] = []
    for i, draft in enumerate(drafts):
        label_rng = _case_rng(config.seed, i + _STREAM_LABEL)
        flipped = bool(label_rng.random() < config.noise_rate)
        seller_wins = bool(scores[i] + manifest["intercept"] > 0.0) ^ flipped
        outcome = OutcomeLabel.SELLER_WINS if seller_wins else OutcomeLabel.BUYER_WINS
        appeals = _draw_appeals(label_rng, flipped)
        summary_rng = _case_rng(config.seed, i + _STREAM_SUMMARY)
        summary = _render_summary(summary_rng, outcome, flipped, appeals)
        cases.append(
            replace(
                draft,
                claim=replace(draft.claim, appeal_count=appeals, agent_summary=summary),
                outcome=outcome,
            )
        )
    return cases, manifest


def generate_timelines(config: GeneratorConfig, corpus: Sequence[DisputeCase]) -> list[BuyerTimeline]:
    """One 15-week purchase timeline per ruled case, dispute at week 8.

    Post-dispute weeks are zero-inflated: a buyer quits outright with the
    planted zero-post probability, otherwise the weekly rate is scaled so the
    per-condition ratio of post to pre means equals the planted multiplier.
    """
    out: list[BuyerTimeline] = []
    for i, case in enumerate(corpus):
        if case.outcome is None:
            raise DomainError(f"case {case.case_id} has no outcome; timelines need ruled cases")
        rng = _case_rng(config.seed, i + _STREAM_TIMELINE)
        lam = math.exp(0.9 + 0.5 * rng.normal())
        buyer_lost = case.outcome is OutcomeLabel.SELLER_WINS
        quit_rate, multiplier = (0.12, 0.82) if buyer_lost else (0.09, 0.86)
        pre = rng.poisson(lam, size=7)
        dispute_week = rng.poisson(0.9 * lam)
        if rng.random() < quit_rate:
            post = np.zeros(7, dtype=np.int64)
        else:
            post = rng.poisson(lam * multiplier / (1.0 - quit_rate), size=7)
        counts = tuple(int(c) for c in (*pre, dispute_week, *post))
        out.append(
            BuyerTimeline(
                buyer_id=f"{case.case_id}:buyer",
                weekly_transaction_counts=counts,
                dispute_week_indices=(8,),
            )
        )
    return out
