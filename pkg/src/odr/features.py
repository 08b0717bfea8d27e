"""Flat feature assembly under a family-tagged schema.

Every column belongs to exactly one feature family. The mapping follows
the data model: claim-level facts (including how escalation unfolded and
whether the seller responded) are Claim columns; tenure-style facts tied
to the disputing parties are ClaimSeller/ClaimBuyer; profile facts are
SellerData/BuyerData; the text model contributes Textual columns.

The dispute outcome and the arbitrator's closing summary are never
sources: the outcome is the label, and the summary only exists after
resolution. ``audit_schema`` enforces that.
"""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field
from datetime import date

import numpy as np

from odr.domain import (
    ClaimType,
    DisputeCase,
    DomainError,
    Party,
    SellerType,
)
from odr.text.classifier import TextFeatures


class FeatureFamily(enum.Enum):
    CLAIM = "Claim"
    TRANSACTION = "Transaction"
    CLAIM_SELLER = "ClaimSeller"
    CLAIM_BUYER = "ClaimBuyer"
    SELLER_DATA = "SellerData"
    BUYER_DATA = "BuyerData"
    TEXTUAL = "Textual"


NUMERIC = "numeric"
BOOLEAN = "boolean"
ONE_HOT = "categorical-one-hot"

# source path -> (family, kind) for scalar columns, in schema order
_SCALAR_COLUMNS = [
    ("claim_is_snad", FeatureFamily.CLAIM, BOOLEAN, "claim.claim_type"),
    ("first_escalation_by_seller", FeatureFamily.CLAIM, BOOLEAN, "claim.first_escalating_party"),
    ("recent_escalation_by_seller", FeatureFamily.CLAIM, BOOLEAN, "claim.recent_escalating_party"),
    ("seller_responded", FeatureFamily.CLAIM, BOOLEAN, "claim.seller_responded"),
    ("seller_responded_before_escalation", FeatureFamily.CLAIM, BOOLEAN, "claim.seller_responded_before_escalation"),
    ("appeal_count", FeatureFamily.CLAIM, NUMERIC, "claim.appeal_count"),
    ("item_price_cents", FeatureFamily.TRANSACTION, NUMERIC, "transaction.item_price_cents"),
    ("shipping_tracking_present", FeatureFamily.TRANSACTION, BOOLEAN, "transaction.shipping_tracking_present"),
    ("auction", FeatureFamily.TRANSACTION, BOOLEAN, "transaction.auction"),
    ("transaction_date_days", FeatureFamily.TRANSACTION, NUMERIC, "transaction.transaction_date"),
    ("seller_tenure_days", FeatureFamily.CLAIM_SELLER, NUMERIC, "seller.tenure_days"),
    ("seller_is_c2c", FeatureFamily.CLAIM_SELLER, BOOLEAN, "seller.seller_type"),
    ("buyer_tenure_days", FeatureFamily.CLAIM_BUYER, NUMERIC, "buyer.tenure_days"),
    ("buyer_disputes_last_year", FeatureFamily.CLAIM_BUYER, NUMERIC, "buyer.past_dispute_count_last_year"),
    ("seller_feedback_score", FeatureFamily.SELLER_DATA, NUMERIC, "seller.feedback_score"),
    ("seller_past_disputes", FeatureFamily.SELLER_DATA, NUMERIC, "seller.past_dispute_count"),
    ("seller_top_rated", FeatureFamily.SELLER_DATA, BOOLEAN, "seller.top_rated"),
    ("seller_account_confirmed", FeatureFamily.SELLER_DATA, BOOLEAN, "seller.account_confirmed"),
    ("seller_info_last_modified_days", FeatureFamily.SELLER_DATA, NUMERIC, "seller.info_last_modified_days_ago"),
    ("seller_credit_card_on_file", FeatureFamily.SELLER_DATA, BOOLEAN, "seller.credit_card_on_file"),
    ("seller_transaction_volume", FeatureFamily.SELLER_DATA, NUMERIC, "seller.transaction_volume"),
    ("buyer_anonymous_email", FeatureFamily.BUYER_DATA, BOOLEAN, "buyer.anonymous_email"),
    ("buyer_transaction_volume", FeatureFamily.BUYER_DATA, NUMERIC, "buyer.transaction_volume"),
]

# open categoricals: (column prefix, family, source path)
_CATEGORICALS = [
    ("category", FeatureFamily.TRANSACTION, "transaction.category_id"),
    ("seller_country", FeatureFamily.SELLER_DATA, "seller.country"),
    ("seller_site_locale", FeatureFamily.SELLER_DATA, "seller.site_locale"),
    ("buyer_country", FeatureFamily.BUYER_DATA, "buyer.country"),
    ("buyer_tax_status", FeatureFamily.BUYER_DATA, "buyer.tax_status"),
]

OTHER_LEVEL = "OTHER"

_FORBIDDEN_SOURCES = ("outcome", "claim.agent_summary")


@dataclass(frozen=True)
class FeatureColumn:
    name: str
    family: FeatureFamily
    kind: str
    source: str
    level: str | None = None  # one-hot columns only


@dataclass(frozen=True)
class FeatureSchema:
    columns: tuple[FeatureColumn, ...]
    embedding_dim: int

    def __post_init__(self) -> None:
        names = [c.name for c in self.columns]
        if len(names) != len(set(names)):
            raise DomainError("schema column names must be unique")

    def __len__(self) -> int:
        return len(self.columns)

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.columns]

    def family_mask(self, family: FeatureFamily) -> np.ndarray:
        return np.array([c.family is family for c in self.columns])

    def to_json_dict(self) -> dict:
        return {
            "embedding_dim": self.embedding_dim,
            "columns": [
                {
                    "name": c.name,
                    "family": c.family.value,
                    "kind": c.kind,
                    "source": c.source,
                    "level": c.level,
                }
                for c in self.columns
            ],
        }

    @property
    def hash(self) -> str:
        payload = json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def schema_from_json_dict(obj: dict) -> FeatureSchema:
    columns = tuple(
        FeatureColumn(
            name=c["name"],
            family=FeatureFamily(c["family"]),
            kind=c["kind"],
            source=c["source"],
            level=c.get("level"),
        )
        for c in obj["columns"]
    )
    return FeatureSchema(columns=columns, embedding_dim=obj["embedding_dim"])


def _categorical_value(case: DisputeCase, source: str) -> str:
    section, attr = source.split(".")
    return getattr(getattr(case, section), attr)


def build_schema(cases, embedding_dim: int = 50) -> FeatureSchema:
    """Derive a schema from a corpus: categorical levels are the observed
    values, sorted, plus an explicit OTHER column per categorical."""
    columns = [
        FeatureColumn(name, family, kind, source)
        for name, family, kind, source in _SCALAR_COLUMNS
    ]
    for prefix, family, source in _CATEGORICALS:
        levels = sorted({_categorical_value(case, source) for case in cases})
        for level in levels + [OTHER_LEVEL]:
            columns.append(
                FeatureColumn(
                    name=f"{prefix}={level}",
                    family=family,
                    kind=ONE_HOT,
                    source=source,
                    level=level,
                )
            )
    columns.append(FeatureColumn("text_p_seller_wins", FeatureFamily.TEXTUAL, NUMERIC, "text.p_seller_wins"))
    columns.append(FeatureColumn("text_predicted_seller", FeatureFamily.TEXTUAL, BOOLEAN, "text.predicted_label"))
    columns.append(FeatureColumn("text_is_neutral", FeatureFamily.TEXTUAL, BOOLEAN, "text.neutral"))
    for i in range(embedding_dim):
        columns.append(
            FeatureColumn(f"text_emb_{i}", FeatureFamily.TEXTUAL, NUMERIC, f"text.embedding[{i}]")
        )
    schema = FeatureSchema(columns=tuple(columns), embedding_dim=embedding_dim)
    audit_schema(schema)
    return schema


def audit_schema(schema: FeatureSchema) -> None:
    """Reject schemas with label-leaking sources."""
    for column in schema.columns:
        base = column.source.split("[")[0]
        if base in _FORBIDDEN_SOURCES or base.startswith("outcome"):
            raise DomainError(f"column {column.name} reads forbidden source {column.source}")


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray = field(repr=False)
    missing: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.values.shape != self.missing.shape:
            raise DomainError("values and missing mask must align")


@dataclass
class AssemblyReport:
    """Mutable tally of degenerate events seen while assembling."""

    other_level_counts: dict[str, int] = field(default_factory=dict)
    neutral_text_count: int = 0

    def count_other(self, source: str) -> None:
        self.other_level_counts[source] = self.other_level_counts.get(source, 0) + 1


def _scalar_value(case: DisputeCase, source: str) -> float:
    section, attr = source.split(".")
    raw = getattr(getattr(case, section), attr)
    if source == "claim.claim_type":
        return float(raw is ClaimType.SNAD)
    if source in ("claim.first_escalating_party", "claim.recent_escalating_party"):
        return float(raw is Party.SELLER)
    if source == "seller.seller_type":
        return float(raw is SellerType.C2C)
    if source == "transaction.transaction_date":
        return float(date.fromisoformat(raw).toordinal())
    return float(raw)


def assemble(
    case: DisputeCase,
    text: TextFeatures,
    schema: FeatureSchema,
    report: AssemblyReport | None = None,
) -> FeatureVector:
    """Flatten one case to the schema. Missing entries are NaN and masked."""
    values = np.empty(len(schema))
    missing = np.zeros(len(schema), dtype=bool)
    neutral = text.neutral

    # one-hot groups need the observed level before level columns are set
    categorical_raw = {source: _categorical_value(case, source) for _, _, source in _CATEGORICALS}
    known_levels: dict[str, set] = {}
    for column in schema.columns:
        if column.kind == ONE_HOT and column.level != OTHER_LEVEL:
            known_levels.setdefault(column.source, set()).add(column.level)

    unknown_seen: set[str] = set()
    for i, column in enumerate(schema.columns):
        if column.kind == ONE_HOT:
            raw = categorical_raw[column.source]
            if column.level == OTHER_LEVEL:
                hit = raw not in known_levels.get(column.source, set())
                if hit and column.source not in unknown_seen:
                    unknown_seen.add(column.source)
                    if report is not None:
                        report.count_other(column.source)
                values[i] = float(hit)
            else:
                values[i] = float(raw == column.level)
        elif column.source == "text.p_seller_wins":
            values[i] = text.p_seller_wins
        elif column.source == "text.predicted_label":
            values[i] = float(text.predicted_label.numeric)
        elif column.source == "text.neutral":
            values[i] = float(neutral)
        elif column.source.startswith("text.embedding["):
            if neutral:
                values[i] = np.nan
                missing[i] = True
            else:
                j = int(column.source[len("text.embedding[") : -1])
                values[i] = text.embedding[j]
        else:
            values[i] = _scalar_value(case, column.source)

    if neutral and report is not None:
        report.neutral_text_count += 1
    return FeatureVector(values=values, missing=missing)


def assemble_matrix(cases, text_features, schema: FeatureSchema):
    """Stack per-case vectors into (X, missing, report)."""
    report = AssemblyReport()
    vectors = [
        assemble(case, text, schema, report)
        for case, text in zip(cases, text_features)
    ]
    X = np.stack([v.values for v in vectors]) if vectors else np.empty((0, len(schema)))
    missing = (
        np.stack([v.missing for v in vectors])
        if vectors
        else np.empty((0, len(schema)), dtype=bool)
    )
    return X, missing, report
