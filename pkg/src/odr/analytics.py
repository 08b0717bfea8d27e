"""Corpus-level descriptive reports.

Houses the estimator choices for the reporting layer: Pearson
(point-biserial) correlation r between columns and the 0/1 outcome, and
per-term KL contributions p(w|win) * log(p(w|win) / p(w|lose)) with
add-alpha smoothing over the shared vocabulary of a split.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from odr.domain import ClaimType, DisputeCase, DomainError, OutcomeLabel
from odr.features import FeatureSchema
from odr.text.normalize import normalize


@dataclass(frozen=True)
class CorrelationRow:
    name: str
    family: str
    abs_correlation: float
    sign: int
    constant: bool


@dataclass(frozen=True)
class CorrelationReport:
    rows: tuple[CorrelationRow, ...]

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["name", "family", "abs_correlation", "sign", "constant"])
        for row in self.rows:
            writer.writerow(
                [row.name, row.family, repr(row.abs_correlation), row.sign, int(row.constant)]
            )
        return out.getvalue()


def correlate_with_outcome(
    X: np.ndarray,
    missing: np.ndarray,
    labels: np.ndarray,
    schema: FeatureSchema,
) -> CorrelationReport:
    """Point-biserial correlation of every column with the 0/1 label.

    Masked entries are dropped per column. A column that is constant on
    its observed rows (or observed fewer than 2 times) gets correlation
    0 with the constant flag set.
    """
    y = np.asarray(labels, dtype=np.float64)
    if len(np.unique(y)) < 2:
        raise DomainError("correlation needs both outcome classes")
    rows = []
    for j, column in enumerate(schema.columns):
        keep = ~missing[:, j]
        x = X[keep, j]
        yy = y[keep]
        constant = False
        r = 0.0
        if x.size < 2 or np.ptp(x) == 0 or np.ptp(yy) == 0:
            constant = True
        else:
            xc = x - x.mean()
            yc = yy - yy.mean()
            denom = math.sqrt(float(xc @ xc) * float(yc @ yc))
            r = float(xc @ yc) / denom if denom > 0 else 0.0
        rows.append(
            CorrelationRow(
                name=column.name,
                family=column.family.value,
                abs_correlation=abs(r),
                sign=0 if r == 0 else (1 if r > 0 else -1),
                constant=constant,
            )
        )
    rows.sort(key=lambda row: (-row.abs_correlation, row.name))
    return CorrelationReport(rows=tuple(rows))


@dataclass(frozen=True)
class KlVocabReport:
    # claim type value -> winning side value -> {"unigrams": [...], "bigrams": [...]}
    sections: dict

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["claim_type", "winning_side", "order", "term", "score"])
        for claim_type in sorted(self.sections):
            for side in sorted(self.sections[claim_type]):
                for order in ("unigrams", "bigrams"):
                    for term, score in self.sections[claim_type][side][order]:
                        writer.writerow([claim_type, side, order, term, repr(score)])
        return out.getvalue()


def _case_terms(case: DisputeCase) -> tuple[Counter, Counter]:
    unigrams: Counter = Counter()
    bigrams: Counter = Counter()
    for message in case.conversation.messages:
        tokens = normalize(message.body)
        unigrams.update(tokens)
        bigrams.update(
            f"{tokens[i]} {tokens[i + 1]}" for i in range(len(tokens) - 1)
        )
    return unigrams, bigrams


def _kl_side(
    win_counts: Counter, lose_counts: Counter, alpha: float, top_k: int
) -> list[tuple[str, float]]:
    vocab = sorted(set(win_counts) | set(lose_counts))
    win_total = sum(win_counts.values()) + alpha * len(vocab)
    lose_total = sum(lose_counts.values()) + alpha * len(vocab)
    scored = []
    for term in vocab:
        p_win = (win_counts[term] + alpha) / win_total
        p_lose = (lose_counts[term] + alpha) / lose_total
        score = p_win * math.log(p_win / p_lose)
        if score > 0:
            scored.append((term, score))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:top_k]


def kl_vocabulary(
    cases,
    alpha: float = 0.5,
    top_k: int = 10,
    claim_types=None,
) -> KlVocabReport:
    """Rank terms most indicative of each winning side, per claim type."""
    sections: dict = {}
    for claim_type in claim_types if claim_types is not None else ClaimType:
        split = [
            c
            for c in cases
            if c.claim.claim_type is claim_type and c.outcome is not None
        ]
        if not split:
            raise DomainError(f"empty split for claim type {claim_type.value}")
        by_label: dict[OutcomeLabel, tuple[Counter, Counter]] = {
            OutcomeLabel.SELLER_WINS: (Counter(), Counter()),
            OutcomeLabel.BUYER_WINS: (Counter(), Counter()),
        }
        seen = set()
        for case in split:
            seen.add(case.outcome)
            uni, bi = _case_terms(case)
            by_label[case.outcome][0].update(uni)
            by_label[case.outcome][1].update(bi)
        if len(seen) < 2:
            raise DomainError(
                f"split {claim_type.value} lacks one outcome class"
            )
        seller_uni, seller_bi = by_label[OutcomeLabel.SELLER_WINS]
        buyer_uni, buyer_bi = by_label[OutcomeLabel.BUYER_WINS]
        sections[claim_type.value] = {
            OutcomeLabel.SELLER_WINS.value: {
                "unigrams": _kl_side(seller_uni, buyer_uni, alpha, top_k),
                "bigrams": _kl_side(seller_bi, buyer_bi, alpha, top_k),
            },
            OutcomeLabel.BUYER_WINS.value: {
                "unigrams": _kl_side(buyer_uni, seller_uni, alpha, top_k),
                "bigrams": _kl_side(buyer_bi, seller_bi, alpha, top_k),
            },
        }
    return KlVocabReport(sections=sections)


@dataclass(frozen=True)
class CorpusStats:
    n_cases: int
    seller_wins: int
    buyer_wins: int
    unlabeled: int
    seller_win_rate: float
    conversation_median: float
    conversation_mean: float
    conversation_sd: float
    appeal_counts: dict
    appeal_shares: dict
    empty: bool


def corpus_stats(cases) -> CorpusStats:
    """Exact counts plus conversation-length moments (lower median)."""
    cases = list(cases)
    if not cases:
        return CorpusStats(
            n_cases=0,
            seller_wins=0,
            buyer_wins=0,
            unlabeled=0,
            seller_win_rate=0.0,
            conversation_median=0.0,
            conversation_mean=0.0,
            conversation_sd=0.0,
            appeal_counts={"0": 0, "1": 0, "2": 0, "3+": 0},
            appeal_shares={"0": 0.0, "1": 0.0, "2": 0.0, "3+": 0.0},
            empty=True,
        )
    seller = sum(1 for c in cases if c.outcome is OutcomeLabel.SELLER_WINS)
    buyer = sum(1 for c in cases if c.outcome is OutcomeLabel.BUYER_WINS)
    unlabeled = len(cases) - seller - buyer
    labeled = seller + buyer
    lengths = sorted(len(c.conversation) for c in cases)
    lower_median = float(lengths[(len(lengths) - 1) // 2])
    arr = np.asarray(lengths, dtype=np.float64)
    appeal_counts = {"0": 0, "1": 0, "2": 0, "3+": 0}
    for case in cases:
        k = case.claim.appeal_count
        appeal_counts["3+" if k >= 3 else str(k)] += 1
    return CorpusStats(
        n_cases=len(cases),
        seller_wins=seller,
        buyer_wins=buyer,
        unlabeled=unlabeled,
        seller_win_rate=seller / labeled if labeled else 0.0,
        conversation_median=lower_median,
        conversation_mean=float(arr.mean()),
        conversation_sd=float(arr.std()),
        appeal_counts=appeal_counts,
        appeal_shares={k: v / len(cases) for k, v in appeal_counts.items()},
        empty=False,
    )
