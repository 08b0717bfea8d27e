"""Soft churn: purchase activity before versus after a dispute."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from odr.domain import BuyerTimeline, DomainError, OutcomeLabel

TIMELINE_WEEKS = 15
DISPUTE_WEEK = 8


@dataclass(frozen=True)
class ChurnCondition:
    mean_pre: float
    mean_post: float
    ratio: float
    zero_post_rate: float
    n: int


@dataclass(frozen=True)
class ChurnReport:
    buyer_lost: ChurnCondition
    buyer_won: ChurnCondition
    n_excluded: int

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["condition", "mean_pre", "mean_post", "ratio", "zero_post_rate", "n"])
        for name, c in (("buyer_lost", self.buyer_lost), ("buyer_won", self.buyer_won)):
            writer.writerow(
                [name, repr(c.mean_pre), repr(c.mean_post), repr(c.ratio),
                 repr(c.zero_post_rate), c.n]
            )
        return out.getvalue()


def _qualifies(timeline: BuyerTimeline) -> bool:
    return (
        len(timeline.weekly_transaction_counts) == TIMELINE_WEEKS
        and timeline.dispute_week_indices == (DISPUTE_WEEK,)
    )


def _condition(pre: np.ndarray, post: np.ndarray) -> ChurnCondition:
    mean_pre = float(pre.mean())
    mean_post = float(post.mean())
    if mean_pre == 0.0:
        raise DomainError("pre-dispute activity is all zero; churn ratio undefined")
    return ChurnCondition(
        mean_pre=mean_pre,
        mean_post=mean_post,
        ratio=mean_post / mean_pre,
        zero_post_rate=float((post == 0).mean()),
        n=len(pre),
    )


def soft_churn(timelines, outcomes) -> ChurnReport:
    """Ratio of mean post-dispute to mean pre-dispute purchases per outcome.

    Only 15-week timelines whose single dispute sits at week 8 qualify;
    the rest are excluded and counted. Pre is weeks 1-7, post is weeks
    9-15. The ratio is of condition means, not a mean of ratios, and the
    zero-post rate is the share of buyers with no purchases at all after
    the dispute.
    """
    timelines = list(timelines)
    outcomes = list(outcomes)
    if len(timelines) != len(outcomes):
        raise DomainError("timelines and outcomes must align")

    pre = {True: [], False: []}
    post = {True: [], False: []}
    excluded = 0
    for timeline, outcome in zip(timelines, outcomes):
        if outcome is None:
            raise DomainError("soft churn needs ruled outcomes")
        if not _qualifies(timeline):
            excluded += 1
            continue
        counts = timeline.weekly_transaction_counts
        lost = outcome is OutcomeLabel.SELLER_WINS
        pre[lost].append(sum(counts[: DISPUTE_WEEK - 1]))
        post[lost].append(sum(counts[DISPUTE_WEEK:]))

    if not pre[True] or not pre[False]:
        raise DomainError("no qualifying timelines for at least one outcome condition")
    return ChurnReport(
        buyer_lost=_condition(np.asarray(pre[True]), np.asarray(post[True])),
        buyer_won=_condition(np.asarray(pre[False]), np.asarray(post[False])),
        n_excluded=excluded,
    )
