"""Classification metrics with a rank-statistic AUROC.

AUROC is the Mann-Whitney statistic: the probability that a random
positive outscores a random negative, ties counted half. The ROC sweep
groups tied scores into single steps, so trapezoid integration over the
returned points reproduces the rank statistic exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from odr.domain import DomainError


@dataclass(frozen=True)
class EvalReport:
    """Threshold metrics plus the ROC curve for one set of predictions.

    ``auroc_undefined`` marks single-class label sets; ``precision_undefined``
    marks thresholds with zero predicted positives. Both report 0.0 with the
    flag raised rather than NaN so reports stay JSON-clean.
    """

    auroc: float
    accuracy: float
    precision: float
    recall: float
    f1: float
    roc_points: tuple[tuple[float, float], ...]
    threshold: float
    n: int
    positives: int
    auroc_undefined: bool = False
    precision_undefined: bool = False

    def to_json_dict(self) -> dict:
        return {
            "auroc": self.auroc,
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "roc_points": [[fpr, tpr] for fpr, tpr in self.roc_points],
            "threshold": self.threshold,
            "n": self.n,
            "positives": self.positives,
            "auroc_undefined": self.auroc_undefined,
            "precision_undefined": self.precision_undefined,
        }


def _validate_scores_labels(scores, labels):
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.ndim != 1 or labels.ndim != 1 or len(scores) != len(labels):
        raise DomainError("scores and labels must be aligned 1-D sequences")
    if len(scores) == 0:
        raise DomainError("cannot evaluate an empty prediction set")
    if not np.isfinite(scores).all():
        raise DomainError("scores must be finite")
    as_float = labels.astype(np.float64)
    if not np.isin(as_float, (0.0, 1.0)).all():
        raise DomainError("labels must be binary 0/1")
    return scores, as_float.astype(np.int64)


def _average_ranks(scores: np.ndarray) -> np.ndarray:
    order = np.argsort(scores, kind="mergesort")
    ranks = np.empty(len(scores))
    sorted_scores = scores[order]
    boundaries = np.flatnonzero(np.diff(sorted_scores) != 0.0) + 1
    starts = np.concatenate(([0], boundaries))
    stops = np.concatenate((boundaries, [len(scores)]))
    for lo, hi in zip(starts, stops):
        ranks[order[lo:hi]] = 0.5 * (lo + hi + 1)
    return ranks


def rank_auroc(scores: np.ndarray, labels: np.ndarray) -> float:
    """Mann-Whitney AUROC over a two-class label vector."""
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    ranks = _average_ranks(scores)
    rank_sum = float(ranks[labels == 1].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def roc_curve(scores: np.ndarray, labels: np.ndarray) -> tuple[tuple[float, float], ...]:
    """Score-sorted ROC sweep; tied scores collapse into one step."""
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        return ((0.0, 0.0), (1.0, 1.0))
    order = np.argsort(-scores, kind="mergesort")
    sorted_scores = scores[order]
    sorted_labels = labels[order]
    cum_tp = np.cumsum(sorted_labels)
    cum_fp = np.cumsum(1 - sorted_labels)
    # last index of each tied group marks one threshold step
    step_ends = np.flatnonzero(np.diff(sorted_scores) != 0.0)
    step_ends = np.concatenate((step_ends, [len(scores) - 1]))
    points = [(0.0, 0.0)]
    for idx in step_ends:
        points.append((float(cum_fp[idx] / n_neg), float(cum_tp[idx] / n_pos)))
    return tuple(points)


def compute_metrics(scores, labels, threshold: float = 0.5) -> EvalReport:
    """Score a prediction set; see EvalReport for the undefined-value flags."""
    scores, labels = _validate_scores_labels(scores, labels)
    n = len(scores)
    positives = int(labels.sum())

    predicted = scores >= threshold
    tp = int(np.sum(predicted & (labels == 1)))
    fp = int(np.sum(predicted & (labels == 0)))
    tn = int(np.sum(~predicted & (labels == 0)))

    accuracy = (tp + tn) / n
    precision_undefined = (tp + fp) == 0
    precision = 0.0 if precision_undefined else tp / (tp + fp)
    recall = tp / positives if positives else 0.0
    f1 = 0.0 if precision + recall == 0.0 else 2.0 * precision * recall / (precision + recall)

    auroc_undefined = positives in (0, n)
    auroc = 0.0 if auroc_undefined else rank_auroc(scores, labels)

    return EvalReport(
        auroc=auroc,
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        f1=f1,
        roc_points=roc_curve(scores, labels),
        threshold=threshold,
        n=n,
        positives=positives,
        auroc_undefined=auroc_undefined,
        precision_undefined=precision_undefined,
    )
