"""Seeded stratified cross-validation over the full modeling pipeline."""

from __future__ import annotations

from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from odr.domain import DisputeCase, DomainError
from odr.evaluation.folds import build_fold_contexts, fit_predict_fold
from odr.evaluation.metrics import EvalReport, compute_metrics


def parallel_map(fn, items, jobs: int):
    """Map over independent work items, in order, with jobs >= 1 workers.

    Every item's computation must be self-contained and seeded, so the
    result is the same list for any worker count.
    """
    if jobs < 1:
        raise DomainError("jobs must be >= 1")
    items = list(items)
    if jobs == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class CrossValidation:
    folds: tuple[EvalReport, ...]
    mean_auroc: float
    k: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "seed": self.seed,
            "mean_auroc": self.mean_auroc,
            "folds": [f.to_json_dict() for f in self.folds],
        }


def cross_validate(
    learner,
    cases: list[DisputeCase],
    k: int = 5,
    seed: int = 0,
    threshold: float = 0.5,
    text_model=None,
    jobs: int = 1,
):
    """Evaluate a learner (or a mapping of named learners) by stratified CV.

    The text model is retrained on each fold's training cases only. Passing
    a mapping evaluates every learner on the same folds with the same
    per-fold text model, and returns a dict of results keyed the same way.
    Fold-by-learner fits are independent, so ``jobs`` workers may run them
    concurrently without changing any number.
    """
    if isinstance(learner, Mapping):
        if not learner:
            raise DomainError("no learners given")
        specs = dict(learner)
        single = None
    else:
        specs = {"model": learner}
        single = "model"

    contexts = build_fold_contexts(cases, k, seed, text_model)
    units = [(ctx, name) for ctx in contexts for name in specs]
    reports = parallel_map(
        lambda unit: compute_metrics(fit_predict_fold(specs[unit[1]], unit[0]), unit[0].y_test, threshold),
        units,
        jobs,
    )
    per_name: dict[str, list[EvalReport]] = {name: [] for name in specs}
    for (ctx, name), report in zip(units, reports):
        per_name[name].append(report)

    results = {
        name: CrossValidation(
            folds=tuple(reports),
            mean_auroc=float(np.mean([r.auroc for r in reports])),
            k=k,
            seed=seed,
        )
        for name, reports in per_name.items()
    }
    return results[single] if single else results
