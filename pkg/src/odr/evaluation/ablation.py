"""Feature ablation protocols over the cross-validated pipeline.

Four modes share one mechanism: pick a column subset per unit, refit the
learner per fold on that subset, and score the pooled out-of-fold
predictions. Units are schema source fields (one-hot levels and embedding
dimensions collapse into their field), feature families, or the composite
family groups. The full-model report rides along for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from odr.domain import DisputeCase, DomainError
from odr.evaluation.crossval import parallel_map
from odr.evaluation.folds import FoldContext, build_fold_contexts, fit_predict_fold
from odr.evaluation.metrics import EvalReport, compute_metrics
from odr.features import FeatureFamily, FeatureSchema

MODES = ("LeaveOneFeatureOut", "SingleFeature", "FeatureFamily", "FamilyCombination")

# composite rows: user-facing name -> families pooled together
_COMBINATIONS: dict[str, tuple[FeatureFamily, ...]] = {
    "All purchase": (FeatureFamily.CLAIM, FeatureFamily.TRANSACTION),
    "All buyer": (FeatureFamily.CLAIM_BUYER, FeatureFamily.BUYER_DATA),
    "All seller": (FeatureFamily.CLAIM_SELLER, FeatureFamily.SELLER_DATA),
    "All user": (
        FeatureFamily.CLAIM_BUYER,
        FeatureFamily.BUYER_DATA,
        FeatureFamily.CLAIM_SELLER,
        FeatureFamily.SELLER_DATA,
    ),
}


@dataclass(frozen=True)
class AblationReport:
    mode: str
    rows: tuple[tuple[str, EvalReport], ...]
    full: EvalReport
    k: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "k": self.k,
            "seed": self.seed,
            "full": self.full.to_json_dict(),
            "rows": [{"unit": name, "report": rep.to_json_dict()} for name, rep in self.rows],
        }


def _field_of(source: str) -> str:
    return source.split("[")[0] if "[" in source else source


def schema_units(schema: FeatureSchema) -> list[tuple[str, np.ndarray]]:
    """Source-field units in schema order; one-hot levels and embedding
    dimensions belong to their field."""
    order: list[str] = []
    members: dict[str, list[int]] = {}
    for j, column in enumerate(schema.columns):
        field = _field_of(column.source)
        if field not in members:
            members[field] = []
            order.append(field)
        members[field].append(j)
    return [(field, np.array(members[field], dtype=np.int64)) for field in order]


def _family_columns(schema: FeatureSchema, families: tuple[FeatureFamily, ...]) -> np.ndarray:
    mask = np.zeros(len(schema.columns), dtype=bool)
    for family in families:
        mask |= schema.family_mask(family)
    return np.flatnonzero(mask)


def _unit_plan(schema: FeatureSchema, mode: str) -> list[tuple[str, np.ndarray]]:
    n_cols = len(schema.columns)
    if mode == "LeaveOneFeatureOut":
        rows = [
            (field, np.setdiff1d(np.arange(n_cols), cols))
            for field, cols in schema_units(schema)
        ]
    elif mode == "SingleFeature":
        rows = schema_units(schema)
    elif mode == "FeatureFamily":
        rows = [(f.value, _family_columns(schema, (f,))) for f in FeatureFamily]
        rows += [(name, _family_columns(schema, fams)) for name, fams in _COMBINATIONS.items()]
    elif mode == "FamilyCombination":
        rows = [(name, _family_columns(schema, fams)) for name, fams in _COMBINATIONS.items()]
    else:
        raise DomainError(f"unknown ablation mode {mode!r}; choose from {MODES}")
    for name, cols in rows:
        if len(cols) == 0:
            raise DomainError(f"ablation unit {name!r} selects zero columns")
    return rows


def _pooled_report(
    learner,
    contexts: list[FoldContext],
    threshold: float,
    plan_per_fold: list[np.ndarray] | None,
) -> EvalReport:
    scores = []
    labels = []
    for fold_idx, ctx in enumerate(contexts):
        columns = None if plan_per_fold is None else plan_per_fold[fold_idx]
        scores.append(fit_predict_fold(learner, ctx, columns))
        labels.append(ctx.y_test)
    return compute_metrics(np.concatenate(scores), np.concatenate(labels), threshold)


def ablate(
    learner,
    cases: list[DisputeCase],
    mode: str,
    k: int = 5,
    seed: int = 0,
    threshold: float = 0.5,
    text_model=None,
    jobs: int = 1,
) -> AblationReport:
    """Run one ablation protocol; each row's EvalReport scores the pooled
    out-of-fold predictions of models trained on that row's columns. Rows
    are independent refits, so ``jobs`` workers may run them concurrently
    without changing any number."""
    if mode not in MODES:
        raise DomainError(f"unknown ablation mode {mode!r}; choose from {MODES}")
    contexts = build_fold_contexts(cases, k, seed, text_model)

    # schemas may differ across folds in categorical levels, so resolve the
    # unit plan per fold and key rows by unit name
    plans = [_unit_plan(ctx.schema, mode) for ctx in contexts]
    names = [name for name, _ in plans[0]]
    for plan in plans[1:]:
        if [name for name, _ in plan] != names:
            raise DomainError("folds disagree on ablation units; corpus too small to ablate")

    def run_row(row_idx: int) -> EvalReport:
        per_fold = [plan[row_idx][1] for plan in plans]
        return _pooled_report(learner, contexts, threshold, per_fold)

    reports = parallel_map(run_row, range(len(names)), jobs)
    rows = list(zip(names, reports))
    full = _pooled_report(learner, contexts, threshold, None)
    return AblationReport(mode=mode, rows=tuple(rows), full=full, k=k, seed=seed)
