"""Stratified fold construction and per-fold model fitting.

Fold membership is computed on a canonical ordering (cases sorted by id),
so reshuffling the input corpus cannot change which cases share a fold.
Duplicate ids spread their copies across consecutive folds, which keeps
folds of a duplicated corpus content-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import clone

from odr.domain import DisputeCase, DomainError
from odr.features import FeatureSchema, assemble_matrix, build_schema
from odr.pipeline import default_text_model, fit_on_matrix, preprocess_matrix
from odr.text import conversation_tokens, predict_text


def _require_ruled(cases: list[DisputeCase]) -> np.ndarray:
    if not cases:
        raise DomainError("cannot evaluate an empty corpus")
    for case in cases:
        if case.outcome is None:
            raise DomainError(f"case {case.case_id} has no outcome; evaluation needs ruled cases")
    return np.array([c.outcome.numeric for c in cases], dtype=np.int64)


def stratified_folds(cases: list[DisputeCase], k: int, seed: int) -> list[np.ndarray]:
    """Split case indices into k label-stratified folds by seeded shuffle."""
    if k < 2:
        raise DomainError(f"k={k} is below the 2-fold minimum")
    y = _require_ruled(cases)
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    offset = 0
    for label in (0, 1):
        by_id: dict[str, list[int]] = {}
        for idx in np.flatnonzero(y == label):
            by_id.setdefault(cases[idx].case_id, []).append(int(idx))
        total = sum(len(v) for v in by_id.values())
        if total < k:
            raise DomainError(
                f"corpus too small for stratified {k}-fold split: "
                f"class {label} has only {total} cases"
            )
        ids = sorted(by_id)
        sequence = [idx for pos in rng.permutation(len(ids)) for idx in by_id[ids[pos]]]
        for position, case_idx in enumerate(sequence):
            folds[(position + offset) % k].append(case_idx)
        offset = (offset + total) % k
    # order folds by case id so interchangeable copies of an id give every
    # fold the same content sequence
    return [
        np.array(sorted(fold, key=lambda i: (cases[i].case_id, i)), dtype=np.int64)
        for fold in folds
    ]


@dataclass
class FoldContext:
    """One train/test split with its trained text model and matrices."""

    schema: FeatureSchema
    text_model: object
    X_train: np.ndarray
    y_train: np.ndarray
    X_test: np.ndarray
    y_test: np.ndarray
    test_indices: np.ndarray


def prepare_fold(
    cases: list[DisputeCase],
    train_idx: np.ndarray,
    test_idx: np.ndarray,
    text_model,
) -> FoldContext:
    """Train the text model on the training split only, then assemble both
    sides under the training-derived schema."""
    train = [cases[i] for i in train_idx]
    test = [cases[i] for i in test_idx]
    y_train = np.array([c.outcome.numeric for c in train], dtype=np.int64)
    y_test = np.array([c.outcome.numeric for c in test], dtype=np.int64)

    fitted_text = clone(text_model).fit(
        [conversation_tokens(c.conversation) for c in train], y_train
    )
    schema = build_schema(train, embedding_dim=fitted_text.embedding_dim)
    X_train, _, _ = assemble_matrix(
        train, [predict_text(fitted_text, c.conversation) for c in train], schema
    )
    X_test, _, _ = assemble_matrix(
        test, [predict_text(fitted_text, c.conversation) for c in test], schema
    )
    return FoldContext(
        schema=schema,
        text_model=fitted_text,
        X_train=X_train,
        y_train=y_train,
        X_test=X_test,
        y_test=y_test,
        test_indices=test_idx,
    )


def build_fold_contexts(
    cases: list[DisputeCase], k: int, seed: int, text_model=None
) -> list[FoldContext]:
    text_model = text_model if text_model is not None else default_text_model()
    folds = stratified_folds(cases, k, seed)
    contexts = []
    for fold_idx, test_idx in enumerate(folds):
        train_idx = np.concatenate([folds[j] for j in range(k) if j != fold_idx])
        train_idx = np.array(
            sorted(train_idx, key=lambda i: (cases[i].case_id, i)), dtype=np.int64
        )
        contexts.append(prepare_fold(cases, train_idx, test_idx, text_model))
    return contexts


def fit_predict_fold(learner, ctx: FoldContext, columns: np.ndarray | None = None) -> np.ndarray:
    """Fit a clone of the learner on the fold's training matrix (optionally
    restricted to a column subset) and return test-fold probabilities."""
    if columns is None:
        X_train, X_test = ctx.X_train, ctx.X_test
        names = ctx.schema.names
    else:
        X_train, X_test = ctx.X_train[:, columns], ctx.X_test[:, columns]
        all_names = ctx.schema.names
        names = [all_names[j] for j in columns]
    model, mean, scale = fit_on_matrix(learner, X_train, ctx.y_train, feature_names=names)
    return model.predict_proba(preprocess_matrix(X_test, mean, scale))[:, 1]
