"""Randomized hyperparameter search over seeded cross-validation.

Spaces map parameter names to either a list of discrete options, sampled
uniformly, or a descriptor tuple: ("uniform_int", lo, hi) inclusive,
("uniform", lo, hi), or ("log_uniform", lo, hi). The default space per
learner mirrors the published ranges the repository's classifiers were
tuned over; learning rates draw log-uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import clone

from odr.domain import DisputeCase, DomainError
from odr.evaluation.crossval import cross_validate, parallel_map
from odr.features import build_schema
from odr.learners import (
    DecisionTreeClassifier,
    GBDTClassifier,
    KNNClassifier,
    MLPClassifier,
    RandomForestClassifier,
)
from odr.pipeline import default_text_model


@dataclass(frozen=True)
class SearchTrial:
    params: dict
    fold_aurocs: tuple[float, ...]
    mean_auroc: float
    trial_index: int
    seed: tuple[int, int]

    def to_json_dict(self) -> dict:
        return {
            "params": {k: list(v) if isinstance(v, tuple) else v for k, v in self.params.items()},
            "fold_aurocs": list(self.fold_aurocs),
            "mean_auroc": self.mean_auroc,
            "trial_index": self.trial_index,
            "seed": list(self.seed),
        }


@dataclass(frozen=True)
class SearchResult:
    best: SearchTrial
    trials: tuple[SearchTrial, ...]

    def to_json_dict(self) -> dict:
        return {
            "best": self.best.to_json_dict(),
            "trials": [t.to_json_dict() for t in self.trials],
        }


def _mlp_layer_options() -> list[tuple[int, ...]]:
    widths = (32, 64, 128, 256)
    options: list[tuple[int, ...]] = [(w,) for w in widths]
    options += [(a, b) for a in widths for b in widths]
    options += [(a, b, c) for a in widths for b in widths for c in widths]
    return options


def canonical_space(learner, n_features: int) -> dict:
    """The default search space for a learner; tree depth ranges scale with
    the feature count as the published setup did."""
    if isinstance(learner, KNNClassifier):
        return {
            "k": ("uniform_int", 1, 10),
            "weights": ["uniform", "distance"],
            "metric": ["manhattan", "euclidean"],
        }
    if isinstance(learner, RandomForestClassifier):
        return {
            "n_trees": ("uniform_int", 10, 200),
            "max_depth": ("uniform_int", 10, max(10, n_features)),
            "min_samples_split": ("uniform_int", 2, 20),
            "min_samples_leaf": ("uniform_int", 2, 20),
        }
    if isinstance(learner, DecisionTreeClassifier):
        return {
            "max_depth": ("uniform_int", 10, max(10, n_features)),
            "min_samples_split": ("uniform_int", 2, 20),
            "min_samples_leaf": ("uniform_int", 2, 20),
        }
    if isinstance(learner, GBDTClassifier):
        return {
            "n_trees": ("uniform_int", 150, 1000),
            "learning_rate": ("log_uniform", 0.01, 0.6),
            "max_depth": ("uniform_int", 10, max(10, n_features)),
            "subsample": ("uniform", 0.3, 0.9),
            "colsample": ("uniform", 0.5, 0.9),
            "min_child_weight": ("uniform_int", 1, 4),
        }
    if isinstance(learner, MLPClassifier):
        return {
            "hidden_layers": _mlp_layer_options(),
            "activation": ["tanh", "relu", "logistic"],
            "solver": ["adam", "lbfgs"],
            "alpha": [1e-4, 1e-3, 1e-2],
        }
    return {}


def _sample(rng: np.random.Generator, descriptor):
    if isinstance(descriptor, list):
        if not descriptor:
            raise DomainError("empty option list in search space")
        return descriptor[int(rng.integers(len(descriptor)))]
    if isinstance(descriptor, tuple) and len(descriptor) == 3:
        kind, lo, hi = descriptor
        if kind == "uniform_int":
            return int(rng.integers(lo, hi + 1))
        if kind == "uniform":
            return float(rng.uniform(lo, hi))
        if kind == "log_uniform":
            return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
    raise DomainError(f"unrecognized space descriptor {descriptor!r}")


def random_search(
    learner,
    cases: list[DisputeCase],
    space: dict | None = None,
    trials: int = 50,
    k: int = 5,
    seed: int = 0,
    threshold: float = 0.5,
    text_model=None,
    jobs: int = 1,
) -> SearchResult:
    """Sample hyperparameter assignments and rank them by mean CV AUROC.

    Folds are fixed by the master seed, so every trial competes on the same
    splits; each trial's sampling stream derives from (seed, trial index),
    which makes concurrent evaluation order irrelevant and lets ``jobs``
    workers run trials in parallel without changing the result. Ties on
    mean AUROC resolve to the lowest trial index.
    """
    if trials < 1:
        raise DomainError("trials must be ≥ 1")
    if space is None:
        probe = text_model if text_model is not None else default_text_model()
        schema = build_schema(cases, embedding_dim=probe.embedding_dim)
        space = canonical_space(learner, n_features=len(schema))
    if not space:
        raise DomainError(f"{type(learner).__name__} has no searchable hyperparameters")

    def run_trial(t: int) -> SearchTrial:
        rng = np.random.default_rng([seed, t])
        params = {name: _sample(rng, space[name]) for name in sorted(space)}
        spec = clone(learner).set_params(**params)
        cv = cross_validate(spec, cases, k=k, seed=seed, threshold=threshold, text_model=text_model)
        return SearchTrial(
            params=params,
            fold_aurocs=tuple(r.auroc for r in cv.folds),
            mean_auroc=cv.mean_auroc,
            trial_index=t,
            seed=(seed, t),
        )

    all_trials = parallel_map(run_trial, range(trials), jobs)

    best = all_trials[0]
    for trial in all_trials[1:]:
        if trial.mean_auroc > best.mean_auroc:
            best = trial
    return SearchResult(best=best, trials=tuple(all_trials))
