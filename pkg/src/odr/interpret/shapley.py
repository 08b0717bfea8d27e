"""Shapley value estimation by Monte-Carlo permutation sampling.

Each permutation reveals the instance's features one at a time over a
background row drawn for that permutation; the prediction deltas are the
marginal contributions. Per-permutation marginals telescope to
f(x) − f(background draw), so the efficiency gap of the averaged values
has a directly estimable standard error, which the result carries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from odr.domain import DomainError


@dataclass(frozen=True)
class ShapleyEstimate:
    phi: tuple[float, ...]
    std_errors: tuple[float, ...]
    n_permutations: int
    efficiency_gap: float
    efficiency_se: float

    def to_json_dict(self) -> dict:
        return {
            "phi": list(self.phi),
            "std_errors": list(self.std_errors),
            "n_permutations": self.n_permutations,
            "efficiency_gap": self.efficiency_gap,
            "efficiency_se": self.efficiency_se,
        }


@dataclass(frozen=True)
class ShapleySummary:
    """Per-instance Shapley values with a global importance ordering."""

    phi: tuple[tuple[float, ...], ...]
    std_errors: tuple[tuple[float, ...], ...]
    feature_order: tuple[int, ...]
    sample_count: int


def _predict(model, X: np.ndarray) -> np.ndarray:
    return model.predict_proba(X)[:, 1]


def shapley_estimate(model, x, background, n_permutations: int, seed=0) -> ShapleyEstimate:
    """Monte-Carlo permutation Shapley values of one prediction.

    ``seed`` is anything numpy's default_rng accepts, so callers may pass
    derived sequences like (master, instance index).
    """
    if n_permutations < 1:
        raise DomainError("n_permutations must be ≥ 1")
    background = np.asarray(background, dtype=np.float64)
    if background.ndim != 2 or len(background) == 0:
        raise DomainError("background must be a nonempty 2-D sample")
    x = np.asarray(x, dtype=np.float64)
    d = background.shape[1]
    if x.shape != (d,):
        raise DomainError(f"x must be a flat vector of {d} features")

    rng = np.random.default_rng(seed)
    marginals = np.zeros((n_permutations, d))
    base_preds = np.zeros(n_permutations)

    # each permutation turns into d+1 staged rows scored in one model call
    for t in range(n_permutations):
        order = rng.permutation(d)
        row = background[rng.integers(len(background))].copy()
        staged = np.empty((d + 1, d))
        staged[0] = row
        for step, j in enumerate(order):
            row[j] = x[j]
            staged[step + 1] = row
        preds = _predict(model, staged)
        marginals[t, order] = np.diff(preds)
        base_preds[t] = preds[0]

    phi = marginals.mean(axis=0)
    if n_permutations > 1:
        std_errors = marginals.std(axis=0, ddof=1) / np.sqrt(n_permutations)
        efficiency_se = float(base_preds.std(ddof=1) / np.sqrt(n_permutations))
    else:
        std_errors = np.zeros(d)
        efficiency_se = 0.0

    f_x = float(_predict(model, x[None, :])[0])
    mean_background = float(_predict(model, background).mean())
    gap = float(phi.sum() - (f_x - mean_background))
    return ShapleyEstimate(
        phi=tuple(float(v) for v in phi),
        std_errors=tuple(float(v) for v in std_errors),
        n_permutations=n_permutations,
        efficiency_gap=gap,
        efficiency_se=efficiency_se,
    )


def shapley_summary(model, X, background, n_permutations: int, seed: int = 0) -> ShapleySummary:
    """Per-instance estimates for a batch, ordered by mean |phi|.

    Instance i draws its permutations from a (seed, i) stream, so scoring
    order or concurrency cannot change the result.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DomainError("X must be 2-D")
    estimates = [
        shapley_estimate(model, X[i], background, n_permutations, seed=[seed, i])
        for i in range(len(X))
    ]
    phi = np.array([e.phi for e in estimates])
    order = np.argsort(-np.abs(phi).mean(axis=0), kind="stable")
    return ShapleySummary(
        phi=tuple(tuple(row) for row in phi),
        std_errors=tuple(e.std_errors for e in estimates),
        feature_order=tuple(int(j) for j in order),
        sample_count=n_permutations,
    )
