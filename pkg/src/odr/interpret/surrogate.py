"""Local surrogate explanation of the text classifier.

Tokens are masked at random, the classifier is queried on every perturbed
document, and a weighted ridge model from token-presence indicators to the
predicted probability gives per-token weights. Samples near the intact
document (few tokens masked) count more through an exponential kernel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from odr.domain import DomainError

RIDGE_LAMBDA = 1.0


@dataclass(frozen=True)
class TokenExplanation:
    """Token weights for one document, largest |weight| first."""

    prediction: float
    intercept: float
    r_squared: float
    token_weights: tuple[tuple[str, float], ...]
    degenerate: bool
    n_samples: int
    kernel_width: float

    def to_json_dict(self) -> dict:
        return {
            "prediction": self.prediction,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "tokens": [{"token": t, "weight": w} for t, w in self.token_weights],
            "degenerate": self.degenerate,
            "n_samples": self.n_samples,
            "kernel_width": self.kernel_width,
        }


def _weighted_ridge(Z: np.ndarray, y: np.ndarray, sample_weight: np.ndarray, lam: float):
    """Ridge fit with an unpenalized intercept, invariant to sample order.

    Rows are brought into a canonical order before the normal equations are
    accumulated, so permuting the samples gives bit-identical coefficients.
    Returns (intercept, coefficients, weighted R^2).
    """
    Z = np.asarray(Z, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    w = np.asarray(sample_weight, dtype=np.float64)
    # lexsort keys: last is primary, so Z columns lead, weight breaks last ties
    keys = [w, y] + [Z[:, j] for j in range(Z.shape[1] - 1, -1, -1)]
    order = np.lexsort(keys)
    Z, y, w = Z[order], y[order], w[order]

    design = np.hstack([np.ones((len(Z), 1)), Z])
    penalty = lam * np.eye(design.shape[1])
    penalty[0, 0] = 0.0
    weighted = design * w[:, None]
    beta = np.linalg.solve(weighted.T @ design + penalty, weighted.T @ y)

    fitted = design @ beta
    y_bar = float(np.average(y, weights=w))
    ss_res = float(w @ (y - fitted) ** 2)
    ss_tot = float(w @ (y - y_bar) ** 2)
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return float(beta[0]), beta[1:], r_squared


def explain_text(
    text_model,
    document,
    n_samples: int = 1000,
    kernel_width: float | None = None,
    seed=0,
) -> TokenExplanation:
    """Fit a local token-presence surrogate around one document.

    Every sample masks each distinct token independently with probability
    one half; repeated occurrences of a token share one indicator. The
    model is anything with ``predict_proba`` over token sequences. Kernel
    width defaults to 0.75 * sqrt(distinct tokens); ridge strength is
    fixed at 1.0. Deterministic given the seed.
    """
    tokens = list(document)
    if not tokens:
        raise DomainError("cannot explain an empty document")
    if n_samples < 1:
        raise DomainError("n_samples must be ≥ 1")

    distinct = list(dict.fromkeys(tokens))
    m = len(distinct)
    if kernel_width is None:
        kernel_width = 0.75 * float(np.sqrt(m))

    prediction = float(np.asarray(text_model.predict_proba([tokens]))[0, 1])

    rng = np.random.default_rng(seed)
    keep = rng.random((n_samples, m)) >= 0.5
    index_of = {t: j for j, t in enumerate(distinct)}
    slot = [index_of[t] for t in tokens]
    docs = [
        [t for t, j in zip(tokens, slot) if keep[i, j]]
        for i in range(n_samples)
    ]
    preds = np.asarray(text_model.predict_proba(docs), dtype=np.float64)[:, 1]

    if np.all(preds == preds[0]):
        return TokenExplanation(
            prediction=prediction,
            intercept=float(preds[0]),
            r_squared=0.0,
            token_weights=tuple((t, 0.0) for t in distinct),
            degenerate=True,
            n_samples=n_samples,
            kernel_width=kernel_width,
        )

    # squared masking distance equals the masked-token count
    masked = (~keep).sum(axis=1).astype(np.float64)
    sample_weight = np.exp(-masked / kernel_width**2)
    intercept, coefs, r_squared = _weighted_ridge(
        keep.astype(np.float64), preds, sample_weight, RIDGE_LAMBDA
    )

    rank = np.argsort(-np.abs(coefs), kind="stable")
    return TokenExplanation(
        prediction=prediction,
        intercept=intercept,
        r_squared=r_squared,
        token_weights=tuple((distinct[j], float(coefs[j])) for j in rank),
        degenerate=False,
        n_samples=n_samples,
        kernel_width=kernel_width,
    )
