"""Decision-path attribution of a tree-ensemble margin.

Each node transition moves the subtree expectation (the training-cover
weighted mean leaf weight recorded at fit time); that delta is credited to
the split feature. Summing the credits over every tree reconstructs the
margin exactly, which the tests assert case by case.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from odr.domain import DomainError
from odr.learners.loss import sigmoid


@dataclass(frozen=True)
class PathAttribution:
    bias: float
    contributions: tuple[float, ...]
    margin: float
    probability: float

    def to_json_dict(self) -> dict:
        return {
            "bias": self.bias,
            "contributions": list(self.contributions),
            "margin": self.margin,
            "probability": self.probability,
        }


def path_attribution(model, x) -> PathAttribution:
    """Decompose one prediction into per-feature margin contributions."""
    trees = getattr(model, "trees_", None)
    if trees is None:
        raise DomainError("model is not a fitted tree ensemble")
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or len(x) != model.n_features_in_:
        raise DomainError(f"expected a flat vector of {model.n_features_in_} features")

    eta = model.learning_rate
    bias = float(model.base_score_)
    contributions = np.zeros(model.n_features_in_)
    for tree in trees:
        if tree.expectation is None or tree.cover is None:
            raise DomainError(
                "tree lacks the cover/expectation cache; retrain so attribution "
                "expectations are recorded"
            )
        path = tree.decision_path(x)
        bias += eta * float(tree.expectation[path[0]])
        for parent, child in zip(path, path[1:]):
            j = int(tree.feature[parent])
            contributions[j] += eta * float(tree.expectation[child] - tree.expectation[parent])

    # margin comes from the model's own prediction path so the
    # bias + contributions identity is a genuine cross-check
    margin = float(model.predict_margin(x[None, :])[0])
    return PathAttribution(
        bias=bias,
        contributions=tuple(float(v) for v in contributions),
        margin=margin,
        probability=float(sigmoid(np.array([margin]))[0]),
    )
