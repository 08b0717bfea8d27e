"""Case explanation payload for the service and console.

Bundles the probability, the decision-path feature contributions, and the
token-level text explanation for one case into the JSON shape the review
surfaces consume. Seeds for the stochastic parts derive from the master
seed and the case id, so concurrent explanation of many cases is safe.
"""

from __future__ import annotations

import numpy as np

from odr.domain import DisputeCase
from odr.features import assemble_matrix
from odr.interpret.paths import path_attribution
from odr.interpret.shapley import shapley_estimate
from odr.interpret.surrogate import explain_text
from odr.text import conversation_tokens, predict_text
from odr.text.hashing import fnv1a64

TOP_CONTRIBUTIONS = 10


def _case_seed(seed: int, case_id: str) -> list[int]:
    return [seed, fnv1a64(case_id.encode("utf-8"))]


def _json_value(v: float):
    return None if np.isnan(v) else float(v)


def explanation_payload(
    pipeline,
    case: DisputeCase,
    seed: int = 0,
    shapley_background=None,
    shapley_permutations: int = 500,
) -> dict:
    """Explanation JSON for one case from a fitted pipeline.

    Contributions are the decision-path attribution truncated to the ten
    largest by |weight|; values are the raw (pre-imputation) feature
    values, with missing reported as null. When a background matrix is
    given, a Monte-Carlo Shapley block is included as well.
    """
    text = predict_text(pipeline.text_model_, case.conversation)
    X, _, _ = assemble_matrix([case], [text], pipeline.schema_)
    x_model = pipeline._impute(X)[0]
    p = float(pipeline.predict_matrix(X, pipeline.schema_)[0])

    attribution = path_attribution(pipeline.learner_, x_model)
    names = pipeline.schema_.names
    ranked = np.argsort(-np.abs(attribution.contributions), kind="stable")
    contributions = [
        {
            "feature": names[j],
            "value": _json_value(X[0, j]),
            "weight": float(attribution.contributions[j]),
        }
        for j in ranked[:TOP_CONTRIBUTIONS]
    ]

    # a case can arrive with no conversation text; that is an empty token
    # list in the payload, not an explanation failure
    tokens = conversation_tokens(case.conversation)
    if tokens:
        explanation = explain_text(
            pipeline.text_model_, tokens, seed=_case_seed(seed, case.case_id)
        )
        token_rows = [{"token": t, "weight": w} for t, w in explanation.token_weights]
    else:
        token_rows = []
    payload = {
        "case_id": case.case_id,
        "p_seller_wins": p,
        "bias": attribution.bias,
        "contributions": contributions,
        "tokens": token_rows,
        "neutral_text": bool(text.neutral),
    }

    if shapley_background is not None:
        background = pipeline._impute(np.asarray(shapley_background, dtype=np.float64))
        estimate = shapley_estimate(
            pipeline.learner_,
            x_model,
            background,
            shapley_permutations,
            seed=_case_seed(seed, case.case_id),
        )
        order = np.argsort(-np.abs(estimate.phi), kind="stable")
        payload["shapley"] = [
            {
                "feature": names[j],
                "value": _json_value(X[0, j]),
                "phi": float(estimate.phi[j]),
                "std_error": float(estimate.std_errors[j]),
            }
            for j in order
        ]
    return payload
