"""Model explanations: gain importance, path attribution, Shapley, text."""

from odr.interpret.gain import GainReport, GainRow, gain_importance
from odr.interpret.paths import PathAttribution, path_attribution
from odr.interpret.payload import explanation_payload
from odr.interpret.shapley import (
    ShapleyEstimate,
    ShapleySummary,
    shapley_estimate,
    shapley_summary,
)
from odr.interpret.surrogate import TokenExplanation, explain_text

__all__ = [
    "GainReport",
    "GainRow",
    "PathAttribution",
    "ShapleyEstimate",
    "ShapleySummary",
    "TokenExplanation",
    "explain_text",
    "explanation_payload",
    "gain_importance",
    "path_attribution",
    "shapley_estimate",
    "shapley_summary",
]
