from odr.evaluation.ablation import MODES, AblationReport, ablate, schema_units
from odr.evaluation.crossval import CrossValidation, cross_validate, parallel_map
from odr.evaluation.folds import stratified_folds
from odr.evaluation.metrics import EvalReport, compute_metrics, rank_auroc, roc_curve
from odr.evaluation.search import (
    SearchResult,
    SearchTrial,
    canonical_space,
    random_search,
)
from odr.evaluation.segments import (
    SegmentReport,
    SegmentRow,
    SegmentSkip,
    segment_evaluate,
)

__all__ = [
    "MODES",
    "AblationReport",
    "ablate",
    "schema_units",
    "CrossValidation",
    "cross_validate",
    "parallel_map",
    "stratified_folds",
    "EvalReport",
    "compute_metrics",
    "rank_auroc",
    "roc_curve",
    "SearchResult",
    "SearchTrial",
    "canonical_space",
    "random_search",
    "SegmentReport",
    "SegmentRow",
    "SegmentSkip",
    "segment_evaluate",
]
