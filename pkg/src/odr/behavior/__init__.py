"""Behavioral analytics: politeness, outcome effects, churn, error slices."""

from odr.behavior.churn import ChurnCondition, ChurnReport, soft_churn
from odr.behavior.correlation import (
    FirstMessageReport,
    StrategyCorrelation,
    first_message_correlation,
)
from odr.behavior.errors import (
    AppealGroupRow,
    ErrorAnalysisReport,
    TermRatioRow,
    error_analysis,
)
from odr.behavior.politeness import (
    STRATEGIES,
    PolitenessVector,
    detect_politeness,
    words,
)
from odr.behavior.trajectory import TrajectoryCell, TrajectoryReport, trajectories

__all__ = [
    "AppealGroupRow",
    "ChurnCondition",
    "ChurnReport",
    "ErrorAnalysisReport",
    "FirstMessageReport",
    "PolitenessVector",
    "STRATEGIES",
    "StrategyCorrelation",
    "TermRatioRow",
    "TrajectoryCell",
    "TrajectoryReport",
    "detect_politeness",
    "error_analysis",
    "first_message_correlation",
    "soft_churn",
    "trajectories",
    "words",
]
