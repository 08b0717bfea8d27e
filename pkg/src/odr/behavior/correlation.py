"""Correlation of first-message politeness with winning the dispute."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from odr.behavior.politeness import STRATEGIES, detect_politeness
from odr.domain import DomainError, OutcomeLabel, Party, SellerType

SIGNIFICANCE_LEVEL = 0.005


@dataclass(frozen=True)
class StrategyCorrelation:
    strategy: str
    correlation: float
    p_value: float
    significant: bool
    constant: bool


@dataclass(frozen=True)
class FirstMessageReport:
    role: str
    rows: tuple[StrategyCorrelation, ...]
    n_cases: int
    n_excluded: int

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["strategy", "correlation", "p_value", "significant", "constant"])
        for row in self.rows:
            writer.writerow(
                [row.strategy, repr(row.correlation), repr(row.p_value),
                 int(row.significant), int(row.constant)]
            )
        return out.getvalue()


def _pearson_with_p(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    n = len(x)
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(xc @ xc) * float(yc @ yc))
    r = float(xc @ yc) / denom
    # two-sided p from the t-approximation with n-2 degrees of freedom
    if 1.0 - r * r <= 0.0:
        return r, 0.0
    if n < 3:
        return r, 1.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return r, float(2.0 * stats.t.sf(abs(t), df=n - 2))


def first_message_correlation(cases, role: Party) -> FirstMessageReport:
    """Per-strategy correlation between a role's opening tone and winning.

    The corpus is restricted to ruled disputes with consumer (C2C) sellers,
    mirroring how the effect population is defined. The indicator comes
    from the role's first during-dispute message; cases where the role
    never spoke during the dispute are excluded and counted.
    """
    role_wins = OutcomeLabel.SELLER_WINS if role is Party.SELLER else OutcomeLabel.BUYER_WINS
    vectors = []
    outcomes = []
    excluded = 0
    for case in cases:
        if case.outcome is None or case.seller.seller_type is not SellerType.C2C:
            continue
        spoken = case.conversation.during_dispute(role)
        if not spoken:
            excluded += 1
            continue
        vectors.append(detect_politeness(spoken[0].body).as_tuple())
        outcomes.append(case.outcome is role_wins)

    y = np.asarray(outcomes, dtype=np.float64)
    if len(np.unique(y)) < 2:
        raise DomainError("first-message correlation needs both outcome classes")
    X = np.asarray(vectors, dtype=np.float64)

    rows = []
    for j, strategy in enumerate(STRATEGIES):
        x = X[:, j]
        if np.ptp(x) == 0:
            rows.append(StrategyCorrelation(strategy, 0.0, 1.0, False, True))
            continue
        r, p = _pearson_with_p(x, y)
        rows.append(StrategyCorrelation(strategy, r, p, p < SIGNIFICANCE_LEVEL, False))
    return FirstMessageReport(
        role=role.value.capitalize(),
        rows=tuple(rows),
        n_cases=len(y),
        n_excluded=excluded,
    )
