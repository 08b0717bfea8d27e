"""Global feature importance from recorded split gains."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from odr.domain import DomainError
from odr.features import FeatureSchema


@dataclass(frozen=True)
class GainRow:
    feature: str
    family: str | None
    gain: float
    split_count: int


@dataclass(frozen=True)
class GainReport:
    rows: tuple[GainRow, ...]

    def to_json_dict(self) -> dict:
        return {
            "rows": [
                {
                    "feature": r.feature,
                    "family": r.family,
                    "gain": r.gain,
                    "split_count": r.split_count,
                }
                for r in self.rows
            ]
        }


def gain_importance(model, schema: FeatureSchema | None = None) -> GainReport:
    """Mean recorded split gain per feature, over every split that used it.

    Features the ensemble never split on get no row. Rows sort by mean gain
    descending, ties by feature name.
    """
    trees = getattr(model, "trees_", None)
    if trees is None:
        raise DomainError("model is not a fitted tree ensemble")
    totals: dict[int, float] = {}
    counts: dict[int, int] = {}
    for tree in trees:
        internal = np.flatnonzero(tree.feature >= 0)
        for node in internal:
            j = int(tree.feature[node])
            totals[j] = totals.get(j, 0.0) + float(tree.gain[node])
            counts[j] = counts.get(j, 0) + 1

    names = getattr(model, "feature_names_", None)
    rows = []
    for j in totals:
        if names is not None:
            feature = names[j]
        else:
            feature = f"f{j}"
        family = schema.columns[j].family.value if schema is not None else None
        rows.append(
            GainRow(
                feature=feature,
                family=family,
                gain=totals[j] / counts[j],
                split_count=counts[j],
            )
        )
    rows.sort(key=lambda r: (-r.gain, r.feature))
    return GainReport(rows=tuple(rows))
