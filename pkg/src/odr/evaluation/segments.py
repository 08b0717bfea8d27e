"""Per-segment training and evaluation, mirroring the segmented-model
comparison: split the corpus by claim type and seller type, train a
distinct model per segment, and report the size-weighted average AUROC."""

from __future__ import annotations

from dataclasses import dataclass

from odr.domain import DisputeCase, DomainError
from odr.evaluation.crossval import CrossValidation, cross_validate

_ACCESSORS = {
    "claim_type": lambda case: case.claim.claim_type.value,
    "seller_type": lambda case: case.seller.seller_type.value,
}


@dataclass(frozen=True)
class SegmentRow:
    segment: tuple[str, ...]
    n: int
    result: CrossValidation


@dataclass(frozen=True)
class SegmentSkip:
    segment: tuple[str, ...]
    n: int
    reason: str


@dataclass(frozen=True)
class SegmentReport:
    keys: tuple[str, ...]
    rows: tuple[SegmentRow, ...]
    skipped: tuple[SegmentSkip, ...]
    weighted_auroc: float

    def to_json_dict(self) -> dict:
        return {
            "keys": list(self.keys),
            "weighted_auroc": self.weighted_auroc,
            "rows": [
                {
                    "segment": list(r.segment),
                    "n": r.n,
                    "mean_auroc": r.result.mean_auroc,
                }
                for r in self.rows
            ],
            "skipped": [
                {"segment": list(s.segment), "n": s.n, "reason": s.reason}
                for s in self.skipped
            ],
        }


def segment_evaluate(
    learner,
    cases: list[DisputeCase],
    segment_keys: tuple[str, ...] = ("claim_type", "seller_type"),
    k: int = 5,
    seed: int = 0,
    threshold: float = 0.5,
    text_model=None,
) -> SegmentReport:
    """Cross-validate one model per segment; degenerate segments (too small
    or single-class for a stratified split) are skipped and recorded, and
    the weighted average runs over the segments that trained."""
    for key in segment_keys:
        if key not in _ACCESSORS:
            raise DomainError(f"unknown segment key {key!r}; choose from {sorted(_ACCESSORS)}")
    if not cases:
        raise DomainError("cannot segment an empty corpus")

    groups: dict[tuple[str, ...], list[DisputeCase]] = {}
    for case in cases:
        label = tuple(_ACCESSORS[key](case) for key in segment_keys)
        groups.setdefault(label, []).append(case)

    rows: list[SegmentRow] = []
    skipped: list[SegmentSkip] = []
    for label in sorted(groups):
        members = groups[label]
        try:
            result = cross_validate(
                learner, members, k=k, seed=seed, threshold=threshold, text_model=text_model
            )
        except DomainError as err:
            skipped.append(SegmentSkip(segment=label, n=len(members), reason=str(err)))
            continue
        rows.append(SegmentRow(segment=label, n=len(members), result=result))

    if not rows:
        raise DomainError("every segment was degenerate; nothing to evaluate")
    total = sum(row.n for row in rows)
    weighted = sum(row.n / total * row.result.mean_auroc for row in rows)
    return SegmentReport(
        keys=tuple(segment_keys),
        rows=tuple(rows),
        skipped=tuple(skipped),
        weighted_auroc=float(weighted),
    )
