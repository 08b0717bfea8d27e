"""Where the classifier goes wrong: appeals, summary length, vocabulary."""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass

import numpy as np

from odr.behavior.politeness import words
from odr.domain import DomainError, OutcomeLabel

MIN_TERM_FREQUENCY = 10
APPEAL_GROUPS = ("0", "1", "2", "3+")


@dataclass(frozen=True)
class AppealGroupRow:
    group: str
    n: int
    share: float
    accuracy: float


@dataclass(frozen=True)
class TermRatioRow:
    term: str
    ratio: float
    count_incorrect: int
    count_correct: int


@dataclass(frozen=True)
class ErrorAnalysisReport:
    groups: tuple[AppealGroupRow, ...]
    mean_summary_chars_correct: float
    mean_summary_chars_incorrect: float
    term_ratios: tuple[TermRatioRow, ...]
    n: int
    no_incorrect: bool
    no_correct: bool

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["section", "key", "value", "extra"])
        for row in self.groups:
            writer.writerow(["accuracy_by_appeals", row.group, repr(row.accuracy),
                             f"n={row.n};share={row.share!r}"])
        writer.writerow(["summary_chars", "correct", repr(self.mean_summary_chars_correct), ""])
        writer.writerow(["summary_chars", "incorrect", repr(self.mean_summary_chars_incorrect), ""])
        for row in self.term_ratios:
            writer.writerow(["term_ratio", row.term, repr(row.ratio),
                             f"incorrect={row.count_incorrect};correct={row.count_correct}"])
        return out.getvalue()


def _as_numeric(prediction) -> int:
    if isinstance(prediction, OutcomeLabel):
        return prediction.numeric
    return int(prediction)


def _group_of(appeal_count: int) -> str:
    return "3+" if appeal_count >= 3 else str(appeal_count)


def error_analysis(predictions, cases) -> ErrorAnalysisReport:
    """Accuracy by appeal group plus correct-vs-incorrect summary contrasts.

    Summary lengths are characters of the agent summary. The vocabulary
    table scores each term's add-1-smoothed relative frequency in
    incorrect summaries over correct ones, keeping terms seen at least 10
    times overall, largest ratio first.
    """
    cases = list(cases)
    predicted = [_as_numeric(p) for p in predictions]
    if len(predicted) != len(cases):
        raise DomainError("predictions and cases must align")
    if not cases:
        raise DomainError("error analysis needs a nonempty corpus")
    for case in cases:
        if case.outcome is None:
            raise DomainError(f"case {case.case_id} has no outcome")

    correct = np.array(
        [p == c.outcome.numeric for p, c in zip(predicted, cases)], dtype=bool
    )

    groups = []
    for group in APPEAL_GROUPS:
        members = [i for i, c in enumerate(cases) if _group_of(c.claim.appeal_count) == group]
        if not members:
            continue
        groups.append(
            AppealGroupRow(
                group=group,
                n=len(members),
                share=len(members) / len(cases),
                accuracy=float(correct[members].mean()),
            )
        )

    lengths = np.array([len(c.claim.agent_summary) for c in cases], dtype=np.float64)
    no_incorrect = bool(correct.all())
    no_correct = bool((~correct).all())
    mean_correct = float(lengths[correct].mean()) if not no_correct else 0.0
    mean_incorrect = float(lengths[~correct].mean()) if not no_incorrect else 0.0

    correct_counts: Counter = Counter()
    incorrect_counts: Counter = Counter()
    for ok, case in zip(correct, cases):
        (correct_counts if ok else incorrect_counts).update(words(case.claim.agent_summary))

    term_rows: list[TermRatioRow] = []
    if not no_incorrect and not no_correct:
        vocabulary = set(correct_counts) | set(incorrect_counts)
        n_correct = sum(correct_counts.values()) + len(vocabulary)
        n_incorrect = sum(incorrect_counts.values()) + len(vocabulary)
        for term in sorted(vocabulary):
            c_inc = incorrect_counts[term]
            c_cor = correct_counts[term]
            if c_inc + c_cor < MIN_TERM_FREQUENCY:
                continue
            ratio = ((c_inc + 1) / n_incorrect) / ((c_cor + 1) / n_correct)
            term_rows.append(TermRatioRow(term, float(ratio), c_inc, c_cor))
        term_rows.sort(key=lambda r: (-r.ratio, r.term))

    return ErrorAnalysisReport(
        groups=tuple(groups),
        mean_summary_chars_correct=mean_correct,
        mean_summary_chars_incorrect=mean_incorrect,
        term_ratios=tuple(term_rows),
        n=len(cases),
        no_incorrect=no_incorrect,
        no_correct=no_correct,
    )
