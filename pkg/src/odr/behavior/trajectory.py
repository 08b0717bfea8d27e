"""Politeness strategy frequency over normalized conversation position."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from odr.behavior.politeness import STRATEGIES, detect_politeness
from odr.domain import DomainError, OutcomeLabel, Party

LOW_SUPPORT = 30


@dataclass(frozen=True)
class TrajectoryCell:
    strategy: str
    role: str
    won: bool
    bin: int
    frequency: float
    support: int
    low_support: bool


@dataclass(frozen=True)
class TrajectoryReport:
    bins: int
    cells: tuple[TrajectoryCell, ...]
    n_cases: int
    n_unlabeled: int

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["strategy", "role", "winner", "bin", "frequency", "support"])
        for cell in self.cells:
            writer.writerow(
                [cell.strategy, cell.role, "won" if cell.won else "lost",
                 cell.bin, repr(cell.frequency), cell.support]
            )
        return out.getvalue()


def trajectories(cases, bins: int = 10) -> TrajectoryReport:
    """Frequency of each strategy per (author role, won/lost, position bin).

    Message i of an n-message conversation lands in bin floor(i*bins/n).
    The winner condition is whether the message's author won the case;
    unlabeled cases are skipped and counted. Every (strategy, role,
    condition, bin) cell is emitted, with cells under 30 observations
    flagged low-support.
    """
    if bins < 2:
        raise DomainError("trajectories need at least 2 bins")
    roles = (Party.BUYER, Party.SELLER)
    hits = {
        (s, role, won): [0] * bins
        for s in STRATEGIES for role in roles for won in (True, False)
    }
    totals = {(role, won): [0] * bins for role in roles for won in (True, False)}

    n_cases = 0
    n_unlabeled = 0
    for case in cases:
        if case.outcome is None:
            n_unlabeled += 1
            continue
        n_cases += 1
        messages = case.conversation.messages
        n = len(messages)
        for i, message in enumerate(messages):
            b = i * bins // n
            won = (case.outcome is OutcomeLabel.SELLER_WINS) == (message.author is Party.SELLER)
            totals[message.author, won][b] += 1
            vector = detect_politeness(message.body)
            for strategy, fired in zip(STRATEGIES, vector.as_tuple()):
                if fired:
                    hits[strategy, message.author, won][b] += 1

    cells = []
    for strategy in STRATEGIES:
        for role in roles:
            for won in (True, False):
                for b in range(bins):
                    support = totals[role, won][b]
                    count = hits[strategy, role, won][b]
                    cells.append(
                        TrajectoryCell(
                            strategy=strategy,
                            role=role.value.capitalize(),
                            won=won,
                            bin=b,
                            frequency=count / support if support else 0.0,
                            support=support,
                            low_support=support < LOW_SUPPORT,
                        )
                    )
    return TrajectoryReport(
        bins=bins,
        cells=tuple(cells),
        n_cases=n_cases,
        n_unlabeled=n_unlabeled,
    )
