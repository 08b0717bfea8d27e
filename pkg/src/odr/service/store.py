"""Event-sourced case store: ingest, score, rule, appeal, queue.

State lives in memory and is rebuilt from the event log on startup; the same
apply functions run for live writes and for replay. All writes serialize
through one lock, which is what makes "two concurrent rulings, exactly one
succeeds" hold. The attached prediction model is read-only here: no store
operation mutates it.

Product decisions the wire contract leaves open:
  - The queue lists every case (the console filters by status) ordered
    most-uncertain-first, i.e. ascending |p - 0.5|, with ties and unscored
    cases in insertion order. ``queue_order="fifo"`` switches to pure
    insertion order.
  - Confidence bands cut at |p - 0.5| >= 0.25 ("high") and >= 0.10
    ("medium"); anything closer to the coin flip is "low". Unscored cases
    report band "unscored".
"""

from __future__ import annotations

import copy
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from odr.corpus_io import case_from_dict, case_to_dict
from odr.domain import DisputeCase, DomainError, OutcomeLabel, Party
from odr.interpret import explanation_payload
from odr.service.events import CaseRecordEvent, EventLog

BAND_HIGH = 0.25
BAND_MEDIUM = 0.10

STATUS_PENDING = "Pending"
STATUS_RULED = "Ruled"
STATUS_APPEALED = "Appealed"


class ServiceError(Exception):
    """Base for store failures that map onto API status codes."""

    code = "service_error"
    http_status = 500


class NotFoundError(ServiceError):
    code = "not_found"
    http_status = 404


class ConflictError(ServiceError):
    code = "conflict"
    http_status = 409


class StateError(ServiceError):
    """The requested transition is illegal in the case's current status."""

    code = "invalid_state"
    http_status = 409


class ModelNotReadyError(ServiceError):
    code = "model_not_ready"
    http_status = 503


@dataclass
class CaseState:
    case: DisputeCase
    status: str = STATUS_PENDING
    winner: OutcomeLabel | None = None
    ruling_summary: str = ""
    appeal_count: int = 0
    appeals: list[str] = field(default_factory=list)
    predictions: dict[str, dict] = field(default_factory=dict)
    insertion_index: int = 0

    def to_view(self) -> dict:
        return {
            "case": case_to_dict(self.case),
            "status": self.status,
            "winner": None if self.winner is None else self.winner.value,
            "ruling_summary": self.ruling_summary,
            "appeal_count": self.appeal_count,
            "appeals": list(self.appeals),
            "predictions": copy.deepcopy(self.predictions),
        }


@dataclass(frozen=True)
class QueueEntry:
    case_id: str
    p_seller_wins: float | None
    band: str
    status: str

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "p_seller_wins": self.p_seller_wins,
            "band": self.band,
            "status": self.status,
        }


def confidence_band(p: float | None) -> str:
    if p is None:
        return "unscored"
    certainty = abs(p - 0.5)
    if certainty >= BAND_HIGH:
        return "high"
    if certainty >= BAND_MEDIUM:
        return "medium"
    return "low"


def model_version_of(pipeline, stamp: float) -> str:
    seed = getattr(pipeline.learner_, "seed", None)
    seed_part = "s?" if seed is None else f"s{seed}"
    return f"{pipeline.schema_.hash[:12]}-{seed_part}-{int(stamp)}"


class CaseStore:
    def __init__(
        self,
        data_dir: str | Path,
        model=None,
        model_version: str | None = None,
        model_metrics: dict | None = None,
        explain_seed: int = 0,
        queue_order: str = "uncertain",
        clock=time.time,
    ):
        if queue_order not in ("uncertain", "fifo"):
            raise DomainError(f"unknown queue order {queue_order!r}")
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._log = EventLog(self.data_dir / "events.jsonl")
        self._lock = threading.Lock()
        self._clock = clock
        self._queue_order = queue_order
        self._explain_seed = explain_seed
        self._cases: dict[str, CaseState] = {}
        self._order: list[str] = []
        self._next_event_id = 1
        for event in self._log.read_all():
            self._apply(event)
            self._next_event_id = event.event_id + 1
        self._model = None
        self._model_version: str | None = None
        self._model_metrics: dict | None = None
        if model is not None:
            self.attach_model(model, version=model_version, metrics=model_metrics)

    # -- model ----------------------------------------------------------

    def attach_model(self, pipeline, version: str | None = None, metrics: dict | None = None) -> str:
        with self._lock:
            self._model = pipeline
            self._model_version = version or model_version_of(pipeline, self._clock())
            self._model_metrics = metrics
            return self._model_version

    @property
    def model_version(self) -> str | None:
        return self._model_version

    # -- event plumbing ---------------------------------------------------

    def _append(self, case_id: str, kind: str, payload: dict) -> CaseRecordEvent:
        event = CaseRecordEvent(
            event_id=self._next_event_id,
            case_id=case_id,
            kind=kind,
            payload=payload,
            timestamp=float(self._clock()),
        )
        self._log.append(event)
        self._next_event_id += 1
        self._apply(event)
        return event

    def _apply(self, event: CaseRecordEvent) -> None:
        if event.kind == "CaseCreated":
            case = case_from_dict(event.payload["case"])
            state = CaseState(case=case, insertion_index=len(self._order))
            state.appeal_count = case.claim.appeal_count
            self._cases[case.case_id] = state
            self._order.append(case.case_id)
        elif event.kind == "PredictionIssued":
            state = self._cases[event.case_id]
            state.predictions[event.payload["model_version"]] = event.payload["prediction"]
        elif event.kind == "RulingRecorded":
            state = self._cases[event.case_id]
            state.status = STATUS_RULED
            state.winner = OutcomeLabel(event.payload["winner"])
            state.ruling_summary = event.payload["agent_summary"]
        elif event.kind == "AppealFiled":
            state = self._cases[event.case_id]
            state.status = STATUS_APPEALED
            state.appeal_count += 1
            state.appeals.append(event.payload["by"])

    def _require_case(self, case_id: str) -> CaseState:
        state = self._cases.get(case_id)
        if state is None:
            raise NotFoundError(f"no case with id {case_id!r}")
        return state

    # -- operations -------------------------------------------------------

    def ingest_case(self, case: DisputeCase) -> str:
        if case.outcome is not None:
            raise DomainError("live cases are unresolved; ingest rejects a case with an outcome")
        with self._lock:
            if case.case_id in self._cases:
                raise ConflictError(f"case {case.case_id!r} already exists")
            self._append(case.case_id, "CaseCreated", {"case": case_to_dict(case)})
            return case.case_id

    def get_case(self, case_id: str) -> dict:
        with self._lock:
            return self._require_case(case_id).to_view()

    def get_prediction(self, case_id: str) -> dict:
        with self._lock:
            state = self._require_case(case_id)
            if self._model is None:
                raise ModelNotReadyError("no model is loaded; predictions are not ready")
            version = self._model_version
            stored = state.predictions.get(version)
            if stored is None:
                payload = explanation_payload(self._model, state.case, seed=self._explain_seed)
                self._append(
                    case_id,
                    "PredictionIssued",
                    {"model_version": version, "prediction": payload},
                )
                stored = state.predictions[version]
            return {"model_version": version, **copy.deepcopy(stored)}

    def record_ruling(self, case_id: str, winner, agent_summary: str = "") -> dict:
        try:
            winner = OutcomeLabel(winner.value if isinstance(winner, OutcomeLabel) else winner)
        except ValueError:
            raise DomainError(f"unknown winner {winner!r}") from None
        with self._lock:
            state = self._require_case(case_id)
            if state.status == STATUS_RULED:
                raise StateError(f"case {case_id!r} is already ruled; file an appeal first")
            self._append(
                case_id,
                "RulingRecorded",
                {"winner": winner.value, "agent_summary": agent_summary},
            )
            return state.to_view()

    def file_appeal(self, case_id: str, by) -> dict:
        try:
            by = Party(by.value if isinstance(by, Party) else by)
        except ValueError:
            raise DomainError(f"unknown party {by!r}") from None
        with self._lock:
            state = self._require_case(case_id)
            if state.status != STATUS_RULED:
                raise StateError(
                    f"case {case_id!r} is {state.status}; only a ruled case can be appealed"
                )
            self._append(case_id, "AppealFiled", {"by": by.value})
            return state.to_view()

    # -- read models ------------------------------------------------------

    def _latest_p(self, state: CaseState) -> float | None:
        if self._model_version is not None and self._model_version in state.predictions:
            return state.predictions[self._model_version]["p_seller_wins"]
        if state.predictions:
            # fall back to the most recently issued prediction
            return next(reversed(state.predictions.values()))["p_seller_wins"]
        return None

    def queue(self, limit: int | None = None) -> list[QueueEntry]:
        with self._lock:
            entries = []
            for case_id in self._order:
                state = self._cases[case_id]
                p = self._latest_p(state)
                entries.append(QueueEntry(case_id, p, confidence_band(p), state.status))
            if self._queue_order == "uncertain":
                # scored before unscored; sort is stable so equal keys keep
                # insertion order
                entries.sort(key=lambda e: (e.p_seller_wins is None,
                                            abs((e.p_seller_wins or 0.5) - 0.5)))
            if limit is not None:
                if limit < 0:
                    raise DomainError("queue limit must be >= 0")
                entries = entries[:limit]
            return entries

    def stats(self) -> dict:
        with self._lock:
            by_status = {STATUS_PENDING: 0, STATUS_RULED: 0, STATUS_APPEALED: 0}
            ruled_labels = {label.value: 0 for label in OutcomeLabel}
            predictions = 0
            appeals = 0
            for state in self._cases.values():
                by_status[state.status] += 1
                predictions += len(state.predictions)
                appeals += len(state.appeals)
                if state.winner is not None:
                    ruled_labels[state.winner.value] += 1
            n_ruled = sum(ruled_labels.values())
            label_rates = {
                label: (count / n_ruled if n_ruled else 0.0)
                for label, count in ruled_labels.items()
            }
            return {
                "cases": {
                    "total": len(self._cases),
                    "pending": by_status[STATUS_PENDING],
                    "ruled": by_status[STATUS_RULED],
                    "appealed": by_status[STATUS_APPEALED],
                },
                "label_rates": label_rates,
                "appeals_filed": appeals,
                "predictions_issued": predictions,
                "model": {
                    "loaded": self._model is not None,
                    "version": self._model_version,
                    "metrics": copy.deepcopy(self._model_metrics),
                },
            }

    # -- audit ------------------------------------------------------------

    def snapshot(self) -> dict:
        """Canonical JSON view of the whole store, for audit and replay checks."""
        with self._lock:
            return {
                case_id: self._cases[case_id].to_view()
                for case_id in sorted(self._cases)
            }

    def write_snapshot(self) -> Path:
        import json

        path = self.data_dir / "snapshot.json"
        state = self.snapshot()
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(state, fh, sort_keys=True, indent=2)
            fh.write("\n")
        return path
