"""Append-only event log backing the case service.

Every state change is one JSON line in ``events.jsonl``. The log is the
source of truth: rebuilding a store replays the log through the same apply
functions the live path uses, so replayed state matches live state exactly.
Timestamps are informational; replay never reads them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

EVENT_KINDS = ("CaseCreated", "PredictionIssued", "RulingRecorded", "AppealFiled")


@dataclass(frozen=True)
class CaseRecordEvent:
    event_id: int
    case_id: str
    kind: str
    payload: dict
    timestamp: float

    def __post_init__(self) -> None:
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")

    def to_json_dict(self) -> dict:
        return {
            "event_id": self.event_id,
            "case_id": self.case_id,
            "kind": self.kind,
            "payload": self.payload,
            "timestamp": self.timestamp,
        }


class EventLogError(ValueError):
    """The event log file is malformed."""


class EventLog:
    """Single-writer JSONL event journal."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, event: CaseRecordEvent) -> None:
        line = json.dumps(event.to_json_dict(), sort_keys=True, separators=(",", ":"))
        with open(self.path, "a", encoding="utf-8", newline="\n") as fh:
            fh.write(line)
            fh.write("\n")
            fh.flush()

    def read_all(self) -> list[CaseRecordEvent]:
        if not self.path.exists():
            return []
        events: list[CaseRecordEvent] = []
        last_id = 0
        with open(self.path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                    event = CaseRecordEvent(
                        event_id=int(obj["event_id"]),
                        case_id=obj["case_id"],
                        kind=obj["kind"],
                        payload=obj["payload"],
                        timestamp=float(obj["timestamp"]),
                    )
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise EventLogError(f"{self.path}, line {lineno}: {exc}") from exc
                if event.event_id <= last_id:
                    raise EventLogError(
                        f"{self.path}, line {lineno}: event ids must increase strictly"
                    )
                last_id = event.event_id
                events.append(event)
        return events
