from odr.service.app import create_app
from odr.service.events import EVENT_KINDS, CaseRecordEvent, EventLog, EventLogError
from odr.service.store import (
    CaseState,
    CaseStore,
    ConflictError,
    ModelNotReadyError,
    NotFoundError,
    QueueEntry,
    ServiceError,
    StateError,
    confidence_band,
)

__all__ = [
    "EVENT_KINDS",
    "CaseRecordEvent",
    "CaseState",
    "CaseStore",
    "ConflictError",
    "EventLog",
    "EventLogError",
    "ModelNotReadyError",
    "NotFoundError",
    "QueueEntry",
    "ServiceError",
    "StateError",
    "confidence_band",
    "create_app",
]
