from orbit_mesh.dispatcher.core import Dispatcher, DispatcherConfig
from orbit_mesh.dispatcher.errors import (
    DispatcherError,
    DuplicateAliveWorker,
    InvalidJobRequest,
    InvalidRegistration,
    NamespaceNotRegistered,
    StaleLease,
    UnknownTask,
    UnknownWorker,
)
from orbit_mesh.dispatcher.model import (
    Pending,
    ReapReport,
    RegistrationAck,
    ResultEntry,
    TaskRecord,
    TaskStatus,
    WorkerInfo,
    WorkerStatus,
)

__all__ = [
    "Dispatcher",
    "DispatcherConfig",
    "DispatcherError",
    "DuplicateAliveWorker",
    "InvalidJobRequest",
    "InvalidRegistration",
    "NamespaceNotRegistered",
    "Pending",
    "ReapReport",
    "RegistrationAck",
    "ResultEntry",
    "StaleLease",
    "TaskRecord",
    "TaskStatus",
    "UnknownTask",
    "UnknownWorker",
    "WorkerInfo",
    "WorkerStatus",
]
