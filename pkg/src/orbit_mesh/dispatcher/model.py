"""Dispatcher domain records and their dict forms (wire bodies and event-log rows share them)."""

from __future__ import annotations

import base64
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class WorkerStatus(str, Enum):
    ALIVE = "Alive"
    DEAD = "Dead"


class TaskStatus(str, Enum):
    QUEUED = "Queued"
    CLAIMED = "Claimed"
    SUCCEEDED = "Succeeded"
    FAILED = "Failed"
    EXPIRED = "Expired"

TERMINAL_STATUSES = {TaskStatus.SUCCEEDED, TaskStatus.FAILED, TaskStatus.EXPIRED}


class Outcome(str, Enum):
    SUCCEEDED = "Succeeded"
    FAILED = "Failed"


@dataclass
class WorkerInfo:
    worker_id: str
    namespaces: set[str]
    jobs: set[str]
    registered_at: float
    last_heartbeat: float
    status: WorkerStatus = WorkerStatus.ALIVE

    def to_dict(self) -> dict:
        return {
            "worker_id": self.worker_id,
            "namespaces": sorted(self.namespaces),
            "jobs": sorted(self.jobs),
            "registered_at": self.registered_at,
            "last_heartbeat": self.last_heartbeat,
            "status": self.status.value,
        }


@dataclass
class TaskRecord:
    task_id: str
    namespace: str
    job_name: str
    payload: bytes
    dataset_id: Optional[str]
    status: TaskStatus
    enqueued_at: float
    claimed_by: Optional[str] = None
    lease_deadline: Optional[float] = None
    attempts: int = 0

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "namespace": self.namespace,
            "job_name": self.job_name,
            "payload_b64": base64.b64encode(self.payload).decode("ascii"),
            "dataset_id": self.dataset_id,
            "status": self.status.value,
            "enqueued_at": self.enqueued_at,
            "claimed_by": self.claimed_by,
            "lease_deadline": self.lease_deadline,
            "attempts": self.attempts,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TaskRecord":
        return cls(
            task_id=d["task_id"],
            namespace=d["namespace"],
            job_name=d["job_name"],
            payload=base64.b64decode(d["payload_b64"]),
            dataset_id=d.get("dataset_id"),
            status=TaskStatus(d["status"]),
            enqueued_at=d["enqueued_at"],
            claimed_by=d.get("claimed_by"),
            lease_deadline=d.get("lease_deadline"),
            attempts=d.get("attempts", 0),
        )


@dataclass
class ResultEntry:
    task_id: str
    outcome: Outcome
    result_payload: bytes
    completed_at: float
    worker_id: str

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "outcome": self.outcome.value,
            "result_b64": base64.b64encode(self.result_payload).decode("ascii"),
            "completed_at": self.completed_at,
            "worker_id": self.worker_id,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ResultEntry":
        return cls(
            task_id=d["task_id"],
            outcome=Outcome(d["outcome"]),
            result_payload=base64.b64decode(d["result_b64"]),
            completed_at=d["completed_at"],
            worker_id=d["worker_id"],
        )


class Pending:
    """Sentinel returned by get_result for tasks that are Queued or Claimed."""

    def __repr__(self) -> str:  # pragma: no cover
        return "Pending"

PENDING = Pending()


@dataclass
class RegistrationAck:
    lease_ttl_s: float
    heartbeat_interval_s: float


@dataclass
class ReapReport:
    expired_tasks: list[str] = field(default_factory=list)  # leases expired this pass (requeued or Expired)
    dead_workers: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"expired_tasks": list(self.expired_tasks), "dead_workers": list(self.dead_workers)}
