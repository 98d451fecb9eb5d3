"""The Orbit core: worker registry, heartbeat health, namespace-scoped discovery, FIFO task queue with atomic lease-based claims, and the result store.

All operations run under one lock, so the mutable state behaves as a single
serialized state machine and the event-log order is a linearization of the
external history.
"""

from __future__ import annotations

import base64
import threading
import uuid
from dataclasses import dataclass, field
from typing import Optional

from orbit_mesh.clock import Clock, SystemClock
from orbit_mesh.dispatcher import errors
from orbit_mesh.dispatcher.eventlog import EventLog, NullEventLog
from orbit_mesh.dispatcher.model import (
    PENDING,
    Outcome,
    Pending,
    ReapReport,
    RegistrationAck,
    ResultEntry,
    TaskRecord,
    TaskStatus,
    WorkerInfo,
    WorkerStatus,
)

EXPIRED_REASON = b'{"reason":"lease expired"}'


@dataclass
class DispatcherConfig:
    lease_ttl_s: float = 60.0
    heartbeat_interval_s: float = 10.0
    dead_after_s: Optional[float] = None  # default 3 x heartbeat_interval_s
    reap_interval_s: float = 5.0
    max_attempts: int = 2
    event_log_path: Optional[str] = None
    fsync_events: bool = False
    host: str = "127.0.0.1"
    port: int = 7070
    token: Optional[str] = None

    def __post_init__(self):
        if self.dead_after_s is None:
            self.dead_after_s = 3 * self.heartbeat_interval_s


@dataclass
class _Queue:
    """Per-namespace FIFO of Queued task ids; requeues go to the tail."""

    task_ids: list[str] = field(default_factory=list)


class Dispatcher:
    def __init__(self, config: DispatcherConfig | None = None, clock: Clock | None = None,
                 event_log: EventLog | NullEventLog | None = None):
        self.config = config or DispatcherConfig()
        self.clock = clock or SystemClock()
        if event_log is None:
            if self.config.event_log_path:
                event_log = EventLog(self.config.event_log_path, fsync=self.config.fsync_events)
            else:
                event_log = NullEventLog()
        self.event_log = event_log
        self._lock = threading.RLock()
        self._workers: dict[str, WorkerInfo] = {}
        self._tasks: dict[str, TaskRecord] = {}
        self._queues: dict[str, _Queue] = {}
        self._results: dict[str, ResultEntry] = {}
        for event in self.event_log.replay():
            self._apply(event)

    # -- operations ------------------------------------------------------

    def register_worker(self, worker_id: str, namespaces: set[str], jobs: set[str]) -> RegistrationAck:
        if not worker_id:
            raise errors.InvalidRegistration("worker_id must be non-empty")
        if not namespaces:
            raise errors.InvalidRegistration("namespaces must be non-empty")
        namespaces = set(namespaces)
        jobs = set(jobs)
        with self._lock:
            now = self.clock.now()
            existing = self._workers.get(worker_id)
            if existing is not None and self._is_alive(existing, now):
                raise errors.DuplicateAliveWorker(f"worker {worker_id!r} is already registered and alive")
            self._workers[worker_id] = WorkerInfo(
                worker_id=worker_id, namespaces=namespaces, jobs=jobs,
                registered_at=now, last_heartbeat=now, status=WorkerStatus.ALIVE,
            )
            self.event_log.append("register", now, worker_id=worker_id,
                                  namespaces=sorted(namespaces), jobs=sorted(jobs))
            return RegistrationAck(self.config.lease_ttl_s, self.config.heartbeat_interval_s)

    def heartbeat(self, worker_id: str) -> None:
        with self._lock:
            worker = self._workers.get(worker_id)
            if worker is None:
                raise errors.UnknownWorker(f"no such worker {worker_id!r}")
            now = self.clock.now()
            worker.last_heartbeat = now
            worker.status = WorkerStatus.ALIVE
            self.event_log.append("heartbeat", now, worker_id=worker_id)

    def discover(self, namespace: str) -> list[WorkerInfo]:
        with self._lock:
            now = self.clock.now()
            found = [
                w for w in self._workers.values()
                if namespace in w.namespaces and self._is_alive(w, now)
            ]
            return sorted((self._copy_worker(w) for w in found), key=lambda w: w.worker_id)

    def enqueue(self, namespace: str, job_name: str, payload: bytes,
                dataset_id: Optional[str] = None) -> str:
        if not namespace or not job_name:
            raise errors.InvalidJobRequest("namespace and job_name must be non-empty")
        with self._lock:
            now = self.clock.now()
            task_id = str(uuid.uuid4())
            task = TaskRecord(
                task_id=task_id, namespace=namespace, job_name=job_name,
                payload=bytes(payload), dataset_id=dataset_id,
                status=TaskStatus.QUEUED, enqueued_at=now,
            )
            self._tasks[task_id] = task
            self._queue_for(namespace)
            self._insert_fifo(namespace, task)
            self.event_log.append(
                "enqueue", now, task_id=task_id, namespace=namespace, job_name=job_name,
                payload_b64=base64.b64encode(task.payload).decode("ascii"), dataset_id=dataset_id,
            )
            return task_id

    def claim(self, worker_id: str, namespaces: set[str]) -> Optional[TaskRecord]:
        with self._lock:
            now = self.clock.now()
            worker = self._workers.get(worker_id)
            if worker is None or not self._is_alive(worker, now):
                raise errors.UnknownWorker(f"no alive worker {worker_id!r}")
            requested = set(namespaces)
            undeclared = requested - worker.namespaces
            if undeclared:
                raise errors.NamespaceNotRegistered(
                    f"worker {worker_id!r} did not declare namespaces {sorted(undeclared)}")
            for namespace in sorted(requested):
                queue = self._queues.get(namespace)
                if queue is None or not queue.task_ids:
                    continue
                task_id = queue.task_ids.pop(0)
                task = self._tasks[task_id]
                task.status = TaskStatus.CLAIMED
                task.claimed_by = worker_id
                task.lease_deadline = now + self.config.lease_ttl_s
                self.event_log.append("claim", now, task_id=task_id, worker_id=worker_id,
                                      namespace=namespace, lease_deadline=task.lease_deadline,
                                      attempts=task.attempts)
                return self._copy_task(task)
            return None

    def complete(self, worker_id: str, task_id: str, outcome: Outcome | str,
                 result_payload: bytes) -> None:
        outcome = Outcome(outcome)
        with self._lock:
            now = self.clock.now()
            task = self._tasks.get(task_id)
            if task is None:
                raise errors.UnknownTask(f"no such task {task_id!r}")
            if task.status is not TaskStatus.CLAIMED or task.claimed_by != worker_id:
                raise errors.StaleLease(
                    f"task {task_id!r} is not held by {worker_id!r}; result discarded")
            if task.lease_deadline is not None and now > task.lease_deadline:
                raise errors.StaleLease(
                    f"lease on task {task_id!r} expired at {task.lease_deadline}; result discarded")
            task.status = TaskStatus(outcome.value)
            task.claimed_by = None
            task.lease_deadline = None
            self._results[task_id] = ResultEntry(
                task_id=task_id, outcome=outcome, result_payload=bytes(result_payload),
                completed_at=now, worker_id=worker_id,
            )
            self.event_log.append(
                "complete", now, task_id=task_id, worker_id=worker_id, outcome=outcome.value,
                result_b64=base64.b64encode(bytes(result_payload)).decode("ascii"),
            )

    def reap(self, now: Optional[float] = None) -> ReapReport:
        with self._lock:
            if now is None:
                now = self.clock.now()
            report = ReapReport()
            expired = [
                t for t in self._tasks.values()
                if t.status is TaskStatus.CLAIMED and t.lease_deadline is not None
                and t.lease_deadline < now
            ]
            for task in sorted(expired, key=lambda t: (t.lease_deadline, t.task_id)):
                holder = task.claimed_by or ""
                task.attempts += 1
                task.claimed_by = None
                task.lease_deadline = None
                if task.attempts <= self.config.max_attempts:
                    task.status = TaskStatus.QUEUED
                    self._queue_for(task.namespace).task_ids.append(task.task_id)
                    self.event_log.append("requeue", now, task_id=task.task_id,
                                          namespace=task.namespace, attempts=task.attempts)
                else:
                    task.status = TaskStatus.EXPIRED
                    self._results[task.task_id] = ResultEntry(
                        task_id=task.task_id, outcome=Outcome.FAILED,
                        result_payload=EXPIRED_REASON, completed_at=now, worker_id=holder,
                    )
                    self.event_log.append("expire", now, task_id=task.task_id,
                                          worker_id=holder, attempts=task.attempts)
                report.expired_tasks.append(task.task_id)
            for worker in self._workers.values():
                if worker.status is WorkerStatus.ALIVE and not self._is_alive(worker, now):
                    worker.status = WorkerStatus.DEAD
                    self.event_log.append("worker_dead", now, worker_id=worker.worker_id)
                    report.dead_workers.append(worker.worker_id)
            return report

    def get_result(self, task_id: str) -> Pending | ResultEntry:
        with self._lock:
            task = self._tasks.get(task_id)
            if task is None:
                raise errors.UnknownTask(f"no such task {task_id!r}")
            entry = self._results.get(task_id)
            if entry is None:
                return PENDING
            return ResultEntry.from_dict(entry.to_dict())

    # -- introspection (read-only helpers for admin surfaces and tests) ---

    def task(self, task_id: str) -> TaskRecord:
        with self._lock:
            task = self._tasks.get(task_id)
            if task is None:
                raise errors.UnknownTask(f"no such task {task_id!r}")
            return self._copy_task(task)

    def stats(self) -> dict:
        with self._lock:
            by_status: dict[str, int] = {}
            for task in self._tasks.values():
                by_status[task.status.value] = by_status.get(task.status.value, 0) + 1
            return {
                "tasks": len(self._tasks),
                "by_status": by_status,
                "results": len(self._results),
                "workers": len(self._workers),
            }

    # -- internals ---------------------------------------------------------

    def _is_alive(self, worker: WorkerInfo, now: float) -> bool:
        return (now - worker.last_heartbeat) <= self.config.dead_after_s

    def _queue_for(self, namespace: str) -> _Queue:
        queue = self._queues.get(namespace)
        if queue is None:
            queue = _Queue()
            self._queues[namespace] = queue
        return queue

    def _insert_fifo(self, namespace: str, task: TaskRecord) -> None:
        # Arrival order is total (the lock serializes enqueues), so FIFO is a
        # plain append; requeues also append, landing at the tail.
        self._queue_for(namespace).task_ids.append(task.task_id)

    def _copy_task(self, task: TaskRecord) -> TaskRecord:
        return TaskRecord.from_dict(task.to_dict())

    def _copy_worker(self, worker: WorkerInfo) -> WorkerInfo:
        return WorkerInfo(
            worker_id=worker.worker_id, namespaces=set(worker.namespaces),
            jobs=set(worker.jobs), registered_at=worker.registered_at,
            last_heartbeat=worker.last_heartbeat, status=worker.status,
        )

    # -- event-log replay --------------------------------------------------

    def _apply(self, event: dict) -> None:
        kind = event["type"]
        ts = event["ts"]
        if kind == "register":
            self._workers[event["worker_id"]] = WorkerInfo(
                worker_id=event["worker_id"], namespaces=set(event["namespaces"]),
                jobs=set(event["jobs"]), registered_at=ts, last_heartbeat=ts,
                status=WorkerStatus.ALIVE,
            )
        elif kind == "heartbeat":
            worker = self._workers[event["worker_id"]]
            worker.last_heartbeat = ts
            worker.status = WorkerStatus.ALIVE
        elif kind == "worker_dead":
            self._workers[event["worker_id"]].status = WorkerStatus.DEAD
        elif kind == "enqueue":
            task = TaskRecord(
                task_id=event["task_id"], namespace=event["namespace"],
                job_name=event["job_name"], payload=base64.b64decode(event["payload_b64"]),
                dataset_id=event.get("dataset_id"), status=TaskStatus.QUEUED, enqueued_at=ts,
            )
            self._tasks[task.task_id] = task
            self._insert_fifo(task.namespace, task)
        elif kind == "claim":
            task = self._tasks[event["task_id"]]
            self._queue_for(task.namespace).task_ids.remove(task.task_id)
            task.status = TaskStatus.CLAIMED
            task.claimed_by = event["worker_id"]
            task.lease_deadline = event["lease_deadline"]
        elif kind == "complete":
            task = self._tasks[event["task_id"]]
            task.status = TaskStatus(event["outcome"])
            task.claimed_by = None
            task.lease_deadline = None
            self._results[task.task_id] = ResultEntry(
                task_id=task.task_id, outcome=Outcome(event["outcome"]),
                result_payload=base64.b64decode(event["result_b64"]),
                completed_at=ts, worker_id=event["worker_id"],
            )
        elif kind == "requeue":
            task = self._tasks[event["task_id"]]
            task.status = TaskStatus.QUEUED
            task.claimed_by = None
            task.lease_deadline = None
            task.attempts = event["attempts"]
            self._queue_for(task.namespace).task_ids.append(task.task_id)
        elif kind == "expire":
            task = self._tasks[event["task_id"]]
            task.status = TaskStatus.EXPIRED
            task.claimed_by = None
            task.lease_deadline = None
            task.attempts = event["attempts"]
            self._results[task.task_id] = ResultEntry(
                task_id=task.task_id, outcome=Outcome.FAILED, result_payload=EXPIRED_REASON,
                completed_at=ts, worker_id=event["worker_id"],
            )
        # unknown kinds are ignored so old logs stay readable across versions

    def close(self) -> None:
        self.event_log.close()
