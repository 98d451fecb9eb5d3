"""Worker SDK: job handler registration and the claim-execute-report loop.

Two concurrent activities per worker: a heartbeat thread and the main
claim/execute loop. Handlers run one at a time, guarded by a local deadline at
lease_deadline minus a safety margin; a handler that overruns is abandoned and
its task is left for the reaper to requeue, so a stale complete is never
posted. Handler results are persisted to the results table (when the task
carries a dataset id) before the dispatcher is told the task succeeded.
"""

from __future__ import annotations

import json
import logging
import threading
import traceback
from dataclasses import dataclass, field
from typing import Callable, Optional

import httpx

from orbit_mesh.clock import Clock, SystemClock
from orbit_mesh.dispatcher import errors as dispatcher_errors
from orbit_mesh.dispatcher.client import DispatcherClient
from orbit_mesh.dispatcher.model import TaskRecord
from orbit_mesh.storage.errors import DuplicateKey
from orbit_mesh.storage.tables import ResultRecord


class DuplicateJobName(Exception):
    pass


def canonical_json(obj) -> bytes:
    """Deterministic result encoding: retries must produce byte-identical payloads."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


@dataclass
class WorkerConfig:
    worker_id: str
    namespaces: set[str]
    dispatcher_url: str = "http://127.0.0.1:7070"
    gateway_token: Optional[str] = None
    poll_idle_backoff_s: float = 1.0
    poll_idle_backoff_cap_s: float = 10.0
    deadline_safety_margin_s: float = 2.0
    storage_root: Optional[str] = None

    def __post_init__(self):
        if not self.namespaces:
            raise ValueError("namespaces must be non-empty")


@dataclass
class HandlerContext:
    dataset_id: Optional[str]
    get_blob: Callable[[str], tuple[bytes, str]]
    query_by_dataset: Callable[[str], dict]
    logger: logging.Logger


@dataclass
class JobHandler:
    job_name: str
    handler: Callable[[dict, HandlerContext], dict]


def _no_storage(*_args):
    raise RuntimeError("worker has no storage_root configured")


class Worker:
    def __init__(self, config: WorkerConfig, dispatcher: DispatcherClient | None = None,
                 clock: Clock | None = None, storage=None, blobs=None):
        self.config = config
        self.clock = clock or SystemClock()
        self.dispatcher = dispatcher or DispatcherClient(
            config.dispatcher_url, token=config.gateway_token)
        self.log = logging.getLogger(f"orbit.worker.{config.worker_id}")
        self._handlers: dict[str, JobHandler] = {}
        self._stop = threading.Event()
        self._heartbeat_interval = 10.0
        self._lease_ttl = 60.0
        self.stats = {"succeeded": 0, "failed": 0, "lease_overruns": 0,
                      "stale_completes": 0, "claims": 0}
        if storage is None and blobs is None and config.storage_root:
            from orbit_mesh.storage.paths import open_storage

            storage, blobs = open_storage(config.storage_root)
        self._store = storage
        self._blobs = blobs

    # -- registration -----------------------------------------------------

    def register_job(self, handler: JobHandler | None = None, *, job_name: str = "",
                     fn: Callable | None = None) -> None:
        if handler is None:
            handler = JobHandler(job_name=job_name, handler=fn)
        if handler.job_name in self._handlers:
            raise DuplicateJobName(f"job {handler.job_name!r} already registered")
        self._handlers[handler.job_name] = handler

    @property
    def job_names(self) -> set[str]:
        return set(self._handlers)

    # -- the loop --------------------------------------------------------------

    def run(self, stop: threading.Event | None = None) -> None:
        """Register, heartbeat, and claim/execute until the stop event is set."""
        if stop is not None:
            self._stop = stop
        self._register_with_retry()
        heartbeat = threading.Thread(target=self._heartbeat_loop, daemon=True,
                                     name=f"{self.config.worker_id}-heartbeat")
        heartbeat.start()
        backoff = self.config.poll_idle_backoff_s
        try:
            while not self._stop.is_set():
                task = self._claim_once()
                if task is None:
                    self._stop.wait(backoff)
                    backoff = min(backoff * 2, self.config.poll_idle_backoff_cap_s)
                    continue
                backoff = self.config.poll_idle_backoff_s
                self.stats["claims"] += 1
                self._execute(task)
        finally:
            self._stop.set()
            heartbeat.join(timeout=2 * self._heartbeat_interval)

    def _register_with_retry(self) -> None:
        while not self._stop.is_set():
            try:
                ack = self.dispatcher.register_worker(
                    self.config.worker_id, self.config.namespaces, self.job_names)
                self._lease_ttl = ack["lease_ttl_s"]
                self._heartbeat_interval = ack["heartbeat_interval_s"]
                return
            except dispatcher_errors.DuplicateAliveWorker:
                raise
            except (httpx.TransportError, dispatcher_errors.DispatcherError) as exc:
                self.log.warning("registration failed, retrying: %s", exc)
                self._stop.wait(1.0)

    def _heartbeat_loop(self) -> None:
        while not self._stop.wait(self._heartbeat_interval):
            try:
                self.dispatcher.heartbeat(self.config.worker_id)
            except dispatcher_errors.UnknownWorker:
                try:
                    self._register_with_retry()
                except dispatcher_errors.DuplicateAliveWorker:
                    return
            except (httpx.TransportError, dispatcher_errors.DispatcherError) as exc:
                self.log.warning("heartbeat failed: %s", exc)

    def _claim_once(self) -> Optional[TaskRecord]:
        try:
            return self.dispatcher.claim(self.config.worker_id, self.config.namespaces)
        except dispatcher_errors.UnknownWorker:
            self._register_with_retry()
            return None
        except (httpx.TransportError, dispatcher_errors.DispatcherError) as exc:
            self.log.warning("claim failed: %s", exc)
            self._stop.wait(self.config.poll_idle_backoff_s)
            return None

    # -- execution ----------------------------------------------------------------

    def _execute(self, task: TaskRecord) -> None:
        handler = self._handlers.get(task.job_name)
        if handler is None:
            self._complete(task, "Failed",
                           {"error": f"no handler for job {task.job_name!r}"})
            return

        try:
            payload = json.loads(task.payload) if task.payload else {}
        except json.JSONDecodeError as exc:
            self._complete(task, "Failed", {"error": f"payload is not JSON: {exc}"})
            return

        ctx = HandlerContext(
            dataset_id=task.dataset_id,
            get_blob=self._blobs.get_blob if self._blobs else _no_storage,
            query_by_dataset=self._store.query_by_dataset if self._store else _no_storage,
            logger=self.log,
        )

        outcome: dict = {}

        def invoke():
            try:
                outcome["result"] = handler.handler(payload, ctx)
            except Exception as exc:  # reported as a Failed result, never kills the loop
                frames = traceback.format_exception(type(exc), exc, exc.__traceback__)
                outcome["error"] = {"error": str(exc) or type(exc).__name__,
                                    "traceback_summary": "".join(frames[-3:]).strip()}

        thread = threading.Thread(target=invoke, daemon=True,
                                  name=f"{self.config.worker_id}-handler")
        thread.start()
        budget = None
        if task.lease_deadline is not None:
            budget = max(0.0, (task.lease_deadline - self.config.deadline_safety_margin_s)
                         - self.clock.now())
        thread.join(timeout=budget)
        if thread.is_alive():
            # lease overrun: abandon the handler, post nothing; the reaper requeues
            self.stats["lease_overruns"] += 1
            self.log.error("task %s overran its lease; abandoned (reported locally as "
                           "Failed: lease overrun)", task.task_id)
            return

        if "error" in outcome:
            self._complete(task, "Failed", outcome["error"])
            return

        result = outcome.get("result")
        if task.dataset_id and self._store is not None:
            try:
                self._store.insert_result(ResultRecord(
                    task_id=task.task_id, dataset_id=task.dataset_id,
                    namespace=task.namespace, job_name=task.job_name,
                    result=result, completed_at=self.clock.now(),
                ))
            except DuplicateKey:
                pass  # deterministic retry of an already-persisted result
        self._complete(task, "Succeeded", result)

    def _complete(self, task: TaskRecord, outcome: str, result) -> None:
        try:
            self.dispatcher.complete(self.config.worker_id, task.task_id, outcome,
                                     canonical_json(result))
            self.stats["succeeded" if outcome == "Succeeded" else "failed"] += 1
        except dispatcher_errors.StaleLease:
            self.stats["stale_completes"] += 1
            self.log.warning("stale complete for task %s discarded", task.task_id)
        except (httpx.TransportError, dispatcher_errors.DispatcherError) as exc:
            self.log.error("could not post result for %s: %s", task.task_id, exc)
