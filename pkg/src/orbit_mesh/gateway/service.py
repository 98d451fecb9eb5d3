"""Gateway logic: job submission with retry, result pass-through, and the data-ingress fan-out.

Ingress ordering is fixed: blobs first, then the raw-data row, then job
submission, then the CTM completion mark. A job is never submitted before its
RawDataRecord exists, so a worker can always resolve the dataset id.
"""

from __future__ import annotations

import json
import time
import uuid
from dataclasses import dataclass, field
from typing import Optional

import httpx

from orbit_mesh.clock import Clock, SystemClock
from orbit_mesh.ctm.client import CtmClient
from orbit_mesh.ctm.errors import CtmError, UnknownStudy as CtmUnknownStudy
from orbit_mesh.dispatcher import errors as dispatcher_errors
from orbit_mesh.dispatcher.client import DispatcherClient
from orbit_mesh.dispatcher.model import PENDING, ResultEntry
from orbit_mesh.gateway.errors import (
    BadRequest,
    MalformedPackage,
    UnknownStudy,
    UnknownTaskDefinition,
    UpstreamUnavailable,
)
from orbit_mesh.storage.blobs import BlobStore
from orbit_mesh.storage.tables import MetadataStore, RawDataRecord

MAX_INLINE_PAYLOAD = 1024 * 1024  # 1 MiB
RAW_BUCKET = "raw-data"


@dataclass
class GatewayConfig:
    dispatcher_url: str = "http://127.0.0.1:7070"
    ctm_url: str = "http://127.0.0.1:7072"
    data_root: str = "./orbit-data"
    host: str = "127.0.0.1"
    port: int = 7071
    token: Optional[str] = None
    max_inline_payload: int = MAX_INLINE_PAYLOAD
    submit_tries: int = 3
    backoff_base_s: float = 0.1


@dataclass
class UploadPackage:
    participant_id: str
    study_id: str
    task_definition_id: str
    started_at: float
    completed_at: float
    answers: list = field(default_factory=list)       # [{prompt_id, value}]
    assignment_id: Optional[str] = None

    @classmethod
    def from_dict(cls, d: dict) -> "UploadPackage":
        try:
            return cls(
                participant_id=d["participant_id"], study_id=d["study_id"],
                task_definition_id=d["task_definition_id"],
                started_at=float(d["started_at"]), completed_at=float(d["completed_at"]),
                answers=list(d.get("answers", [])), assignment_id=d.get("assignment_id"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedPackage(f"bad upload package: {exc}")

    def validate(self, attachment_names: list[str]) -> None:
        if self.completed_at < self.started_at:
            raise MalformedPackage("completed_at must be >= started_at")
        if len(set(attachment_names)) != len(attachment_names):
            raise MalformedPackage("attachment names must be unique within the package")


class GatewayService:
    def __init__(self, dispatcher: DispatcherClient, ctm: CtmClient,
                 store: MetadataStore, blobs: BlobStore,
                 config: GatewayConfig | None = None, clock: Clock | None = None,
                 sleep=time.sleep):
        self.dispatcher = dispatcher
        self.ctm = ctm
        self.store = store
        self.blobs = blobs
        self.config = config or GatewayConfig()
        self.clock = clock or SystemClock()
        self._sleep = sleep

    # -- job submission -----------------------------------------------------

    def submit_job(self, req: dict) -> str:
        namespace = req.get("namespace", "")
        job_name = req.get("job_name", "")
        if not namespace or not job_name:
            raise BadRequest("namespace and job_name must be non-empty")
        payload = json.dumps(req.get("payload", {})).encode("utf-8")
        if len(payload) > self.config.max_inline_payload:
            raise BadRequest(
                f"inline payload {len(payload)} bytes exceeds "
                f"{self.config.max_inline_payload}; store a blob and pass its url")
        return self._enqueue_with_retry(namespace, job_name, payload, req.get("dataset_id"))

    def _enqueue_with_retry(self, namespace: str, job_name: str, payload: bytes,
                            dataset_id: Optional[str]) -> str:
        last_error: Exception | None = None
        for attempt in range(self.config.submit_tries):
            if attempt:
                self._sleep(self.config.backoff_base_s * (2 ** (attempt - 1)))
            try:
                return self.dispatcher.enqueue(namespace, job_name, payload, dataset_id)
            except dispatcher_errors.InvalidJobRequest as exc:
                raise BadRequest(str(exc))
            except (httpx.TransportError, dispatcher_errors.DispatcherError) as exc:
                last_error = exc
        raise UpstreamUnavailable(f"dispatcher unreachable after "
                                  f"{self.config.submit_tries} tries: {last_error}")

    # -- result polling -------------------------------------------------------

    def poll_result(self, task_id: str) -> Optional[ResultEntry]:
        """None while pending; the entry once terminal. UnknownTask propagates."""
        entry = self.dispatcher.get_result(task_id)
        if entry is PENDING:
            return None
        return entry

    # -- ingress -----------------------------------------------------------------

    def ingress(self, package: UploadPackage,
                attachments: list[tuple[str, str, bytes]]) -> dict:
        """attachments: (name, media_type, content) triplets from the multipart body."""
        package.validate([name for name, _, _ in attachments])
        task_definition = self._fetch_task_definition(package)

        dataset_id = str(uuid.uuid4())
        blob_refs = []
        for name, media_type, content in attachments:
            key = f"{package.study_id}/{dataset_id}/{name}"
            blob_refs.append(self.blobs.put_blob(RAW_BUCKET, key, media_type, content))

        self.store.insert_raw(RawDataRecord(
            dataset_id=dataset_id, study_id=package.study_id,
            task_definition_id=package.task_definition_id,
            participant_id=package.participant_id,
            task_description=task_definition,
            started_at=package.started_at, completed_at=package.completed_at,
            answers=package.answers, blob_refs=blob_refs,
            ingested_at=self.clock.now(),
        ))

        warnings: list[str] = []
        task_ids: list[str] = []
        job_payload = {
            "dataset_id": dataset_id,
            "answers": package.answers,
            "blob_urls": [ref.url for ref in blob_refs],
        }
        payload_bytes = json.dumps(job_payload).encode("utf-8")
        for handler in task_definition.get("data_handlers", []):
            try:
                task_ids.append(self._enqueue_with_retry(
                    handler["namespace"], handler["job_name"], payload_bytes, dataset_id))
            except UpstreamUnavailable as exc:
                warnings.append(f"job submission failed for "
                                f"{handler['namespace']}/{handler['job_name']}: {exc}")

        if package.assignment_id:
            try:
                self.ctm.record_completion(package.assignment_id, dataset_id)
            except CtmError as exc:
                warnings.append(f"completion not recorded in CTM: {exc}")

        receipt = {"dataset_id": dataset_id, "task_ids": task_ids}
        if warnings:
            receipt["warning"] = "; ".join(warnings)
        return receipt

    def _fetch_task_definition(self, package: UploadPackage) -> dict:
        try:
            study = self.ctm.get_study(package.study_id)
        except CtmUnknownStudy as exc:
            raise UnknownStudy(str(exc))
        except httpx.TransportError as exc:
            raise UpstreamUnavailable(f"CTM unreachable: {exc}")
        for td in study.get("task_definitions", []):
            if td.get("task_definition_id") == package.task_definition_id:
                return td
        raise UnknownTaskDefinition(
            f"study {package.study_id} has no task definition "
            f"{package.task_definition_id!r}")
