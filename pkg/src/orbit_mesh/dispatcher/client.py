"""HTTP client for the dispatcher wire protocol, used by the gateway, worker SDK, and tests.

Accepts any httpx.Client-compatible object (starlette's TestClient included) so
tests can run against an in-process app without sockets.
"""

from __future__ import annotations

import base64
from typing import Optional

import httpx

from orbit_mesh.dispatcher import errors
from orbit_mesh.dispatcher.model import PENDING, Pending, ResultEntry, TaskRecord


class DispatcherClient:
    def __init__(self, base_url: str = "", token: Optional[str] = None,
                 client: Optional[httpx.Client] = None, timeout: float = 30.0):
        if client is None:
            client = httpx.Client(base_url=base_url, timeout=timeout)
        self._client = client
        self._headers = {"Authorization": f"Bearer {token}"} if token else {}

    def close(self) -> None:
        self._client.close()

    def _raise_for(self, resp: httpx.Response) -> None:
        if resp.status_code < 400:
            return
        try:
            payload = resp.json()
        except Exception:
            payload = {}
        name = payload.get("error", "")
        detail = payload.get("detail", resp.text)
        cls = getattr(errors, name, None)
        if isinstance(cls, type) and issubclass(cls, errors.DispatcherError):
            raise cls(detail)
        raise errors.DispatcherError(f"HTTP {resp.status_code}: {detail}")

    def register_worker(self, worker_id: str, namespaces: set[str], jobs: set[str]) -> dict:
        resp = self._client.post("/api/v1/workers/register", headers=self._headers, json={
            "worker_id": worker_id, "namespaces": sorted(namespaces), "jobs": sorted(jobs),
        })
        self._raise_for(resp)
        return resp.json()

    def heartbeat(self, worker_id: str) -> None:
        resp = self._client.post(f"/api/v1/workers/{worker_id}/heartbeat", headers=self._headers)
        self._raise_for(resp)

    def discover(self, namespace: str) -> list[dict]:
        resp = self._client.get(f"/api/v1/discovery/{namespace}", headers=self._headers)
        self._raise_for(resp)
        return resp.json()["workers"]

    def enqueue(self, namespace: str, job_name: str, payload: bytes,
                dataset_id: Optional[str] = None) -> str:
        body = {
            "namespace": namespace, "job_name": job_name,
            "payload_b64": base64.b64encode(payload).decode("ascii"),
        }
        if dataset_id is not None:
            body["dataset_id"] = dataset_id
        resp = self._client.post("/api/v1/tasks", headers=self._headers, json=body)
        self._raise_for(resp)
        return resp.json()["task_id"]

    def claim(self, worker_id: str, namespaces: set[str]) -> Optional[TaskRecord]:
        resp = self._client.post("/api/v1/tasks/claim", headers=self._headers, json={
            "worker_id": worker_id, "namespaces": sorted(namespaces),
        })
        if resp.status_code == 204:
            return None
        self._raise_for(resp)
        return TaskRecord.from_dict(resp.json()["task"])

    def complete(self, worker_id: str, task_id: str, outcome: str, result_payload: bytes) -> None:
        resp = self._client.post(f"/api/v1/tasks/{task_id}/result", headers=self._headers, json={
            "worker_id": worker_id, "outcome": outcome,
            "result_b64": base64.b64encode(result_payload).decode("ascii"),
        })
        self._raise_for(resp)

    def get_result(self, task_id: str) -> Pending | ResultEntry:
        resp = self._client.get(f"/api/v1/results/{task_id}", headers=self._headers)
        if resp.status_code == 202:
            return PENDING
        self._raise_for(resp)
        d = resp.json()
        return ResultEntry.from_dict({
            "task_id": task_id, "outcome": d["outcome"], "result_b64": d["result_b64"],
            "completed_at": d["completed_at"], "worker_id": d.get("worker_id", ""),
        })

    def stats(self) -> dict:
        resp = self._client.get("/api/v1/stats", headers=self._headers)
        self._raise_for(resp)
        return resp.json()
