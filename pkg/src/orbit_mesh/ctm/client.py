"""HTTP client for the CTM API (gateway and edge simulator both use it)."""

from __future__ import annotations

from typing import Optional

import httpx

from orbit_mesh.ctm import errors


class CtmClient:
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
        if name == "ValidationFailed":
            raise errors.ValidationFailed(payload.get("fields", [{"field": "?", "reason": detail}]))
        cls = getattr(errors, name, None)
        if isinstance(cls, type) and issubclass(cls, errors.CtmError):
            raise cls(detail)
        raise errors.CtmError(f"HTTP {resp.status_code}: {detail}")

    def create_study(self, doc: dict) -> dict:
        resp = self._client.post("/api/v1/studies", headers=self._headers, json=doc)
        self._raise_for(resp)
        return resp.json()

    def get_study(self, study_id: str) -> dict:
        resp = self._client.get(f"/api/v1/studies/{study_id}", headers=self._headers)
        self._raise_for(resp)
        return resp.json()

    def update_study(self, study_id: str, patch: dict) -> dict:
        resp = self._client.patch(f"/api/v1/studies/{study_id}", headers=self._headers, json=patch)
        self._raise_for(resp)
        return resp.json()

    def activate_study(self, study_id: str) -> dict:
        return self.update_study(study_id, {"status": "Active"})

    def create_cohort(self, doc: dict) -> dict:
        resp = self._client.post("/api/v1/cohorts", headers=self._headers, json=doc)
        self._raise_for(resp)
        return resp.json()

    def due_assignments(self, participant_id: str, now: Optional[float] = None) -> list[dict]:
        params = {} if now is None else {"now": now}
        resp = self._client.get(f"/api/v1/participants/{participant_id}/assignments",
                                headers=self._headers, params=params)
        self._raise_for(resp)
        return resp.json()["assignments"]

    def record_completion(self, assignment_id: str, dataset_id: str) -> dict:
        resp = self._client.post(f"/api/v1/assignments/{assignment_id}/complete",
                                 headers=self._headers, json={"dataset_id": dataset_id})
        self._raise_for(resp)
        return resp.json()

    def fire_event(self, event_name: str, cohort_id: str) -> int:
        resp = self._client.post("/api/v1/events", headers=self._headers,
                                 json={"event_name": event_name, "cohort_id": cohort_id})
        self._raise_for(resp)
        return resp.json()["created"]

    def study_progress(self, study_id: str) -> dict:
        resp = self._client.get(f"/api/v1/studies/{study_id}/progress", headers=self._headers)
        self._raise_for(resp)
        return resp.json()
