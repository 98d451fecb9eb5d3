from __future__ import annotations

from fastapi.testclient import TestClient

from orbit_mesh.clock import ManualClock
from orbit_mesh.ctm.app import create_app
from orbit_mesh.ctm.service import ClinicalTaskManager

from helpers import ad_study_doc, cohort_doc


def make_client(clock=None, token=None) -> TestClient:
    ctm = ClinicalTaskManager(clock=clock or ManualClock(1_000.0))
    return TestClient(create_app(ctm, token=token))


def test_study_crud_and_activation_via_patch():
    c = make_client()
    assert c.post("/api/v1/cohorts", json=cohort_doc()).status_code == 201
    resp = c.post("/api/v1/studies", json=ad_study_doc())
    assert resp.status_code == 201
    assert resp.json()["status"] == "Draft"

    resp = c.patch("/api/v1/studies/study-ad", json={"status": "Active"})
    assert resp.status_code == 200
    assert resp.json()["status"] == "Active"

    listed = c.get("/api/v1/studies").json()["studies"]
    assert [s["study_id"] for s in listed] == ["study-ad"]
    exported = c.get("/api/v1/studies/study-ad").json()
    assert exported["task_definitions"] == ad_study_doc()["task_definitions"]

    assignments = c.get("/api/v1/studies/study-ad/assignments").json()["assignments"]
    assert len(assignments) == 5


def test_validation_failure_carries_fields():
    c = make_client()
    doc = ad_study_doc(cohort_id=None)
    doc["task_definitions"][0]["prompts"][0]["options"] = []
    resp = c.post("/api/v1/studies", json=doc)
    assert resp.status_code == 400
    body = resp.json()
    assert body["error"] == "ValidationFailed"
    assert any("options" in f["field"] for f in body["fields"])


def test_due_assignments_with_now_param_and_completion():
    c = make_client()
    c.post("/api/v1/cohorts", json=cohort_doc())
    c.post("/api/v1/studies", json=ad_study_doc())
    c.patch("/api/v1/studies/study-ad", json={"status": "Active"})

    resp = c.get("/api/v1/participants/p1/assignments", params={"now": 2_000.0})
    assert resp.status_code == 200
    bundles = resp.json()["assignments"]
    assert len(bundles) == 1
    assert bundles[0]["task_definition"]["task_definition_id"] == "td-ad"
    aid = bundles[0]["assignment"]["assignment_id"]

    resp = c.post(f"/api/v1/assignments/{aid}/complete", json={"dataset_id": "ds-1"})
    assert resp.status_code == 200
    assert resp.json()["status"] == "Completed"
    assert c.post(f"/api/v1/assignments/{aid}/complete",
                  json={"dataset_id": "ds-2"}).status_code == 409
    assert c.post("/api/v1/assignments/ghost/complete",
                  json={"dataset_id": "x"}).status_code == 404
    assert c.get("/api/v1/participants/nobody/assignments").status_code == 404


def test_events_and_progress_endpoints():
    c = make_client()
    c.post("/api/v1/cohorts", json=cohort_doc())
    doc = ad_study_doc(schedule={"mode": "EventDriven", "event_name": "fall_detected"})
    c.post("/api/v1/studies", json=doc)
    c.patch("/api/v1/studies/study-ad", json={"status": "Active"})

    resp = c.post("/api/v1/events", json={"event_name": "fall_detected",
                                          "cohort_id": "cohort-1"})
    assert resp.json() == {"created": 5}
    resp = c.post("/api/v1/events", json={"event_name": "nothing", "cohort_id": "cohort-1"})
    assert resp.json() == {"created": 0}

    progress = c.get("/api/v1/studies/study-ad/progress").json()
    assert progress["totals"]["pending"] == 5
    assert c.get("/api/v1/studies/ghost/progress").status_code == 404


def test_bearer_token_enforced():
    c = make_client(token="hush")
    assert c.get("/api/v1/studies").status_code == 401
    assert c.get("/api/v1/studies",
                 headers={"Authorization": "Bearer hush"}).status_code == 200
