"""HTTP surface of the Clinical Task Manager."""

from __future__ import annotations

from typing import Optional

from fastapi import Body, FastAPI, Request
from fastapi.responses import JSONResponse

from orbit_mesh.ctm import errors
from orbit_mesh.ctm.service import ClinicalTaskManager
from orbit_mesh.httpcommon import require_token

_STATUS_BY_ERROR = {
    errors.ValidationFailed: 400,
    errors.UnknownStudy: 404,
    errors.UnknownCohort: 404,
    errors.UnknownParticipant: 404,
    errors.UnknownAssignment: 404,
    errors.AlreadyCompleted: 409,
}


def create_app(ctm: ClinicalTaskManager, token: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="orbit-ctm")

    @app.exception_handler(errors.CtmError)
    async def ctm_error(request: Request, exc: errors.CtmError):
        status = _STATUS_BY_ERROR.get(type(exc), 500)
        body = {"error": type(exc).__name__, "detail": str(exc)}
        if isinstance(exc, errors.ValidationFailed):
            body["fields"] = exc.fields
        return JSONResponse(status_code=status, content=body)

    @app.middleware("http")
    async def auth(request: Request, call_next):
        if request.url.path != "/healthz":
            try:
                require_token(request, token)
            except Exception:
                return JSONResponse(status_code=401, content={"error": "Unauthorized"})
        return await call_next(request)

    @app.get("/healthz")
    def healthz():
        return {"ok": True}

    @app.post("/api/v1/studies", status_code=201)
    def create_study(body: dict = Body(...)):
        return ctm.create_study(body).to_dict()

    @app.get("/api/v1/studies")
    def list_studies():
        return {"studies": [s.to_dict() for s in ctm.list_studies()]}

    @app.get("/api/v1/studies/{study_id}")
    def get_study(study_id: str):
        return ctm.get_study(study_id).to_dict()

    @app.patch("/api/v1/studies/{study_id}")
    def update_study(study_id: str, body: dict = Body(...)):
        return ctm.update_study(study_id, body).to_dict()

    @app.get("/api/v1/studies/{study_id}/progress")
    def study_progress(study_id: str):
        return ctm.study_progress(study_id)

    @app.get("/api/v1/studies/{study_id}/assignments")
    def study_assignments(study_id: str):
        ctm.get_study(study_id)
        return {"assignments": [a.to_dict() for a in ctm.assignments_for_study(study_id)]}

    @app.post("/api/v1/cohorts", status_code=201)
    def create_cohort(body: dict = Body(...)):
        return ctm.create_cohort(body).to_dict()

    @app.get("/api/v1/cohorts")
    def list_cohorts():
        return {"cohorts": [c.to_dict() for c in ctm.list_cohorts()]}

    @app.get("/api/v1/cohorts/{cohort_id}")
    def get_cohort(cohort_id: str):
        return ctm.get_cohort(cohort_id).to_dict()

    @app.patch("/api/v1/cohorts/{cohort_id}")
    def update_cohort(cohort_id: str, body: dict = Body(...)):
        return ctm.update_cohort(cohort_id, body).to_dict()

    @app.get("/api/v1/participants/{participant_id}/assignments")
    def due_assignments(participant_id: str, now: Optional[float] = None):
        return {"assignments": ctm.due_assignments(participant_id, now=now)}

    @app.post("/api/v1/assignments/{assignment_id}/complete")
    def record_completion(assignment_id: str, body: dict = Body(...)):
        assignment = ctm.record_completion(assignment_id, body.get("dataset_id", ""))
        return assignment.to_dict()

    @app.post("/api/v1/events")
    def fire_event(body: dict = Body(...)):
        created = ctm.fire_event(body.get("event_name", ""), body.get("cohort_id", ""))
        return {"created": created}

    return app
