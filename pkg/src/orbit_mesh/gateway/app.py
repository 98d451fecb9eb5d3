"""The public HTTP edge: job submission, result polling, multipart data ingress."""

from __future__ import annotations

import json
from typing import Optional

from fastapi import Body, FastAPI, Request, Response
from fastapi.responses import JSONResponse

from orbit_mesh.dispatcher.errors import UnknownTask
from orbit_mesh.gateway import errors
from orbit_mesh.gateway.service import GatewayService, UploadPackage
from orbit_mesh.httpcommon import require_token

_STATUS_BY_ERROR = {
    errors.BadRequest: 400,
    errors.MalformedPackage: 400,
    errors.UnknownStudy: 404,
    errors.UnknownTaskDefinition: 404,
    errors.UpstreamUnavailable: 503,
}


def create_app(service: GatewayService, token: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="orbit-gateway")

    @app.exception_handler(errors.GatewayError)
    async def gateway_error(request: Request, exc: errors.GatewayError):
        status = _STATUS_BY_ERROR.get(type(exc), 500)
        return JSONResponse(status_code=status,
                            content={"error": type(exc).__name__, "detail": str(exc)})

    @app.exception_handler(UnknownTask)
    async def unknown_task(request: Request, exc: UnknownTask):
        return JSONResponse(status_code=404,
                            content={"error": "UnknownTask", "detail": str(exc)})

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

    @app.post("/api/v1/jobs", status_code=201)
    def submit_job(body: dict = Body(...)):
        return {"task_id": service.submit_job(body)}

    @app.get("/api/v1/results/{task_id}")
    def poll_result(task_id: str):
        entry = service.poll_result(task_id)
        if entry is None:
            return Response(status_code=202)
        # the body is byte-for-byte what the worker posted
        return Response(
            content=entry.result_payload,
            media_type="application/json",
            headers={
                "X-Orbit-Outcome": entry.outcome.value,
                "X-Orbit-Completed-At": str(entry.completed_at),
            },
        )

    @app.post("/api/v1/ingress", status_code=201)
    async def ingress(request: Request):
        form = await request.form()
        raw_package = form.get("package")
        if raw_package is None:
            raise errors.MalformedPackage("multipart body needs a 'package' JSON part")
        if hasattr(raw_package, "read"):
            raw_package = (await raw_package.read()).decode("utf-8")
        try:
            package_doc = json.loads(raw_package)
        except json.JSONDecodeError as exc:
            raise errors.MalformedPackage(f"package part is not JSON: {exc}")
        package = UploadPackage.from_dict(package_doc)

        attachments = []
        for name, value in form.multi_items():
            if name == "package" or not hasattr(value, "read"):
                continue
            content = await value.read()
            attachments.append((
                value.filename or name,
                value.content_type or "application/octet-stream",
                content,
            ))
        return service.ingress(package, attachments)

    return app
