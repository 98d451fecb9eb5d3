"""HTTP wire protocol over the dispatcher core."""

from __future__ import annotations

import base64
import threading
from contextlib import asynccontextmanager
from typing import Optional

from fastapi import Body, FastAPI, Request, Response

from orbit_mesh.dispatcher import errors
from orbit_mesh.dispatcher.core import Dispatcher
from orbit_mesh.dispatcher.model import PENDING
from orbit_mesh.httpcommon import require_token

_STATUS_BY_ERROR = {
    errors.InvalidRegistration: 400,
    errors.InvalidJobRequest: 400,
    errors.UnknownWorker: 404,
    errors.UnknownTask: 404,
    errors.NamespaceNotRegistered: 403,
    errors.DuplicateAliveWorker: 409,
    errors.StaleLease: 409,
}


class _Reaper(threading.Thread):
    def __init__(self, dispatcher: Dispatcher, interval_s: float):
        super().__init__(daemon=True, name="dispatcher-reaper")
        self.dispatcher = dispatcher
        self.interval_s = interval_s
        self._stop = threading.Event()

    def run(self) -> None:
        while not self._stop.wait(self.interval_s):
            self.dispatcher.reap()

    def stop(self) -> None:
        self._stop.set()


def create_app(dispatcher: Dispatcher, token: Optional[str] = None, run_reaper: bool = True) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        reaper = None
        if run_reaper:
            reaper = _Reaper(dispatcher, dispatcher.config.reap_interval_s)
            reaper.start()
        yield
        if reaper is not None:
            reaper.stop()
        dispatcher.close()

    app = FastAPI(title="orbit-dispatcher", lifespan=lifespan)

    @app.exception_handler(errors.DispatcherError)
    async def dispatcher_error(request: Request, exc: errors.DispatcherError):
        from fastapi.responses import JSONResponse

        status = _STATUS_BY_ERROR.get(type(exc), 500)
        return JSONResponse(status_code=status,
                            content={"error": type(exc).__name__, "detail": str(exc)})

    @app.middleware("http")
    async def auth(request: Request, call_next):
        if request.url.path != "/healthz":
            from fastapi.responses import JSONResponse

            try:
                require_token(request, token)
            except Exception:
                return JSONResponse(status_code=401, content={"error": "Unauthorized"})
        return await call_next(request)

    @app.get("/healthz")
    def healthz():
        return {"ok": True}

    @app.post("/api/v1/workers/register")
    def register(body: dict = Body(...)):
        ack = dispatcher.register_worker(
            worker_id=body.get("worker_id", ""),
            namespaces=set(body.get("namespaces", [])),
            jobs=set(body.get("jobs", [])),
        )
        return {"lease_ttl_s": ack.lease_ttl_s, "heartbeat_interval_s": ack.heartbeat_interval_s}

    @app.post("/api/v1/workers/{worker_id}/heartbeat")
    def heartbeat(worker_id: str):
        dispatcher.heartbeat(worker_id)
        return {"ok": True}

    @app.get("/api/v1/discovery/{namespace}")
    def discover(namespace: str):
        workers = dispatcher.discover(namespace)
        return {"workers": [
            {"worker_id": w.worker_id, "jobs": sorted(w.jobs), "last_heartbeat": w.last_heartbeat}
            for w in workers
        ]}

    @app.post("/api/v1/tasks", status_code=201)
    def enqueue(body: dict = Body(...)):
        payload = base64.b64decode(body.get("payload_b64", "") or "")
        task_id = dispatcher.enqueue(
            namespace=body.get("namespace", ""),
            job_name=body.get("job_name", ""),
            payload=payload,
            dataset_id=body.get("dataset_id"),
        )
        return {"task_id": task_id}

    @app.post("/api/v1/tasks/claim")
    def claim(body: dict = Body(...)):
        task = dispatcher.claim(
            worker_id=body.get("worker_id", ""),
            namespaces=set(body.get("namespaces", [])),
        )
        if task is None:
            return Response(status_code=204)
        return {"task": task.to_dict()}

    @app.post("/api/v1/tasks/{task_id}/result")
    def post_result(task_id: str, body: dict = Body(...)):
        dispatcher.complete(
            worker_id=body.get("worker_id", ""),
            task_id=task_id,
            outcome=body.get("outcome", ""),
            result_payload=base64.b64decode(body.get("result_b64", "") or ""),
        )
        return {"ok": True}

    @app.get("/api/v1/results/{task_id}")
    def get_result(task_id: str):
        entry = dispatcher.get_result(task_id)
        if entry is PENDING or isinstance(entry, type(PENDING)):
            return Response(status_code=202)
        return {
            "outcome": entry.outcome.value,
            "result_b64": base64.b64encode(entry.result_payload).decode("ascii"),
            "completed_at": entry.completed_at,
            "worker_id": entry.worker_id,
        }

    @app.get("/api/v1/stats")
    def stats():
        return dispatcher.stats()

    return app
