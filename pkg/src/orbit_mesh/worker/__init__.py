from orbit_mesh.worker.sdk import (
    DuplicateJobName,
    HandlerContext,
    JobHandler,
    Worker,
    WorkerConfig,
)

__all__ = ["DuplicateJobName", "HandlerContext", "JobHandler", "Worker", "WorkerConfig"]
