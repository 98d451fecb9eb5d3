"""Jobs manifest: maps job names to handler entry points.

JSON format:
    {"jobs": [{"job_name": "ad_assess",
               "entry_point": "orbit_mesh.ad_pipeline.jobs:make_ad_assess",
               "options": {"scoring_config": "configs/ad_classification.json"}}]}

An entry with "options" names a factory called as factory(**options) to build
the handler; without "options" the entry point is the handler itself.
"""

from __future__ import annotations

import importlib
import json
from pathlib import Path

from orbit_mesh.worker.sdk import JobHandler


def _resolve(entry_point: str):
    module_name, _, attr = entry_point.partition(":")
    if not attr:
        raise ValueError(f"entry point {entry_point!r} must look like module:attr")
    module = importlib.import_module(module_name)
    return getattr(module, attr)


def load_manifest(path: str | Path) -> list[JobHandler]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    handlers = []
    for entry in doc.get("jobs", []):
        target = _resolve(entry["entry_point"])
        if "options" in entry:
            fn = target(**entry["options"])
        else:
            fn = target
        handlers.append(JobHandler(job_name=entry["job_name"], handler=fn))
    return handlers
