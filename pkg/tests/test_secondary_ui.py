"""Secondary acceptance: the dashboard round-trips the study through the real CTM.

Runs the built UI core (frontend/dist) in node against a live CTM process and
checks three things: the stored study is byte-equivalent (canonical JSON) to
the API-built fixture, activation produced the five assignments, and the UI
issued no request outside the documented endpoint list.
"""

from __future__ import annotations

import json
import shutil
import subprocess
from pathlib import Path

import pytest

from orbit_mesh.ctm.client import CtmClient

from helpers import ad_study_doc
from service_harness import Platform

FRONTEND = Path(__file__).parent.parent / "frontend"

DOCUMENTED_PREFIXES = (
    ("POST", "/api/v1/studies"),
    ("GET", "/api/v1/studies"),
    ("PATCH", "/api/v1/studies/"),
    ("POST", "/api/v1/cohorts"),
    ("GET", "/api/v1/cohorts"),
    ("GET", "/api/v1/participants/"),
    ("POST", "/api/v1/assignments/"),
    ("POST", "/api/v1/events"),
    ("POST", "/api/v1/jobs"),
    ("GET", "/api/v1/results/"),
    ("POST", "/api/v1/ingress"),
    ("GET", "/api/v1/discovery/"),
)


def canonical(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


@pytest.mark.skipif(shutil.which("node") is None, reason="node not available")
def test_ui_round_trip_against_live_ctm(tmp_path):
    if not (FRONTEND / "dist" / "api.js").exists():
        pytest.skip("frontend not built; run `npm run build` in frontend/")
    with Platform(tmp_path / "platform") as platform:
        proc = subprocess.run(
            ["node", str(FRONTEND / "test" / "e2e_roundtrip.mjs"),
             platform.ctm_url, platform.dispatcher_url],
            capture_output=True, text=True, timeout=60)
        assert proc.returncode == 0, proc.stderr
        payload = json.loads(proc.stdout)

        # byte-equivalence with the API-built fixture (canonical JSON)
        assert payload["canonical"] == canonical(ad_study_doc(schedule={"mode": "Once"}))

        # proxy-log check: every request the UI made is a documented endpoint
        assert payload["requestLog"], "UI made no requests?"
        for entry in payload["requestLog"]:
            assert any(entry["method"] == method and entry["path"].startswith(prefix)
                       for method, prefix in DOCUMENTED_PREFIXES), entry

        # activation materialized the cohort's assignments
        ctm = CtmClient(platform.ctm_url)
        study = ctm.get_study("study-ad")
        assert study["status"] == "Active"
        assert len(ctm.due_assignments("p1")) == 1
        ctm.close()
