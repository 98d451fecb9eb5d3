"""Cohort runner: one activity per simulated participant, talking real wire protocols only.

Each participant loops: fetch due assignments from the CTM, build an upload
package (started/completed stamped around the scripted response delay), POST it
through the gateway ingress, then poll every returned task id until terminal.
Per-participant failures are recorded in the report and never abort the cohort.
"""

from __future__ import annotations

import json
import mimetypes
import threading
import time
from pathlib import Path
from typing import Optional

import httpx

from orbit_mesh.ctm.client import CtmClient
from orbit_mesh.edgesim.report import ParticipantOutcome, SimulationReport
from orbit_mesh.edgesim.scripts import ParticipantScript


def _media_type(path: str) -> str:
    guessed, _ = mimetypes.guess_type(path)
    return guessed or "application/octet-stream"


class _ParticipantSession:
    def __init__(self, script: ParticipantScript, ctm: CtmClient,
                 gateway: httpx.Client, headers: dict, outcome: ParticipantOutcome,
                 poll_interval_s: float, deadline: float, idle_rounds_to_exit: int):
        self.script = script
        self.ctm = ctm
        self.gateway = gateway
        self.headers = headers
        self.outcome = outcome
        self.poll_interval_s = poll_interval_s
        self.deadline = deadline
        self.idle_rounds_to_exit = idle_rounds_to_exit
        self.seen: set[str] = set()

    def run(self) -> None:
        idle_rounds = 0
        while time.time() < self.deadline:
            try:
                due = self.ctm.due_assignments(self.script.participant_id)
            except Exception as exc:
                self.outcome.errors.append(f"due_assignments: {exc}")
                time.sleep(min(1.0, self.poll_interval_s))
                continue
            fresh = [b for b in due if b["assignment"]["assignment_id"] not in self.seen]
            if not fresh:
                idle_rounds += 1
                if self.idle_rounds_to_exit and idle_rounds >= self.idle_rounds_to_exit:
                    return
                time.sleep(min(1.0, self.poll_interval_s))
                continue
            idle_rounds = 0
            for bundle in fresh:
                assignment = bundle["assignment"]
                self.seen.add(assignment["assignment_id"])
                self.outcome.assignments_seen += 1
                try:
                    self._respond(assignment)
                except Exception as exc:
                    self.outcome.errors.append(
                        f"assignment {assignment['assignment_id']}: {exc}")

    def _respond(self, assignment: dict) -> None:
        response = self.script.responses.get(assignment["task_definition_id"])
        if response is None:
            self.outcome.skipped += 1  # assignment left Pending
            return
        started_at = time.time()
        if self.script.response_delay_s:
            time.sleep(self.script.response_delay_s)
        completed_at = time.time()
        package = {
            "participant_id": self.script.participant_id,
            "study_id": assignment["study_id"],
            "task_definition_id": assignment["task_definition_id"],
            "assignment_id": assignment["assignment_id"],
            "started_at": started_at,
            "completed_at": completed_at,
            "answers": response.get("answers", []),
        }
        files = [("package", (None, json.dumps(package), "application/json"))]
        for file_path in response.get("attachment_files", []):
            p = Path(file_path)
            files.append(("attachment", (p.name, p.read_bytes(), _media_type(p.name))))
        resp = self.gateway.post("/api/v1/ingress", files=files, headers=self.headers)
        if resp.status_code != 201:
            raise RuntimeError(f"ingress failed: HTTP {resp.status_code} {resp.text}")
        receipt = resp.json()
        self.outcome.uploads += 1
        uploaded_at = time.time()
        for task_id in receipt.get("task_ids", []):
            self._poll(task_id, uploaded_at)

    def _poll(self, task_id: str, uploaded_at: float) -> None:
        while time.time() < self.deadline:
            resp = self.gateway.get(f"/api/v1/results/{task_id}", headers=self.headers)
            if resp.status_code == 200:
                self.outcome.results_received += 1
                self.outcome.latencies_s.append(time.time() - uploaded_at)
                try:
                    body = resp.json()
                except ValueError:
                    body = {"raw": resp.text}
                self.outcome.results.append({"task_id": task_id, "body": body})
                return
            if resp.status_code not in (202,):
                raise RuntimeError(f"poll failed: HTTP {resp.status_code} {resp.text}")
            time.sleep(self.poll_interval_s)
        self.outcome.errors.append(f"task {task_id}: no result before the run deadline")


def run_cohort(scripts: list[ParticipantScript], ctm_url: str = "", gateway_url: str = "",
               duration_s: float = 300.0, token: Optional[str] = None,
               poll_interval_override: Optional[float] = None,
               idle_rounds_to_exit: int = 0,
               ctm_client: Optional[httpx.Client] = None,
               gateway_client: Optional[httpx.Client] = None) -> SimulationReport:
    headers = {"Authorization": f"Bearer {token}"} if token else {}
    gateway = gateway_client or httpx.Client(base_url=gateway_url, timeout=30.0)
    ctm = CtmClient(base_url=ctm_url, token=token, client=ctm_client) if ctm_client \
        else CtmClient(base_url=ctm_url, token=token)
    report = SimulationReport()
    deadline = time.time() + duration_s
    threads = []
    for script in scripts:
        outcome = report.row(script.participant_id)
        session = _ParticipantSession(
            script=script, ctm=ctm, gateway=gateway, headers=headers, outcome=outcome,
            poll_interval_s=poll_interval_override or script.poll_interval_s,
            deadline=deadline, idle_rounds_to_exit=idle_rounds_to_exit,
        )
        threads.append(threading.Thread(target=session.run,
                                        name=f"sim-{script.participant_id}"))
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    return report
