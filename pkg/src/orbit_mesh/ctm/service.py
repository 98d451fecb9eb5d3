"""The Clinical Task Manager: studies, cohorts, schedules, assignments, and progress aggregation.

State is one logically serialized machine (a lock around every operation) with
an atomic JSON snapshot per mutation for restart durability. Assignment
generation is keyed by (study, task definition, participant, occurrence), so
replaying activation or clock ticks never duplicates work.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
import uuid
from pathlib import Path
from typing import Optional

from orbit_mesh.clock import Clock, SystemClock
from orbit_mesh.ctm import schedule as sched
from orbit_mesh.ctm.errors import (
    AlreadyCompleted,
    UnknownAssignment,
    UnknownCohort,
    UnknownParticipant,
    UnknownStudy,
    ValidationFailed,
)
from orbit_mesh.ctm.model import (
    Assignment,
    AssignmentStatus,
    Cohort,
    ScheduleMode,
    Study,
    StudyStatus,
    TaskDefinition,
)

DEFAULT_ASSIGNMENT_EXPIRY_S = 7 * 86_400.0


def _assignment_id(study_id: str, task_definition_id: str, participant_id: str,
                   occurrence_key: str) -> str:
    key = f"{study_id}|{task_definition_id}|{participant_id}|{occurrence_key}"
    return "asg-" + hashlib.sha1(key.encode("utf-8")).hexdigest()[:16]


class ClinicalTaskManager:
    def __init__(self, clock: Clock | None = None, snapshot_path: str | Path | None = None,
                 storage=None, assignment_expiry_s: float = DEFAULT_ASSIGNMENT_EXPIRY_S):
        self.clock = clock or SystemClock()
        self.snapshot_path = Path(snapshot_path) if snapshot_path else None
        self.storage = storage  # MetadataStore, used by study_progress
        self.assignment_expiry_s = assignment_expiry_s
        self._lock = threading.RLock()
        self._studies: dict[str, Study] = {}
        self._cohorts: dict[str, Cohort] = {}
        self._assignments: dict[str, Assignment] = {}
        self._load()

    # -- studies and cohorts ------------------------------------------------

    def create_study(self, doc: dict) -> Study:
        study = Study.from_dict(doc)
        study.status = StudyStatus.DRAFT
        study.activated_at = None
        with self._lock:
            problems: list[dict] = []
            if study.study_id in self._studies:
                problems.append({"field": "study_id", "reason": "already exists"})
            study.validate_structure(problems)
            self._check_cohort_ref(study, problems)
            if problems:
                raise ValidationFailed(problems)
            self._studies[study.study_id] = study
            self._save()
            return study

    def update_study(self, study_id: str, patch: dict) -> Study:
        with self._lock:
            study = self._study(study_id)
            doc = study.to_dict()
            requested_status = patch.get("status")
            doc.update({k: v for k, v in patch.items() if k != "status"})
            doc["study_id"] = study_id
            updated = Study.from_dict(doc)
            updated.status = study.status
            updated.activated_at = study.activated_at
            problems: list[dict] = []
            updated.validate_structure(problems)
            self._check_cohort_ref(updated, problems)
            if problems:
                raise ValidationFailed(problems)
            self._studies[study_id] = updated
            if requested_status is not None and requested_status != study.status.value:
                self._transition(updated, StudyStatus(requested_status))
            self._save()
            return self._studies[study_id]

    def _transition(self, study: Study, target: StudyStatus) -> None:
        if target is StudyStatus.ACTIVE:
            self.activate_study(study.study_id)
        elif target is StudyStatus.CLOSED:
            study.status = StudyStatus.CLOSED
        else:
            raise ValidationFailed([{"field": "status",
                                     "reason": f"cannot transition to {target.value}"}])

    def activate_study(self, study_id: str, now: Optional[float] = None) -> Study:
        with self._lock:
            study = self._study(study_id)
            if study.status is StudyStatus.CLOSED:
                raise ValidationFailed([{"field": "status", "reason": "study is closed"}])
            study.validate_for_activation()
            if study.cohort_id not in self._cohorts:
                raise ValidationFailed([{"field": "cohort_id",
                                         "reason": f"unknown cohort {study.cohort_id!r}"}])
            now = self.clock.now() if now is None else now
            if study.status is not StudyStatus.ACTIVE:
                study.status = StudyStatus.ACTIVE
                study.activated_at = now
            self._materialize_first_round(study)
            self._save()
            return study

    def create_cohort(self, doc: dict) -> Cohort:
        cohort = Cohort.from_dict(doc)
        cohort.validate()
        with self._lock:
            if cohort.cohort_id in self._cohorts:
                raise ValidationFailed([{"field": "cohort_id", "reason": "already exists"}])
            self._cohorts[cohort.cohort_id] = cohort
            self._save()
            return cohort

    def update_cohort(self, cohort_id: str, patch: dict) -> Cohort:
        with self._lock:
            cohort = self._cohort(cohort_id)
            doc = cohort.to_dict()
            doc.update(patch)
            doc["cohort_id"] = cohort_id
            updated = Cohort.from_dict(doc)
            updated.validate()
            self._cohorts[cohort_id] = updated
            self._save()
            return updated

    def get_study(self, study_id: str) -> Study:
        with self._lock:
            return self._study(study_id)

    def get_cohort(self, cohort_id: str) -> Cohort:
        with self._lock:
            return self._cohort(cohort_id)

    def list_studies(self) -> list[Study]:
        with self._lock:
            return sorted(self._studies.values(), key=lambda s: s.study_id)

    def list_cohorts(self) -> list[Cohort]:
        with self._lock:
            return sorted(self._cohorts.values(), key=lambda c: c.cohort_id)

    # -- assignments ---------------------------------------------------------

    def tick(self, now: Optional[float] = None) -> int:
        """Materialize due schedule occurrences and expire stale assignments; idempotent."""
        with self._lock:
            now = self.clock.now() if now is None else now
            created = 0
            for study in self._studies.values():
                if study.status is not StudyStatus.ACTIVE:
                    continue
                if study.schedule.mode in (ScheduleMode.DAILY, ScheduleMode.WEEKLY):
                    for due in sched.occurrences_until(study.schedule, study.activated_at, now):
                        created += self._materialize_occurrence(study, due)
            expired = False
            for assignment in self._assignments.values():
                if (assignment.status is AssignmentStatus.PENDING
                        and now > assignment.due_at + self.assignment_expiry_s):
                    assignment.status = AssignmentStatus.EXPIRED
                    expired = True
            if created or expired:
                self._save()
            return created

    def due_assignments(self, participant_id: str, now: Optional[float] = None) -> list[dict]:
        """Pending assignments due by now, each bundled with its full task definition."""
        with self._lock:
            now = self.clock.now() if now is None else now
            if not any(participant_id in c.participant_ids for c in self._cohorts.values()):
                raise UnknownParticipant(f"no cohort contains {participant_id!r}")
            self.tick(now)
            due = [
                a for a in self._assignments.values()
                if a.participant_id == participant_id
                and a.status is AssignmentStatus.PENDING and a.due_at <= now
            ]
            due.sort(key=lambda a: (a.due_at, a.assignment_id))
            out = []
            for a in due:
                study = self._studies[a.study_id]
                td = self._task_definition(study, a.task_definition_id)
                out.append({"assignment": a.to_dict(), "task_definition": td.to_dict()})
            return out

    def record_completion(self, assignment_id: str, dataset_id: str) -> Assignment:
        with self._lock:
            assignment = self._assignments.get(assignment_id)
            if assignment is None:
                raise UnknownAssignment(f"no assignment {assignment_id!r}")
            if assignment.status is not AssignmentStatus.PENDING:
                raise AlreadyCompleted(
                    f"assignment {assignment_id} is {assignment.status.value}")
            assignment.status = AssignmentStatus.COMPLETED
            assignment.completed_dataset_id = dataset_id
            study = self._studies.get(assignment.study_id)
            if study is not None and study.status is StudyStatus.ACTIVE:
                nxt = sched.next_occurrence(study.schedule, assignment.due_at)
                if nxt is not None:
                    self._materialize_occurrence(study, nxt,
                                                 participants={assignment.participant_id})
            self._save()
            return assignment

    def fire_event(self, event_name: str, cohort_id: str) -> int:
        """One assignment per participant per listening task definition, due immediately."""
        with self._lock:
            now = self.clock.now()
            fire_key = f"event:{uuid.uuid4().hex}"
            created = 0
            for study in self._studies.values():
                if (study.status is not StudyStatus.ACTIVE
                        or study.schedule.mode is not ScheduleMode.EVENT_DRIVEN
                        or study.schedule.event_name != event_name
                        or study.cohort_id != cohort_id):
                    continue
                cohort = self._cohorts.get(study.cohort_id)
                if cohort is None:
                    continue
                for td in study.task_definitions:
                    for pid in sorted(cohort.participant_ids):
                        created += self._create_assignment(study, td, pid, now, fire_key)
            if created:
                self._save()
            return created

    def study_progress(self, study_id: str) -> dict:
        with self._lock:
            study = self._study(study_id)
            cohort = self._cohorts.get(study.cohort_id) if study.cohort_id else None
            participants = sorted(cohort.participant_ids) if cohort else []
            rows = []
            for pid in participants:
                mine = [a for a in self._assignments.values()
                        if a.study_id == study_id and a.participant_id == pid]
                completed = [a for a in mine if a.status is AssignmentStatus.COMPLETED]
                row = {
                    "participant_id": pid,
                    "completed": len(completed),
                    "pending": sum(a.status is AssignmentStatus.PENDING for a in mine),
                    "expired": sum(a.status is AssignmentStatus.EXPIRED for a in mine),
                    "latest": None,
                }
                if completed:
                    latest = max(completed, key=lambda a: (a.due_at, a.assignment_id))
                    row["latest"] = {
                        "assignment_id": latest.assignment_id,
                        "task_definition_id": latest.task_definition_id,
                        "dataset_id": latest.completed_dataset_id,
                        "results": self._result_summaries(latest.completed_dataset_id),
                    }
                rows.append(row)
            return {
                "study_id": study_id,
                "status": study.status.value,
                "participants": rows,
                "totals": {
                    "completed": sum(r["completed"] for r in rows),
                    "pending": sum(r["pending"] for r in rows),
                    "expired": sum(r["expired"] for r in rows),
                },
            }

    def _result_summaries(self, dataset_id: Optional[str]) -> list[dict]:
        if self.storage is None or not dataset_id:
            return []
        try:
            bundle = self.storage.query_by_dataset(dataset_id)
        except Exception:
            return []
        return [
            {"task_id": r.task_id, "namespace": r.namespace, "job_name": r.job_name,
             "result": r.result, "completed_at": r.completed_at}
            for r in bundle["results"]
        ]

    # -- internals -------------------------------------------------------------

    def _materialize_first_round(self, study: Study) -> None:
        if study.schedule.mode is ScheduleMode.EVENT_DRIVEN:
            return
        due = sched.first_due(study.schedule, study.activated_at)
        self._materialize_occurrence(study, due)

    def _materialize_occurrence(self, study: Study, due_at: float,
                                participants: Optional[set[str]] = None) -> int:
        cohort = self._cohorts.get(study.cohort_id)
        if cohort is None:
            return 0
        pids = participants if participants is not None else cohort.participant_ids
        occurrence_key = f"t:{due_at:.3f}"
        created = 0
        for td in study.task_definitions:
            for pid in sorted(pids):
                created += self._create_assignment(study, td, pid, due_at, occurrence_key)
        return created

    def _create_assignment(self, study: Study, td: TaskDefinition, participant_id: str,
                           due_at: float, occurrence_key: str) -> int:
        aid = _assignment_id(study.study_id, td.task_definition_id, participant_id,
                             occurrence_key)
        if aid in self._assignments:
            return 0
        self._assignments[aid] = Assignment(
            assignment_id=aid, study_id=study.study_id,
            task_definition_id=td.task_definition_id, participant_id=participant_id,
            due_at=due_at, status=AssignmentStatus.PENDING, occurrence_key=occurrence_key,
        )
        return 1

    def _study(self, study_id: str) -> Study:
        study = self._studies.get(study_id)
        if study is None:
            raise UnknownStudy(f"no study {study_id!r}")
        return study

    def _cohort(self, cohort_id: str) -> Cohort:
        cohort = self._cohorts.get(cohort_id)
        if cohort is None:
            raise UnknownCohort(f"no cohort {cohort_id!r}")
        return cohort

    def _check_cohort_ref(self, study: Study, problems: list[dict]) -> None:
        if study.cohort_id and study.cohort_id not in self._cohorts:
            problems.append({"field": "cohort_id",
                             "reason": f"unknown cohort {study.cohort_id!r}"})

    @staticmethod
    def _task_definition(study: Study, task_definition_id: str) -> TaskDefinition:
        for td in study.task_definitions:
            if td.task_definition_id == task_definition_id:
                return td
        raise UnknownStudy(f"study {study.study_id} has no task definition "
                           f"{task_definition_id!r}")

    def assignments_for_study(self, study_id: str) -> list[Assignment]:
        with self._lock:
            return sorted((a for a in self._assignments.values() if a.study_id == study_id),
                          key=lambda a: (a.due_at, a.assignment_id))

    # -- persistence -------------------------------------------------------------

    def _save(self) -> None:
        if self.snapshot_path is None:
            return
        snapshot = {
            "studies": [s.to_dict() for s in self._studies.values()],
            "cohorts": [c.to_dict() for c in self._cohorts.values()],
            "assignments": [a.to_dict() for a in self._assignments.values()],
        }
        self.snapshot_path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=str(self.snapshot_path.parent), prefix=".ctm-")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(snapshot, fh)
        os.replace(tmp, self.snapshot_path)

    def _load(self) -> None:
        if self.snapshot_path is None or not self.snapshot_path.exists():
            return
        snapshot = json.loads(self.snapshot_path.read_text(encoding="utf-8"))
        for doc in snapshot.get("cohorts", []):
            cohort = Cohort.from_dict(doc)
            self._cohorts[cohort.cohort_id] = cohort
        for doc in snapshot.get("studies", []):
            study = Study.from_dict(doc)
            self._studies[study.study_id] = study
        for doc in snapshot.get("assignments", []):
            assignment = Assignment.from_dict(doc)
            self._assignments[assignment.assignment_id] = assignment
