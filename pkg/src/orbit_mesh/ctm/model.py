"""Study-design entities: prompts, task definitions, studies, cohorts, schedules, assignments.

Entities round-trip through plain dicts; a study document is one JSON object
(the import/export format), with task definitions embedded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from orbit_mesh.ctm.errors import ValidationFailed


class PromptKind(str, Enum):
    SINGLE_CHOICE = "SingleChoice"
    MULTI_CHOICE = "MultiChoice"
    SLIDING_SCALE = "SlidingScale"
    TEXT_ENTRY = "TextEntry"
    AUDIO_RECORD = "AudioRecord"
    VIDEO_RECORD = "VideoRecord"
    IMAGE_DISPLAY = "ImageDisplay"

CHOICE_KINDS = {PromptKind.SINGLE_CHOICE, PromptKind.MULTI_CHOICE}


class StudyStatus(str, Enum):
    DRAFT = "Draft"
    ACTIVE = "Active"
    CLOSED = "Closed"


class ScheduleMode(str, Enum):
    ONCE = "Once"
    DAILY = "Daily"
    WEEKLY = "Weekly"
    EVENT_DRIVEN = "EventDriven"


class AssignmentStatus(str, Enum):
    PENDING = "Pending"
    COMPLETED = "Completed"
    EXPIRED = "Expired"


@dataclass
class Prompt:
    prompt_id: str
    kind: PromptKind
    text: str
    options: list[str] = field(default_factory=list)
    scale: Optional[dict] = None            # {min, max, step}
    media_ref: Optional[dict] = None        # BlobRef dict for image/audio stimuli
    max_duration_s: Optional[int] = None

    def validate(self, path: str, problems: list[dict]) -> None:
        if not self.prompt_id:
            problems.append({"field": f"{path}.prompt_id", "reason": "must be non-empty"})
        if self.kind in CHOICE_KINDS and len(self.options) < 2:
            problems.append({"field": f"{path}.options",
                             "reason": "choice prompts need at least 2 options"})
        if self.kind is PromptKind.SLIDING_SCALE:
            s = self.scale or {}
            if not all(k in s for k in ("min", "max", "step")):
                problems.append({"field": f"{path}.scale", "reason": "needs min, max, step"})
            else:
                if not s["min"] < s["max"]:
                    problems.append({"field": f"{path}.scale", "reason": "min must be < max"})
                if not s["step"] > 0:
                    problems.append({"field": f"{path}.scale", "reason": "step must be > 0"})
        if self.kind is PromptKind.AUDIO_RECORD:
            if not self.max_duration_s or self.max_duration_s <= 0:
                problems.append({"field": f"{path}.max_duration_s",
                                 "reason": "recordings need max_duration_s > 0"})
        if self.kind is PromptKind.VIDEO_RECORD and self.max_duration_s is not None:
            if self.max_duration_s <= 0:
                problems.append({"field": f"{path}.max_duration_s", "reason": "must be > 0"})

    def to_dict(self) -> dict:
        d = {"prompt_id": self.prompt_id, "kind": self.kind.value, "text": self.text}
        if self.options:
            d["options"] = list(self.options)
        if self.scale is not None:
            d["scale"] = dict(self.scale)
        if self.media_ref is not None:
            d["media_ref"] = dict(self.media_ref)
        if self.max_duration_s is not None:
            d["max_duration_s"] = self.max_duration_s
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Prompt":
        return cls(
            prompt_id=d.get("prompt_id", ""), kind=PromptKind(d["kind"]),
            text=d.get("text", ""), options=list(d.get("options", [])),
            scale=d.get("scale"), media_ref=d.get("media_ref"),
            max_duration_s=d.get("max_duration_s"),
        )


@dataclass
class TaskDefinition:
    task_definition_id: str
    title: str
    prompts: list[Prompt]
    data_handlers: list[dict] = field(default_factory=list)  # [{namespace, job_name}]

    def validate(self, path: str, problems: list[dict]) -> None:
        if not self.task_definition_id:
            problems.append({"field": f"{path}.task_definition_id", "reason": "must be non-empty"})
        if not self.prompts:
            problems.append({"field": f"{path}.prompts", "reason": "needs at least 1 prompt"})
        seen = set()
        for i, prompt in enumerate(self.prompts):
            if prompt.prompt_id in seen:
                problems.append({"field": f"{path}.prompts[{i}].prompt_id",
                                 "reason": f"duplicate prompt_id {prompt.prompt_id!r}"})
            seen.add(prompt.prompt_id)
            prompt.validate(f"{path}.prompts[{i}]", problems)
        for i, handler in enumerate(self.data_handlers):
            if not handler.get("namespace") or not handler.get("job_name"):
                problems.append({"field": f"{path}.data_handlers[{i}]",
                                 "reason": "needs namespace and job_name"})

    def to_dict(self) -> dict:
        return {
            "task_definition_id": self.task_definition_id,
            "title": self.title,
            "prompts": [p.to_dict() for p in self.prompts],
            "data_handlers": [dict(h) for h in self.data_handlers],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TaskDefinition":
        return cls(
            task_definition_id=d.get("task_definition_id", ""), title=d.get("title", ""),
            prompts=[Prompt.from_dict(p) for p in d.get("prompts", [])],
            data_handlers=list(d.get("data_handlers", [])),
        )


@dataclass
class Schedule:
    mode: ScheduleMode
    at_time: Optional[str] = None     # "HH:MM", UTC (Daily, Weekly)
    weekday: Optional[int] = None     # 0=Monday .. 6=Sunday (Weekly)
    event_name: Optional[str] = None  # (EventDriven)

    def validate(self, path: str, problems: list[dict]) -> None:
        if self.mode in (ScheduleMode.DAILY, ScheduleMode.WEEKLY):
            if not _valid_at_time(self.at_time):
                problems.append({"field": f"{path}.at_time", "reason": "needs HH:MM"})
        if self.mode is ScheduleMode.WEEKLY:
            if self.weekday is None or not 0 <= self.weekday <= 6:
                problems.append({"field": f"{path}.weekday", "reason": "needs weekday 0..6"})
        if self.mode is ScheduleMode.EVENT_DRIVEN and not self.event_name:
            problems.append({"field": f"{path}.event_name", "reason": "needs event_name"})

    def to_dict(self) -> dict:
        d = {"mode": self.mode.value}
        if self.at_time is not None:
            d["at_time"] = self.at_time
        if self.weekday is not None:
            d["weekday"] = self.weekday
        if self.event_name is not None:
            d["event_name"] = self.event_name
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Schedule":
        return cls(mode=ScheduleMode(d["mode"]), at_time=d.get("at_time"),
                   weekday=d.get("weekday"), event_name=d.get("event_name"))


def _valid_at_time(at_time: Optional[str]) -> bool:
    if not at_time or ":" not in at_time:
        return False
    hh, _, mm = at_time.partition(":")
    try:
        return 0 <= int(hh) <= 23 and 0 <= int(mm) <= 59
    except ValueError:
        return False


@dataclass
class Study:
    study_id: str
    name: str
    description: str
    task_definitions: list[TaskDefinition]
    cohort_id: Optional[str]
    schedule: Schedule
    status: StudyStatus = StudyStatus.DRAFT
    activated_at: Optional[float] = None

    def validate_for_activation(self) -> None:
        problems: list[dict] = []
        if not self.cohort_id:
            problems.append({"field": "cohort_id", "reason": "active study needs a cohort"})
        if not self.task_definitions:
            problems.append({"field": "task_definitions",
                             "reason": "active study needs at least 1 task definition"})
        self.validate_structure(problems)
        if problems:
            raise ValidationFailed(problems)

    def validate_structure(self, problems: list[dict]) -> None:
        if not self.study_id:
            problems.append({"field": "study_id", "reason": "must be non-empty"})
        seen = set()
        for i, td in enumerate(self.task_definitions):
            if td.task_definition_id in seen:
                problems.append({"field": f"task_definitions[{i}]",
                                 "reason": f"duplicate id {td.task_definition_id!r}"})
            seen.add(td.task_definition_id)
            td.validate(f"task_definitions[{i}]", problems)
        self.schedule.validate("schedule", problems)

    def to_dict(self) -> dict:
        return {
            "study_id": self.study_id,
            "name": self.name,
            "description": self.description,
            "task_definitions": [t.to_dict() for t in self.task_definitions],
            "cohort_id": self.cohort_id,
            "schedule": self.schedule.to_dict(),
            "status": self.status.value,
            "activated_at": self.activated_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Study":
        return cls(
            study_id=d.get("study_id", ""), name=d.get("name", ""),
            description=d.get("description", ""),
            task_definitions=[TaskDefinition.from_dict(t) for t in d.get("task_definitions", [])],
            cohort_id=d.get("cohort_id"),
            schedule=Schedule.from_dict(d.get("schedule", {"mode": "Once"})),
            status=StudyStatus(d.get("status", "Draft")),
            activated_at=d.get("activated_at"),
        )


@dataclass
class Cohort:
    cohort_id: str
    name: str
    participant_ids: set[str]

    def validate(self) -> None:
        problems = []
        if not self.cohort_id:
            problems.append({"field": "cohort_id", "reason": "must be non-empty"})
        if problems:
            raise ValidationFailed(problems)

    def to_dict(self) -> dict:
        return {"cohort_id": self.cohort_id, "name": self.name,
                "participant_ids": sorted(self.participant_ids)}

    @classmethod
    def from_dict(cls, d: dict) -> "Cohort":
        return cls(cohort_id=d.get("cohort_id", ""), name=d.get("name", ""),
                   participant_ids=set(d.get("participant_ids", [])))


@dataclass
class Assignment:
    assignment_id: str
    study_id: str
    task_definition_id: str
    participant_id: str
    due_at: float
    status: AssignmentStatus = AssignmentStatus.PENDING
    completed_dataset_id: Optional[str] = None
    occurrence_key: str = ""

    def to_dict(self) -> dict:
        return {
            "assignment_id": self.assignment_id,
            "study_id": self.study_id,
            "task_definition_id": self.task_definition_id,
            "participant_id": self.participant_id,
            "due_at": self.due_at,
            "status": self.status.value,
            "completed_dataset_id": self.completed_dataset_id,
            "occurrence_key": self.occurrence_key,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Assignment":
        return cls(
            assignment_id=d["assignment_id"], study_id=d["study_id"],
            task_definition_id=d["task_definition_id"], participant_id=d["participant_id"],
            due_at=d["due_at"], status=AssignmentStatus(d.get("status", "Pending")),
            completed_dataset_id=d.get("completed_dataset_id"),
            occurrence_key=d.get("occurrence_key", ""),
        )
