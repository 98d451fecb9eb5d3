from orbit_mesh.ctm.errors import (
    AlreadyCompleted,
    CtmError,
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
    Prompt,
    PromptKind,
    Schedule,
    ScheduleMode,
    Study,
    StudyStatus,
    TaskDefinition,
)
from orbit_mesh.ctm.service import ClinicalTaskManager

__all__ = [
    "AlreadyCompleted",
    "Assignment",
    "AssignmentStatus",
    "ClinicalTaskManager",
    "Cohort",
    "CtmError",
    "Prompt",
    "PromptKind",
    "Schedule",
    "ScheduleMode",
    "Study",
    "StudyStatus",
    "TaskDefinition",
    "UnknownAssignment",
    "UnknownCohort",
    "UnknownParticipant",
    "UnknownStudy",
    "ValidationFailed",
]
