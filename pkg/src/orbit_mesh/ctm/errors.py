from __future__ import annotations


class CtmError(Exception):
    pass


class ValidationFailed(CtmError):
    """Carries field-level reasons: a list of {field, reason} dicts."""

    def __init__(self, fields: list[dict]):
        self.fields = fields
        super().__init__("; ".join(f"{f['field']}: {f['reason']}" for f in fields))


class UnknownStudy(CtmError):
    pass


class UnknownCohort(CtmError):
    pass


class UnknownParticipant(CtmError):
    pass


class UnknownAssignment(CtmError):
    pass


class AlreadyCompleted(CtmError):
    """Completion attempted on an assignment that is no longer Pending."""
