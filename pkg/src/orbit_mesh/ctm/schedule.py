"""Occurrence arithmetic for study schedules (UTC)."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone
from typing import Optional

from orbit_mesh.ctm.model import Schedule, ScheduleMode

DAY_S = 86_400.0
WEEK_S = 7 * DAY_S


def _parse_at_time(at_time: str) -> tuple[int, int]:
    hh, _, mm = at_time.partition(":")
    return int(hh), int(mm)


def first_due(schedule: Schedule, activated_at: float) -> Optional[float]:
    """First scheduled instant at or after activation; None for EventDriven."""
    if schedule.mode is ScheduleMode.ONCE:
        return activated_at
    if schedule.mode is ScheduleMode.EVENT_DRIVEN:
        return None
    hh, mm = _parse_at_time(schedule.at_time)
    base = datetime.fromtimestamp(activated_at, tz=timezone.utc)
    candidate = base.replace(hour=hh, minute=mm, second=0, microsecond=0)
    if schedule.mode is ScheduleMode.DAILY:
        if candidate.timestamp() < activated_at:
            candidate += timedelta(days=1)
        return candidate.timestamp()
    # Weekly: roll forward to the requested weekday
    days_ahead = (schedule.weekday - candidate.weekday()) % 7
    candidate += timedelta(days=days_ahead)
    if candidate.timestamp() < activated_at:
        candidate += timedelta(days=7)
    return candidate.timestamp()


def period_s(schedule: Schedule) -> Optional[float]:
    if schedule.mode is ScheduleMode.DAILY:
        return DAY_S
    if schedule.mode is ScheduleMode.WEEKLY:
        return WEEK_S
    return None


def occurrences_until(schedule: Schedule, activated_at: float, until: float) -> list[float]:
    """Every scheduled instant in [activation, until]; Once yields one, EventDriven none."""
    start = first_due(schedule, activated_at)
    if start is None:
        return []
    if schedule.mode is ScheduleMode.ONCE:
        return [start] if start <= until else []
    step = period_s(schedule)
    out = []
    t = start
    while t <= until:
        out.append(t)
        t += step
    return out


def next_occurrence(schedule: Schedule, after: float) -> Optional[float]:
    """First scheduled instant strictly after the given one (recurring modes only)."""
    step = period_s(schedule)
    if step is None:
        return None
    return after + step
