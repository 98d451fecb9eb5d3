"""Injectable clocks: every time-dependent component reads one of these, never time.time() directly."""

from __future__ import annotations

import time
from typing import Protocol


class Clock(Protocol):
    def now(self) -> float:
        """Current time as unix seconds (UTC)."""
        ...


class SystemClock:
    """Wall clock used by the real services."""

    def now(self) -> float:
        return time.time()


class ManualClock:
    """Test clock advanced explicitly; never moves on its own."""

    def __init__(self, start: float = 0.0):
        self._now = start

    def now(self) -> float:
        return self._now

    def advance(self, seconds: float) -> float:
        if seconds < 0:
            raise ValueError("clock cannot move backwards")
        self._now += seconds
        return self._now

    def set(self, t: float) -> float:
        if t < self._now:
            raise ValueError("clock cannot move backwards")
        self._now = t
        return self._now
