"""Append-only JSONL event log: the dispatcher's durability story and the oracle input for consistency checks."""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Iterator, Optional


class EventLog:
    """One JSON object per line, flushed per append. Replay order is the linearization order.

    Flushing reaches the OS page cache, which survives process restart; set
    fsync=True to also survive host power loss at a heavy throughput cost.
    """

    def __init__(self, path: str | Path, fsync: bool = False):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fsync = fsync
        self._fh = None
        self._seq = 0

    def replay(self) -> Iterator[dict]:
        """Yield previously appended events; call before the first append."""
        if not self.path.exists():
            return
        with self.path.open("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                event = json.loads(line)
                self._seq = max(self._seq, int(event.get("seq", 0)))
                yield event

    def append(self, event_type: str, ts: float, **fields) -> dict:
        if self._fh is None:
            self._fh = self.path.open("a", encoding="utf-8")
        self._seq += 1
        event = {"seq": self._seq, "ts": ts, "type": event_type, **fields}
        self._fh.write(json.dumps(event, separators=(",", ":")) + "\n")
        self._fh.flush()
        if self._fsync:
            os.fsync(self._fh.fileno())
        return event

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None


def read_events(path: str | Path) -> list[dict]:
    """Read a finished event log (e.g. from a test or the checker CLI)."""
    events = []
    p = Path(path)
    if not p.exists():
        return events
    with p.open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                events.append(json.loads(line))
    return events


class NullEventLog:
    """In-memory stand-in; keeps events for checkers without touching disk."""

    def __init__(self):
        self.events: list[dict] = []
        self._seq = 0

    def replay(self) -> Iterator[dict]:
        return iter(())

    def append(self, event_type: str, ts: float, **fields) -> dict:
        self._seq += 1
        event = {"seq": self._seq, "ts": ts, "type": event_type, **fields}
        self.events.append(event)
        return event

    def close(self) -> None:
        pass
