"""Participant scripts: what each simulated participant answers per task definition."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_POLL_INTERVAL_S = 10.0  # mirror of the mobile app's result polling cadence


@dataclass
class ParticipantScript:
    participant_id: str
    responses: dict[str, dict] = field(default_factory=dict)
    # task_definition_id -> {"answers": [{prompt_id, value}], "attachment_files": [paths]}
    poll_interval_s: float = DEFAULT_POLL_INTERVAL_S
    response_delay_s: float = 0.0

    def __post_init__(self):
        if self.poll_interval_s <= 0:
            raise ValueError("poll_interval_s must be > 0")

    @classmethod
    def from_dict(cls, d: dict, base_dir: Path | None = None) -> "ParticipantScript":
        responses = {}
        for td_id, resp in d.get("responses", {}).items():
            files = list(resp.get("attachment_files", []))
            if base_dir is not None:
                files = [str((base_dir / f)) if not Path(f).is_absolute() else f
                         for f in files]
            responses[td_id] = {"answers": list(resp.get("answers", [])),
                                "attachment_files": files}
        kwargs = {}
        if "poll_interval_s" in d:
            kwargs["poll_interval_s"] = float(d["poll_interval_s"])
        if "response_delay_s" in d:
            kwargs["response_delay_s"] = float(d["response_delay_s"])
        return cls(participant_id=d["participant_id"], responses=responses, **kwargs)


def load_scripts(directory: str | Path) -> list[ParticipantScript]:
    """One JSON file per participant; attachment paths resolve against the script dir."""
    base = Path(directory)
    scripts = []
    for path in sorted(base.glob("*.json")):
        doc = json.loads(path.read_text(encoding="utf-8"))
        scripts.append(ParticipantScript.from_dict(doc, base_dir=base))
    return scripts
