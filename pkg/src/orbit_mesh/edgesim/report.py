"""Simulation report: per-participant tallies, latency quantiles, and the text rendering.

The rendering mirrors the mobile result screen in text form: the confidence
score plus the speech-richness feature against the healthy/condition reference
bands embedded in each score report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


def quantile(samples: list[float], q: float) -> float:
    """Linear-interpolation quantile over raw samples (q in [0, 1])."""
    if not samples:
        raise ValueError("no samples")
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must be in [0, 1]")
    ordered = sorted(samples)
    pos = q * (len(ordered) - 1)
    lo = int(pos)
    hi = min(lo + 1, len(ordered) - 1)
    frac = pos - lo
    return ordered[lo] * (1.0 - frac) + ordered[hi] * frac


@dataclass
class ParticipantOutcome:
    participant_id: str
    assignments_seen: int = 0
    uploads: int = 0
    results_received: int = 0
    skipped: int = 0
    errors: list[str] = field(default_factory=list)
    latencies_s: list[float] = field(default_factory=list)
    results: list[dict] = field(default_factory=list)  # {task_id, job_name?, body}

    def to_dict(self) -> dict:
        return {
            "participant_id": self.participant_id,
            "assignments_seen": self.assignments_seen,
            "uploads": self.uploads,
            "results_received": self.results_received,
            "skipped": self.skipped,
            "errors": list(self.errors),
            "latencies_s": list(self.latencies_s),
            "results": list(self.results),
        }


@dataclass
class SimulationReport:
    participants: list[ParticipantOutcome] = field(default_factory=list)

    def row(self, participant_id: str) -> ParticipantOutcome:
        for row in self.participants:
            if row.participant_id == participant_id:
                return row
        row = ParticipantOutcome(participant_id=participant_id)
        self.participants.append(row)
        return row

    @property
    def all_latencies(self) -> list[float]:
        out: list[float] = []
        for row in sorted(self.participants, key=lambda r: r.participant_id):
            out.extend(row.latencies_s)
        return out

    def to_dict(self) -> dict:
        latencies = self.all_latencies
        summary = {"count": len(latencies)}
        if latencies:
            summary["p50_s"] = quantile(latencies, 0.5)
            summary["p95_s"] = quantile(latencies, 0.95)
        return {
            "participants": [r.to_dict() for r in
                             sorted(self.participants, key=lambda r: r.participant_id)],
            "latency": summary,
        }


def _score_lines(row: ParticipantOutcome) -> list[str]:
    lines = []
    for item in row.results:
        body = item.get("body")
        if not isinstance(body, dict) or "confidence_score" not in body:
            continue
        features = body.get("features", {})
        reference = body.get("feature_reference", {}).get("speech_richness", {})
        richness = features.get("speech_richness", 0.0)
        band = ""
        if reference:
            band = (f"  healthy {reference['healthy_mean']:.2f}±{reference['healthy_sd']:.2f}"
                    f" | ad {reference['ad_mean']:.2f}±{reference['ad_sd']:.2f}")
        lines.append(f"    {row.participant_id}: confidence {body['confidence_score']:+.3f}"
                     f"  speech richness {richness:.3f}{band}")
    return lines


def render_report(report: SimulationReport, json_path: str | Path | None = None) -> str:
    doc = report.to_dict()
    if json_path is not None:
        Path(json_path).write_text(json.dumps(doc, indent=2, sort_keys=True),
                                   encoding="utf-8")
    header = f"{'participant':<14}{'seen':>6}{'uploads':>9}{'results':>9}{'skipped':>9}{'errors':>8}"
    lines = [header, "-" * len(header)]
    for row in sorted(report.participants, key=lambda r: r.participant_id):
        lines.append(f"{row.participant_id:<14}{row.assignments_seen:>6}{row.uploads:>9}"
                     f"{row.results_received:>9}{row.skipped:>9}{len(row.errors):>8}")
    latency = doc["latency"]
    if latency["count"]:
        lines.append(f"latency: n={latency['count']} p50={latency['p50_s']:.3f}s "
                     f"p95={latency['p95_s']:.3f}s")
    score_lines = []
    for row in sorted(report.participants, key=lambda r: r.participant_id):
        score_lines.extend(_score_lines(row))
    if score_lines:
        lines.append("scores:")
        lines.extend(score_lines)
    return "\n".join(lines)
