"""Interchangeable final scoring stage: classification, mental-state estimate, early-onset prediction.

Stand-in linear models over standardized features: z = w . (x - healthy_mean) /
healthy_sd + b. The shipped weights are NOT CLINICALLY VALID; they exist so the
pipeline shape, ranges, and determinism can be exercised end to end.

  Classification: p = sigmoid(z); confidence_score = 1 - 2p in [-1, 1],
                  -1 = highest likelihood of the condition, 1 = lowest.
  MMSE:           mmse_estimate = clamp(round(z), 0, 30).
  Onset85:        onset_probability = sigmoid(z); onset_before_85 = p >= 0.5.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from orbit_mesh.ad_pipeline.features import FEATURE_NAMES, FeatureVector

MODES = ("Classification", "MMSE", "Onset85")


class ConfigMismatch(Exception):
    pass


def sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


@dataclass
class ReferenceDistribution:
    """Per-feature {healthy_mean, healthy_sd, ad_mean, ad_sd} for standardization and UI bands."""

    stats: dict[str, dict]

    @classmethod
    def load(cls, path: str | Path) -> "ReferenceDistribution":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        stats = doc["features"]
        for name, entry in stats.items():
            for key in ("healthy_mean", "healthy_sd", "ad_mean", "ad_sd"):
                if key not in entry:
                    raise ConfigMismatch(f"reference entry {name!r} lacks {key}")
            if entry["healthy_sd"] <= 0:
                raise ConfigMismatch(f"reference entry {name!r} has healthy_sd <= 0")
        return cls(stats=stats)

    def standardize(self, name: str, value: float) -> float:
        entry = self.stats.get(name)
        if entry is None:
            raise ConfigMismatch(f"no reference distribution for feature {name!r}")
        return (value - entry["healthy_mean"]) / entry["healthy_sd"]


@dataclass
class ScoringConfig:
    mode: str
    feature_order: list[str]
    weights: list[float]
    bias: float
    lexicon_path: Optional[str] = None
    reference_distribution_path: Optional[str] = None
    reference: ReferenceDistribution = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigMismatch(f"unknown mode {self.mode!r}")
        if len(self.weights) != len(self.feature_order):
            raise ConfigMismatch(
                f"{len(self.weights)} weights for {len(self.feature_order)} features")
        unknown = [f for f in self.feature_order if f not in FEATURE_NAMES]
        if unknown:
            raise ConfigMismatch(f"unknown feature names {unknown}")

    @classmethod
    def load(cls, path: str | Path) -> "ScoringConfig":
        path = Path(path)
        doc = json.loads(path.read_text(encoding="utf-8"))
        cfg = cls(
            mode=doc["mode"], feature_order=list(doc["feature_order"]),
            weights=[float(w) for w in doc["weights"]], bias=float(doc["bias"]),
            lexicon_path=doc.get("lexicon_path"),
            reference_distribution_path=doc.get("reference_distribution_path"),
        )
        # relative paths resolve against the config file's directory
        if cfg.lexicon_path:
            cfg.lexicon_path = str((path.parent / cfg.lexicon_path).resolve())
        if cfg.reference_distribution_path:
            ref_path = (path.parent / cfg.reference_distribution_path).resolve()
            cfg.reference_distribution_path = str(ref_path)
            cfg.reference = ReferenceDistribution.load(ref_path)
        return cfg


@dataclass
class ScoreReport:
    mode: str
    features: FeatureVector
    feature_reference: dict
    confidence_score: Optional[float] = None
    mmse_estimate: Optional[int] = None
    onset_probability: Optional[float] = None
    onset_before_85: Optional[bool] = None
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "mode": self.mode,
            "features": self.features.to_dict(),
            "feature_reference": self.feature_reference,
            "metadata": self.metadata,
        }
        if self.mode == "Classification":
            d["confidence_score"] = self.confidence_score
        elif self.mode == "MMSE":
            d["mmse_estimate"] = self.mmse_estimate
        else:
            d["onset_probability"] = self.onset_probability
            d["onset_before_85"] = self.onset_before_85
        return d


def score(features: FeatureVector, cfg: ScoringConfig,
          reference: ReferenceDistribution | None = None) -> ScoreReport:
    reference = reference or cfg.reference
    if reference is None:
        raise ConfigMismatch("scoring needs a reference distribution")
    z = cfg.bias
    for name, weight in zip(cfg.feature_order, cfg.weights):
        z += weight * reference.standardize(name, features.get(name))

    report = ScoreReport(mode=cfg.mode, features=features,
                         feature_reference=dict(reference.stats))
    if cfg.mode == "Classification":
        p = sigmoid(z)
        report.confidence_score = 1.0 - 2.0 * p
    elif cfg.mode == "MMSE":
        report.mmse_estimate = int(min(30, max(0, round(z))))
    else:
        p = sigmoid(z)
        report.onset_probability = p
        report.onset_before_85 = p >= 0.5
    return report
