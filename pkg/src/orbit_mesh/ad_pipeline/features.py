"""Linguistic feature engineering over a preprocessed transcript.

Verbosity, lexical richness, and repetitiveness come from word counts; semantic
content from information-content-unit matches; syntactic complexity is proxied
by sentence length and subordinator density (full parsing is out of scope).
Empty input yields an all-zero vector rather than NaNs.
"""

from __future__ import annotations

from dataclasses import dataclass

from orbit_mesh.ad_pipeline.lexicon import ICULexicon
from orbit_mesh.ad_pipeline.preprocess import TextRepresentation

DEFAULT_SUBORDINATORS = (
    "because", "while", "although", "since", "when", "which", "who", "that",
    "if", "after", "before",
)

FEATURE_NAMES = (
    "word_count",
    "unique_word_count",
    "type_token_ratio",
    "repeated_token_fraction",
    "icu_count",
    "icu_coverage",
    "mean_sentence_length",
    "subordination_density",
    "speech_richness",
)


@dataclass
class FeatureVector:
    word_count: int = 0
    unique_word_count: int = 0
    type_token_ratio: float = 0.0
    repeated_token_fraction: float = 0.0
    icu_count: int = 0
    icu_coverage: float = 0.0
    mean_sentence_length: float = 0.0
    subordination_density: float = 0.0
    speech_richness: float = 0.0

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in FEATURE_NAMES}

    def get(self, name: str) -> float:
        return getattr(self, name)


def extract_features(rep: TextRepresentation, lexicon: ICULexicon,
                     subordinators=DEFAULT_SUBORDINATORS) -> FeatureVector:
    word_count = len(rep.tokens)
    unique_word_count = len(set(rep.tokens))
    type_token_ratio = unique_word_count / word_count if word_count else 0.0
    repeated_token_fraction = (
        (word_count - unique_word_count) / word_count if word_count else 0.0)

    matched = lexicon.matched_units(rep.normalized_tokens)
    icu_count = len(matched)
    icu_coverage = icu_count / len(lexicon)

    sentence_count = rep.sentence_count
    mean_sentence_length = word_count / sentence_count if sentence_count else 0.0
    subordinator_set = set(subordinators)
    subordinator_hits = sum(1 for t in rep.tokens if t in subordinator_set)
    subordination_density = subordinator_hits / sentence_count if sentence_count else 0.0

    speech_richness = type_token_ratio * min(1.0, word_count / 100.0)

    return FeatureVector(
        word_count=word_count,
        unique_word_count=unique_word_count,
        type_token_ratio=type_token_ratio,
        repeated_token_fraction=repeated_token_fraction,
        icu_count=icu_count,
        icu_coverage=icu_coverage,
        mean_sentence_length=mean_sentence_length,
        subordination_density=subordination_density,
        speech_richness=speech_richness,
    )
