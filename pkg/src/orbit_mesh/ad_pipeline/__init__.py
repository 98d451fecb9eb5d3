from orbit_mesh.ad_pipeline.features import FeatureVector, extract_features
from orbit_mesh.ad_pipeline.lexicon import ICULexicon
from orbit_mesh.ad_pipeline.preprocess import TextRepresentation, preprocess
from orbit_mesh.ad_pipeline.scoring import ScoreReport, ScoringConfig, score
from orbit_mesh.ad_pipeline.transcribe import (
    HttpTranscriber,
    Transcript,
    TranscriptionStage,
    TranscriptionUnavailable,
    UnsupportedMedia,
)

__all__ = [
    "FeatureVector",
    "HttpTranscriber",
    "ICULexicon",
    "ScoreReport",
    "ScoringConfig",
    "TextRepresentation",
    "Transcript",
    "TranscriptionStage",
    "TranscriptionUnavailable",
    "UnsupportedMedia",
    "extract_features",
    "preprocess",
    "score",
]
