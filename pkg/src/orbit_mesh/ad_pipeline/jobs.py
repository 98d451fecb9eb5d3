"""Worker job handlers chaining transcribe -> preprocess -> extract_features -> score.

Three job names (ad_assess, mmse_estimate, onset85) share the first three
stages and differ only in the scoring config. Input selection from the job
payload {dataset_id, answers, blob_urls}: the first text/plain blob wins, then
the first audio/video blob (through the transcription adapter), then the
longest string answer. No usable input fails the job with "no input".
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from orbit_mesh.ad_pipeline.features import extract_features
from orbit_mesh.ad_pipeline.lexicon import DEFAULT_LEXICON_PATH, ICULexicon
from orbit_mesh.ad_pipeline.preprocess import preprocess
from orbit_mesh.ad_pipeline.scoring import ScoringConfig, score
from orbit_mesh.ad_pipeline.transcribe import HttpTranscriber, Transcript, TranscriptionStage

DATA_DIR = Path(__file__).parent / "data"
DEFAULT_CONFIGS = {
    "Classification": DATA_DIR / "ad_classification.json",
    "MMSE": DATA_DIR / "ad_mmse.json",
    "Onset85": DATA_DIR / "ad_onset85.json",
}


class StageFailure(Exception):
    """Wraps a stage error so the failure names the stage that broke."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage


def _select_input(payload: dict, ctx, transcription: TranscriptionStage) -> Transcript:
    blobs: list[tuple[bytes, str]] = []
    for url in payload.get("blob_urls", []):
        content, media_type = ctx.get_blob(url)
        blobs.append((content, media_type))
    for content, media_type in blobs:
        if media_type.split(";")[0].strip().lower().startswith("text/"):
            return transcription.transcribe(content, media_type)
    for content, media_type in blobs:
        if media_type.split(";")[0].strip().lower().startswith(("audio/", "video/")):
            return transcription.transcribe(content, media_type)
    answers = [a.get("value") for a in payload.get("answers", [])
               if isinstance(a.get("value"), str)]
    text_answers = [a for a in answers if a.strip()]
    if text_answers:
        return Transcript(text=max(text_answers, key=len), source="ProvidedText")
    raise ValueError("no input")


class AssessmentPipeline:
    def __init__(self, scoring_config: str | Path, lexicon_path: str | Path | None = None,
                 transcriber_endpoint: Optional[str] = None):
        self.config = ScoringConfig.load(scoring_config)
        lexicon_path = lexicon_path or self.config.lexicon_path or DEFAULT_LEXICON_PATH
        self.lexicon = ICULexicon.load(lexicon_path)
        adapter = HttpTranscriber(transcriber_endpoint) if transcriber_endpoint else None
        self.transcription = TranscriptionStage(adapter)

    def run_text(self, text: str) -> dict:
        return self._run(Transcript(text=text, source="ProvidedText"))

    def _run(self, transcript: Transcript) -> dict:
        try:
            rep = preprocess(transcript)
        except Exception as exc:
            raise StageFailure("preprocess", exc)
        try:
            features = extract_features(rep, self.lexicon)
        except Exception as exc:
            raise StageFailure("extract_features", exc)
        try:
            report = score(features, self.config)
        except Exception as exc:
            raise StageFailure("score", exc)
        report.metadata = {
            "lexicon_version": self.lexicon.version,
            "transcript_source": transcript.source,
            "language": transcript.language,
        }
        return report.to_dict()

    def handle(self, payload: dict, ctx) -> dict:
        if not payload.get("blob_urls") and not payload.get("answers"):
            raise ValueError("no input")
        try:
            transcript = _select_input(payload, ctx, self.transcription)
        except ValueError:
            raise
        except Exception as exc:
            raise StageFailure("transcribe", exc)
        report = self._run(transcript)
        report["metadata"]["dataset_id"] = payload.get("dataset_id")
        report["metadata"]["answers"] = payload.get("answers", [])
        return report


def make_ad_assess(scoring_config: str | None = None, **kwargs):
    pipeline = AssessmentPipeline(scoring_config or DEFAULT_CONFIGS["Classification"], **kwargs)
    return pipeline.handle


def make_mmse_estimate(scoring_config: str | None = None, **kwargs):
    pipeline = AssessmentPipeline(scoring_config or DEFAULT_CONFIGS["MMSE"], **kwargs)
    return pipeline.handle


def make_onset85(scoring_config: str | None = None, **kwargs):
    pipeline = AssessmentPipeline(scoring_config or DEFAULT_CONFIGS["Onset85"], **kwargs)
    return pipeline.handle
