"""Transcription plug point: identity stub for pre-transcribed text, HTTP adapter for real ASR.

Real speech-to-text is out of scope; the adapter forwards audio bytes to a
configured external endpoint that answers {"transcript": "..."}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import httpx


class TranscriptionError(Exception):
    pass


class TranscriptionUnavailable(TranscriptionError):
    """Audio input but no adapter configured, or the adapter is unreachable."""


class UnsupportedMedia(TranscriptionError):
    pass


@dataclass
class Transcript:
    text: str
    language: str = "en"
    source: str = "ProvidedText"  # ProvidedText | TranscribedAudio


class HttpTranscriber:
    """Sidecar adapter: POSTs audio to an external speech-to-text endpoint."""

    def __init__(self, endpoint: str, client: Optional[httpx.Client] = None,
                 timeout: float = 60.0):
        self.endpoint = endpoint
        self._client = client or httpx.Client(timeout=timeout)

    def transcribe(self, content: bytes, media_type: str) -> Transcript:
        try:
            resp = self._client.post(self.endpoint, content=content,
                                     headers={"Content-Type": media_type})
            resp.raise_for_status()
            text = resp.json()["transcript"]
        except (httpx.HTTPError, KeyError, ValueError) as exc:
            raise TranscriptionUnavailable(f"speech-to-text adapter failed: {exc}")
        return Transcript(text=text, source="TranscribedAudio")


class TranscriptionStage:
    """Dispatches by media type: text passes through, audio goes to the adapter."""

    def __init__(self, adapter: Optional[HttpTranscriber] = None):
        self.adapter = adapter

    def transcribe(self, content: bytes, media_type: str) -> Transcript:
        base_type = media_type.split(";")[0].strip().lower()
        if base_type.startswith("text/"):
            return Transcript(text=content.decode("utf-8"), source="ProvidedText")
        if base_type.startswith(("audio/", "video/")):
            if self.adapter is None:
                raise TranscriptionUnavailable(
                    f"audio input ({base_type}) but no speech-to-text adapter configured")
            return self.adapter.transcribe(content, media_type)
        raise UnsupportedMedia(f"cannot transcribe media type {media_type!r}")
