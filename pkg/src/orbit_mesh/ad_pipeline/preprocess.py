"""Text pre-processing: tokenization, sentence splitting, rule-based normalization.

Tokens are maximal runs of Unicode letters, digits, and apostrophes, lowercased.
Sentences split on . ! ? or newlines. Normalization strips a trailing "'s",
then a plural "es"/"s" on tokens longer than 3 characters, then "ing"/"ed" on
tokens longer than 4 - a documented rule-based approximation of lemmatization,
not a real lemmatizer.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from orbit_mesh.ad_pipeline.transcribe import Transcript

_TOKEN_RE = re.compile(r"(?:[^\W_]|')+", re.UNICODE)
_SENTENCE_SPLIT_RE = re.compile(r"[.!?\n]")


@dataclass
class TextRepresentation:
    tokens: list[str] = field(default_factory=list)
    sentences: list[tuple[int, int]] = field(default_factory=list)  # [start, end) token ranges
    normalized_tokens: list[str] = field(default_factory=list)

    @property
    def sentence_count(self) -> int:
        return len(self.sentences)


def tokenize(text: str) -> list[str]:
    return [m.group(0).lower() for m in _TOKEN_RE.finditer(text)]


def normalize_token(token: str) -> str:
    if token.endswith("'s"):
        token = token[:-2]
    if len(token) > 3:
        if token.endswith("es"):
            token = token[:-2]
        elif token.endswith("s"):
            token = token[:-1]
    if len(token) > 4:
        if token.endswith("ing"):
            token = token[:-3]
        elif token.endswith("ed"):
            token = token[:-2]
    return token


def preprocess(transcript: Transcript | str) -> TextRepresentation:
    text = transcript.text if isinstance(transcript, Transcript) else transcript
    tokens: list[str] = []
    sentences: list[tuple[int, int]] = []
    for segment in _SENTENCE_SPLIT_RE.split(text):
        segment_tokens = tokenize(segment)
        if not segment_tokens:
            continue
        start = len(tokens)
        tokens.extend(segment_tokens)
        sentences.append((start, len(tokens)))
    return TextRepresentation(
        tokens=tokens,
        sentences=sentences,
        normalized_tokens=[normalize_token(t) for t in tokens],
    )
