"""Information-content-unit lexicon for the picture-description task.

An editable, versioned JSON file mapping semantic units to variant word lists;
variants are normalized with the same rules as transcript tokens, so a unit
matches whenever any variant equals any normalized token. Feature counts depend
on this file, so its version travels with every score report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from orbit_mesh.ad_pipeline.preprocess import normalize_token

DEFAULT_LEXICON_PATH = Path(__file__).parent / "data" / "icu_lexicon.json"


@dataclass
class ICULexicon:
    version: str
    units: dict[str, set[str]]  # unit name -> normalized variant forms

    @classmethod
    def load(cls, path: str | Path = DEFAULT_LEXICON_PATH) -> "ICULexicon":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        units = {
            name: {normalize_token(v.lower()) for v in variants}
            for name, variants in doc["units"].items()
        }
        if not units:
            raise ValueError(f"lexicon {path} has no units")
        return cls(version=str(doc.get("version", "0")), units=units)

    def __len__(self) -> int:
        return len(self.units)

    def matched_units(self, normalized_tokens) -> set[str]:
        token_set = set(normalized_tokens)
        return {name for name, variants in self.units.items() if variants & token_set}
