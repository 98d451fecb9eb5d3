"""Config files for the service CLIs: TOML or JSON, chosen by extension."""

from __future__ import annotations

import json
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib


def load_config(path: str | Path) -> dict:
    p = Path(path)
    raw = p.read_bytes()
    if p.suffix.lower() == ".toml":
        return tomllib.loads(raw.decode("utf-8"))
    return json.loads(raw.decode("utf-8"))
