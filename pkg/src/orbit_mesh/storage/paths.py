"""Conventional layout of a shared data root.

Gateway, workers, and the CTM point at one directory:
    <data_root>/metadata.sqlite3   tables (raw data + results)
    <data_root>/blobs/             object store content root
"""

from __future__ import annotations

from pathlib import Path

from orbit_mesh.storage.blobs import BlobStore
from orbit_mesh.storage.tables import MetadataStore


def open_storage(data_root: str | Path, buckets: set[str] | None = None) -> tuple[MetadataStore, BlobStore]:
    root = Path(data_root)
    root.mkdir(parents=True, exist_ok=True)
    return MetadataStore(root / "metadata.sqlite3"), BlobStore(root / "blobs", buckets=buckets)
