"""File-backed object store for unstructured data, addressed by blob:// URLs.

Layout under the content root:
    <root>/<bucket>/<key>            blob bytes
    <root>/.meta/<bucket>/<key>.json sidecar {media_type, size_bytes, sha256}

Writes go to a temp file and land with an atomic rename, so concurrent writers
are safe and readers never see partial content.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import urlparse

from orbit_mesh.storage.errors import BucketUnknown, KeyExists, UnknownBlob

URL_SCHEME = "blob"


@dataclass(frozen=True)
class BlobRef:
    url: str
    media_type: str
    size_bytes: int
    sha256: str

    def to_dict(self) -> dict:
        return {
            "url": self.url,
            "media_type": self.media_type,
            "size_bytes": self.size_bytes,
            "sha256": self.sha256,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BlobRef":
        return cls(url=d["url"], media_type=d["media_type"],
                   size_bytes=d["size_bytes"], sha256=d["sha256"])


def _split_url(url: str) -> tuple[str, str]:
    parsed = urlparse(url)
    if parsed.scheme != URL_SCHEME or not parsed.netloc:
        raise UnknownBlob(f"not a blob:// url: {url!r}")
    key = parsed.path.lstrip("/")
    if not key:
        raise UnknownBlob(f"blob url has no key: {url!r}")
    return parsed.netloc, key


def _check_key(key: str) -> None:
    parts = key.split("/")
    if any(p in ("", ".", "..") for p in parts):
        raise UnknownBlob(f"illegal blob key {key!r}")


class BlobStore:
    DEFAULT_BUCKETS = ("raw-data",)

    def __init__(self, root: str | Path, buckets: set[str] | None = None):
        self.root = Path(root)
        self.buckets = set(buckets) if buckets is not None else set(self.DEFAULT_BUCKETS)
        self.root.mkdir(parents=True, exist_ok=True)

    def _content_path(self, bucket: str, key: str) -> Path:
        return self.root / bucket / key

    def _meta_path(self, bucket: str, key: str) -> Path:
        return self.root / ".meta" / bucket / (key + ".json")

    def put_blob(self, bucket: str, key: str, media_type: str, content: bytes) -> BlobRef:
        if bucket not in self.buckets:
            raise BucketUnknown(f"bucket {bucket!r} is not configured")
        if not key:
            raise UnknownBlob("key must be non-empty")
        _check_key(key)
        path = self._content_path(bucket, key)
        if path.exists():
            raise KeyExists(f"blob {bucket}/{key} already exists; overwrite forbidden")
        path.parent.mkdir(parents=True, exist_ok=True)
        digest = hashlib.sha256(content).hexdigest()
        fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=".put-")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(content)
                fh.flush()
                os.fsync(fh.fileno())
            try:
                os.link(tmp, path)  # refuses to clobber: concurrent same-key put loses
            except FileExistsError:
                raise KeyExists(f"blob {bucket}/{key} already exists; overwrite forbidden")
        finally:
            os.unlink(tmp)
        ref = BlobRef(
            url=f"{URL_SCHEME}://{bucket}/{key}", media_type=media_type,
            size_bytes=len(content), sha256=digest,
        )
        meta = self._meta_path(bucket, key)
        meta.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=str(meta.parent), prefix=".meta-")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(ref.to_dict(), fh)
        os.replace(tmp, meta)
        return ref

    def get_blob(self, url: str) -> tuple[bytes, str]:
        bucket, key = _split_url(url)
        _check_key(key)
        path = self._content_path(bucket, key)
        if not path.exists():
            raise UnknownBlob(f"no blob at {url}")
        content = path.read_bytes()
        media_type = "application/octet-stream"
        meta = self._meta_path(bucket, key)
        if meta.exists():
            media_type = json.loads(meta.read_text(encoding="utf-8"))["media_type"]
        return content, media_type

    def ref(self, url: str) -> BlobRef:
        bucket, key = _split_url(url)
        meta = self._meta_path(bucket, key)
        if not meta.exists():
            raise UnknownBlob(f"no blob at {url}")
        return BlobRef.from_dict(json.loads(meta.read_text(encoding="utf-8")))

    def exists(self, url: str) -> bool:
        try:
            bucket, key = _split_url(url)
        except UnknownBlob:
            return False
        return self._content_path(bucket, key).exists()
