"""Structured metadata tables: the raw-data table and the results table, correlated by dataset id.

Backing store is a single sqlite file in WAL mode, so gateway, workers, and the
CTM can share it across processes with serialized writers per table. Rows hold
only JSON metadata and BlobRefs, never blob content.
"""

from __future__ import annotations

import json
import sqlite3
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from orbit_mesh.storage.blobs import BlobRef, BlobStore
from orbit_mesh.storage.errors import DuplicateKey, MissingDataset, UnknownDataset

_SCHEMA = """
CREATE TABLE IF NOT EXISTS raw_data (
    dataset_id TEXT PRIMARY KEY,
    study_id TEXT NOT NULL,
    task_definition_id TEXT NOT NULL,
    participant_id TEXT NOT NULL,
    task_description TEXT NOT NULL,
    started_at REAL NOT NULL,
    completed_at REAL NOT NULL,
    answers TEXT NOT NULL,
    blob_refs TEXT NOT NULL,
    ingested_at REAL NOT NULL
);
CREATE TABLE IF NOT EXISTS results (
    task_id TEXT PRIMARY KEY,
    dataset_id TEXT,
    namespace TEXT NOT NULL,
    job_name TEXT NOT NULL,
    result TEXT NOT NULL,
    completed_at REAL NOT NULL
);
CREATE INDEX IF NOT EXISTS idx_results_dataset ON results (dataset_id);
"""


@dataclass
class RawDataRecord:
    dataset_id: str
    study_id: str
    task_definition_id: str
    participant_id: str
    task_description: dict
    started_at: float
    completed_at: float
    answers: list
    blob_refs: list[BlobRef] = field(default_factory=list)
    ingested_at: float = 0.0

    def to_dict(self) -> dict:
        return {
            "dataset_id": self.dataset_id,
            "study_id": self.study_id,
            "task_definition_id": self.task_definition_id,
            "participant_id": self.participant_id,
            "task_description": self.task_description,
            "started_at": self.started_at,
            "completed_at": self.completed_at,
            "answers": self.answers,
            "blob_refs": [b.to_dict() for b in self.blob_refs],
            "ingested_at": self.ingested_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RawDataRecord":
        return cls(
            dataset_id=d["dataset_id"], study_id=d["study_id"],
            task_definition_id=d["task_definition_id"], participant_id=d["participant_id"],
            task_description=d["task_description"], started_at=d["started_at"],
            completed_at=d["completed_at"], answers=d["answers"],
            blob_refs=[BlobRef.from_dict(b) for b in d.get("blob_refs", [])],
            ingested_at=d.get("ingested_at", 0.0),
        )


@dataclass
class ResultRecord:
    task_id: str
    dataset_id: Optional[str]
    namespace: str
    job_name: str
    result: dict
    completed_at: float

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "dataset_id": self.dataset_id,
            "namespace": self.namespace,
            "job_name": self.job_name,
            "result": self.result,
            "completed_at": self.completed_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ResultRecord":
        return cls(task_id=d["task_id"], dataset_id=d.get("dataset_id"),
                   namespace=d["namespace"], job_name=d["job_name"],
                   result=d["result"], completed_at=d["completed_at"])


class MetadataStore:
    def __init__(self, db_path: str | Path):
        self.db_path = Path(db_path)
        self.db_path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._conn = sqlite3.connect(str(self.db_path), check_same_thread=False)
        self._conn.execute("PRAGMA journal_mode=WAL")
        self._conn.execute("PRAGMA busy_timeout=10000")
        with self._conn:
            self._conn.executescript(_SCHEMA)

    def close(self) -> None:
        self._conn.close()

    def insert_raw(self, record: RawDataRecord) -> None:
        with self._lock, self._conn:
            try:
                self._conn.execute(
                    "INSERT INTO raw_data VALUES (?,?,?,?,?,?,?,?,?,?)",
                    (record.dataset_id, record.study_id, record.task_definition_id,
                     record.participant_id, json.dumps(record.task_description),
                     record.started_at, record.completed_at, json.dumps(record.answers),
                     json.dumps([b.to_dict() for b in record.blob_refs]), record.ingested_at),
                )
            except sqlite3.IntegrityError:
                raise DuplicateKey(f"dataset {record.dataset_id!r} already inserted")

    def insert_result(self, record: ResultRecord) -> None:
        with self._lock, self._conn:
            if record.dataset_id is not None:
                row = self._conn.execute(
                    "SELECT 1 FROM raw_data WHERE dataset_id=?", (record.dataset_id,)
                ).fetchone()
                if row is None:
                    raise MissingDataset(f"dataset {record.dataset_id!r} has no raw record")
            try:
                self._conn.execute(
                    "INSERT INTO results VALUES (?,?,?,?,?,?)",
                    (record.task_id, record.dataset_id, record.namespace, record.job_name,
                     json.dumps(record.result), record.completed_at),
                )
            except sqlite3.IntegrityError:
                raise DuplicateKey(f"result for task {record.task_id!r} already inserted")

    def get_raw(self, dataset_id: str) -> RawDataRecord:
        with self._lock:
            row = self._conn.execute(
                "SELECT * FROM raw_data WHERE dataset_id=?", (dataset_id,)).fetchone()
        if row is None:
            raise UnknownDataset(f"no dataset {dataset_id!r}")
        return self._raw_from_row(row)

    def query_by_dataset(self, dataset_id: str) -> dict:
        """The raw record plus all result rows, results ordered by completed_at."""
        with self._lock:
            raw_row = self._conn.execute(
                "SELECT * FROM raw_data WHERE dataset_id=?", (dataset_id,)).fetchone()
            if raw_row is None:
                raise UnknownDataset(f"no dataset {dataset_id!r}")
            result_rows = self._conn.execute(
                "SELECT * FROM results WHERE dataset_id=? ORDER BY completed_at, task_id",
                (dataset_id,)).fetchall()
        return {
            "raw": self._raw_from_row(raw_row),
            "results": [self._result_from_row(r) for r in result_rows],
        }

    def list_datasets(self) -> list[str]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT dataset_id FROM raw_data ORDER BY ingested_at, dataset_id").fetchall()
        return [r[0] for r in rows]

    def list_results(self) -> list[ResultRecord]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT * FROM results ORDER BY completed_at, task_id").fetchall()
        return [self._result_from_row(r) for r in rows]

    @staticmethod
    def _raw_from_row(row) -> RawDataRecord:
        return RawDataRecord(
            dataset_id=row[0], study_id=row[1], task_definition_id=row[2],
            participant_id=row[3], task_description=json.loads(row[4]),
            started_at=row[5], completed_at=row[6], answers=json.loads(row[7]),
            blob_refs=[BlobRef.from_dict(b) for b in json.loads(row[8])],
            ingested_at=row[9],
        )

    @staticmethod
    def _result_from_row(row) -> ResultRecord:
        return ResultRecord(task_id=row[0], dataset_id=row[1], namespace=row[2],
                            job_name=row[3], result=json.loads(row[4]), completed_at=row[5])


def verify_integrity(store: MetadataStore, blobs: BlobStore) -> list[str]:
    """Referential-integrity sweep: FK links resolve and blob refs match content."""
    import hashlib

    problems: list[str] = []
    datasets = set(store.list_datasets())
    for result in store.list_results():
        if result.dataset_id is not None and result.dataset_id not in datasets:
            problems.append(f"result {result.task_id} references missing dataset {result.dataset_id}")
    for dataset_id in datasets:
        raw = store.get_raw(dataset_id)
        for ref in raw.blob_refs:
            if not blobs.exists(ref.url):
                problems.append(f"dataset {dataset_id}: blob {ref.url} does not resolve")
                continue
            content, _ = blobs.get_blob(ref.url)
            if hashlib.sha256(content).hexdigest() != ref.sha256:
                problems.append(f"dataset {dataset_id}: blob {ref.url} sha256 mismatch")
            if len(content) != ref.size_bytes:
                problems.append(f"dataset {dataset_id}: blob {ref.url} size mismatch")
    return problems
