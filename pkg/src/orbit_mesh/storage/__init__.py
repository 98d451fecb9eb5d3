from orbit_mesh.storage.blobs import BlobRef, BlobStore
from orbit_mesh.storage.errors import (
    BucketUnknown,
    DuplicateKey,
    KeyExists,
    MissingDataset,
    StorageError,
    UnknownBlob,
    UnknownDataset,
)
from orbit_mesh.storage.tables import MetadataStore, RawDataRecord, ResultRecord

__all__ = [
    "BlobRef",
    "BlobStore",
    "BucketUnknown",
    "DuplicateKey",
    "KeyExists",
    "MetadataStore",
    "MissingDataset",
    "RawDataRecord",
    "ResultRecord",
    "StorageError",
    "UnknownBlob",
    "UnknownDataset",
]
