from __future__ import annotations


class StorageError(Exception):
    pass


class KeyExists(StorageError):
    pass


class BucketUnknown(StorageError):
    pass


class UnknownBlob(StorageError):
    pass


class DuplicateKey(StorageError):
    pass


class MissingDataset(StorageError):
    pass


class UnknownDataset(StorageError):
    pass
