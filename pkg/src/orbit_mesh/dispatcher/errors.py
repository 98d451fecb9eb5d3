"""Dispatcher error taxonomy; the HTTP layer maps each class to a status code."""

from __future__ import annotations


class DispatcherError(Exception):
    """Base class for dispatcher contract violations."""


class InvalidRegistration(DispatcherError):
    pass


class DuplicateAliveWorker(DispatcherError):
    pass


class UnknownWorker(DispatcherError):
    pass


class NamespaceNotRegistered(DispatcherError):
    pass


class InvalidJobRequest(DispatcherError):
    pass


class UnknownTask(DispatcherError):
    pass


class StaleLease(DispatcherError):
    """Lease expired or claimed_by mismatch; the posted result is discarded."""
