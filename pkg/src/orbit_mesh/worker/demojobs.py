"""Minimal handlers for smoke tests and manifest examples."""

from __future__ import annotations

import time


def echo(payload: dict, ctx) -> dict:
    """Return the payload unchanged."""
    return payload


def make_sleeper(seconds: float = 0.1):
    def handler(payload: dict, ctx) -> dict:
        time.sleep(seconds)
        return {"slept_s": seconds}

    return handler
