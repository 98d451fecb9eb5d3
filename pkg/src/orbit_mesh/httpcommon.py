"""Bits shared by the three HTTP services: bearer-token guard and uvicorn runner."""

from __future__ import annotations

import os
from typing import Optional

from fastapi import HTTPException, Request

TOKEN_ENV_VAR = "ORBIT_TOKEN"


def resolve_token(configured: Optional[str]) -> Optional[str]:
    """Config file wins; ORBIT_TOKEN env var is the fallback; None disables auth."""
    if configured:
        return configured
    return os.environ.get(TOKEN_ENV_VAR) or None


def require_token(request: Request, token: Optional[str]) -> None:
    if token is None:
        return
    header = request.headers.get("authorization", "")
    if header != f"Bearer {token}":
        raise HTTPException(status_code=401, detail="missing or invalid bearer token")


def serve(app, host: str, port: int) -> None:
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level="warning")
