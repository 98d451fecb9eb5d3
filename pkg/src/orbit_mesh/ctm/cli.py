"""orbit-ctm: serve the Clinical Task Manager."""

from __future__ import annotations

import argparse

from orbit_mesh.clock import SystemClock
from orbit_mesh.configfile import load_config
from orbit_mesh.ctm.service import DEFAULT_ASSIGNMENT_EXPIRY_S, ClinicalTaskManager
from orbit_mesh.httpcommon import resolve_token, serve


def build_ctm(cfg: dict) -> ClinicalTaskManager:
    storage = None
    if cfg.get("data_root"):
        from orbit_mesh.storage.paths import open_storage

        storage, _ = open_storage(cfg["data_root"])
    return ClinicalTaskManager(
        clock=SystemClock(),
        snapshot_path=cfg.get("snapshot_path"),
        storage=storage,
        assignment_expiry_s=cfg.get("assignment_expiry_s", DEFAULT_ASSIGNMENT_EXPIRY_S),
    )


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="orbit-ctm")
    sub = parser.add_subparsers(dest="command", required=True)
    serve_p = sub.add_parser("serve", help="run the Clinical Task Manager service")
    serve_p.add_argument("--config", required=True, help="TOML or JSON config file")
    args = parser.parse_args(argv)

    cfg = load_config(args.config)
    ctm = build_ctm(cfg)
    from orbit_mesh.ctm.app import create_app

    app = create_app(ctm, token=resolve_token(cfg.get("token")))
    serve(app, cfg.get("host", "127.0.0.1"), cfg.get("port", 7072))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
