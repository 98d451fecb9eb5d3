"""orbit-worker: run an analytic worker from a config and a jobs manifest."""

from __future__ import annotations

import argparse
import logging
import signal
import threading
import uuid

from orbit_mesh.configfile import load_config
from orbit_mesh.httpcommon import resolve_token
from orbit_mesh.worker.manifest import load_manifest
from orbit_mesh.worker.sdk import Worker, WorkerConfig


def build_worker(cfg: dict, manifest_path: str) -> Worker:
    config = WorkerConfig(
        worker_id=cfg.get("worker_id") or f"worker-{uuid.uuid4().hex[:8]}",
        namespaces=set(cfg.get("namespaces", [])),
        dispatcher_url=cfg.get("dispatcher_url", "http://127.0.0.1:7070"),
        gateway_token=resolve_token(cfg.get("token")),
        poll_idle_backoff_s=cfg.get("poll_idle_backoff_s", 1.0),
        poll_idle_backoff_cap_s=cfg.get("poll_idle_backoff_cap_s", 10.0),
        deadline_safety_margin_s=cfg.get("deadline_safety_margin_s", 2.0),
        storage_root=cfg.get("storage_root"),
    )
    worker = Worker(config)
    for handler in load_manifest(manifest_path):
        worker.register_job(handler)
    return worker


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="orbit-worker")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run the claim-execute-report loop")
    run_p.add_argument("--config", required=True, help="TOML or JSON config file")
    run_p.add_argument("--jobs", required=True, help="jobs manifest (JSON)")
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    worker = build_worker(load_config(args.config), args.jobs)

    stop = threading.Event()
    for sig in (signal.SIGINT, signal.SIGTERM):
        signal.signal(sig, lambda *_: stop.set())
    worker.run(stop)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
