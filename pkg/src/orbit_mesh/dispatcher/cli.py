"""orbit-dispatcher: serve the task dispatcher, or check an event log."""

from __future__ import annotations

import argparse
import sys

from orbit_mesh.configfile import load_config
from orbit_mesh.dispatcher.core import Dispatcher, DispatcherConfig
from orbit_mesh.httpcommon import resolve_token, serve


def build_dispatcher(cfg: dict) -> Dispatcher:
    config = DispatcherConfig(
        lease_ttl_s=cfg.get("lease_ttl_s", 60.0),
        heartbeat_interval_s=cfg.get("heartbeat_interval_s", 10.0),
        dead_after_s=cfg.get("dead_after_s"),
        reap_interval_s=cfg.get("reap_interval_s", 5.0),
        max_attempts=cfg.get("max_attempts", 2),
        event_log_path=cfg.get("event_log_path"),
        fsync_events=cfg.get("fsync_events", False),
        host=cfg.get("host", "127.0.0.1"),
        port=cfg.get("port", 7070),
        token=cfg.get("token"),
    )
    return Dispatcher(config)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="orbit-dispatcher")
    sub = parser.add_subparsers(dest="command", required=True)

    serve_p = sub.add_parser("serve", help="run the dispatcher service")
    serve_p.add_argument("--config", required=True, help="TOML or JSON config file")

    check_p = sub.add_parser("check-log", help="run the consistency checker over an event log")
    check_p.add_argument("log_path")
    check_p.add_argument("--max-attempts", type=int, default=2)

    args = parser.parse_args(argv)

    if args.command == "serve":
        cfg = load_config(args.config)
        dispatcher = build_dispatcher(cfg)
        from orbit_mesh.dispatcher.app import create_app

        app = create_app(dispatcher, token=resolve_token(dispatcher.config.token))
        serve(app, dispatcher.config.host, dispatcher.config.port)
        return 0

    if args.command == "check-log":
        from orbit_mesh.dispatcher.logcheck import check_log_file

        violations = check_log_file(args.log_path, max_attempts=args.max_attempts)
        for v in violations:
            print(v, file=sys.stderr)
        print(f"{len(violations)} violation(s)")
        return 1 if violations else 0

    return 2


if __name__ == "__main__":
    raise SystemExit(main())
