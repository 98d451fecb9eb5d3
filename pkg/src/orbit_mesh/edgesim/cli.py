"""orbit-sim: drive a scripted cohort against a live deployment."""

from __future__ import annotations

import argparse
import re

from orbit_mesh.edgesim.report import render_report
from orbit_mesh.edgesim.runner import run_cohort
from orbit_mesh.edgesim.scripts import load_scripts
from orbit_mesh.httpcommon import resolve_token

_DURATION_RE = re.compile(r"^(\d+(?:\.\d+)?)([smh]?)$")
_UNIT_S = {"": 1.0, "s": 1.0, "m": 60.0, "h": 3600.0}


def parse_duration(text: str) -> float:
    m = _DURATION_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad duration {text!r}; use forms like 90, 90s, 5m, 1h")
    return float(m.group(1)) * _UNIT_S[m.group(2)]


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="orbit-sim")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run a scripted participant cohort")
    run_p.add_argument("--scripts", required=True, help="directory of participant scripts")
    run_p.add_argument("--gateway", required=True, help="gateway base URL")
    run_p.add_argument("--ctm", required=True, help="CTM base URL")
    run_p.add_argument("--duration", default="5m", help="run budget, e.g. 90s or 5m")
    run_p.add_argument("--report", default=None, help="write the JSON report here")
    run_p.add_argument("--poll-interval", type=float, default=None,
                       help="override every script's poll interval (seconds)")
    run_p.add_argument("--token", default=None, help="bearer token (or ORBIT_TOKEN)")
    run_p.add_argument("--exit-when-idle", type=int, default=0, metavar="N",
                       help="stop a participant after N consecutive empty fetches")
    args = parser.parse_args(argv)

    scripts = load_scripts(args.scripts)
    report = run_cohort(
        scripts, ctm_url=args.ctm, gateway_url=args.gateway,
        duration_s=parse_duration(args.duration), token=resolve_token(args.token),
        poll_interval_override=args.poll_interval,
        idle_rounds_to_exit=args.exit_when_idle,
    )
    print(render_report(report, json_path=args.report))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
