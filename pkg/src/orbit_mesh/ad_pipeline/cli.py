"""orbit-ad: batch-process a directory of transcripts without the service mesh."""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from orbit_mesh.ad_pipeline.jobs import DEFAULT_CONFIGS, AssessmentPipeline

_MODE_ALIASES = {
    "classification": "Classification",
    "mmse": "MMSE",
    "onset85": "Onset85",
}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="orbit-ad")
    sub = parser.add_subparsers(dest="command", required=True)
    batch = sub.add_parser("batch", help="score every *.txt transcript in a directory")
    batch.add_argument("--input", required=True, help="directory of plain-text transcripts")
    batch.add_argument("--mode", default="classification",
                       choices=sorted(_MODE_ALIASES))
    batch.add_argument("--out", required=True, help="output JSONL path")
    batch.add_argument("--scoring-config", default=None,
                       help="override the shipped scoring config")
    args = parser.parse_args(argv)

    mode = _MODE_ALIASES[args.mode]
    pipeline = AssessmentPipeline(args.scoring_config or DEFAULT_CONFIGS[mode])
    in_dir = Path(args.input)
    files = sorted(in_dir.glob("*.txt"))
    n = 0
    with open(args.out, "w", encoding="utf-8") as out:
        for path in files:
            report = pipeline.run_text(path.read_text(encoding="utf-8"))
            out.write(json.dumps({"file": path.name, "report": report},
                                 sort_keys=True) + "\n")
            n += 1
    print(f"scored {n} transcript(s) -> {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
