"""orbit-admin: operational chores over a data root (dataset export, integrity sweep)."""

from __future__ import annotations

import argparse
import json
import sys
import zipfile

from orbit_mesh.storage.paths import open_storage
from orbit_mesh.storage.tables import verify_integrity


def export_dataset(data_root: str, dataset_id: str, out_path: str) -> None:
    """Bundle one dataset (raw row JSON + result rows + blob content) into a zip."""
    store, blobs = open_storage(data_root)
    bundle = store.query_by_dataset(dataset_id)
    raw = bundle["raw"]
    with zipfile.ZipFile(out_path, "w", zipfile.ZIP_DEFLATED) as zf:
        zf.writestr("raw.json", json.dumps(raw.to_dict(), indent=2, sort_keys=True))
        zf.writestr("results.json", json.dumps(
            [r.to_dict() for r in bundle["results"]], indent=2, sort_keys=True))
        for ref in raw.blob_refs:
            content, _ = blobs.get_blob(ref.url)
            name = ref.url.split("://", 1)[1]
            zf.writestr(f"blobs/{name}", content)
    store.close()


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="orbit-admin")
    sub = parser.add_subparsers(dest="command", required=True)

    export_p = sub.add_parser("export", help="dump one dataset bundle as a zip")
    export_p.add_argument("--dataset", required=True)
    export_p.add_argument("--data-root", required=True)
    export_p.add_argument("--out", default=None, help="output zip (default <dataset>.zip)")

    sweep_p = sub.add_parser("verify", help="referential-integrity sweep over a data root")
    sweep_p.add_argument("--data-root", required=True)

    args = parser.parse_args(argv)

    if args.command == "export":
        out = args.out or f"{args.dataset}.zip"
        export_dataset(args.data_root, args.dataset, out)
        print(f"wrote {out}")
        return 0

    if args.command == "verify":
        store, blobs = open_storage(args.data_root)
        problems = verify_integrity(store, blobs)
        store.close()
        for p in problems:
            print(p, file=sys.stderr)
        print(f"{len(problems)} problem(s)")
        return 1 if problems else 0

    return 2


if __name__ == "__main__":
    raise SystemExit(main())
