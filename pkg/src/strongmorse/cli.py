"""Command-line interface.

Exit codes: 0 on success, 1 on verification failure (including a failed
``validate`` or a ``replay`` mismatch), 2 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import fileio
from .homology import homology
from .morse import validate_matching
from .reduce import ENGINES, ReplayError
from .runner import (InputNotFound, RunConfig, VerificationFailure, aggregate_statistics,
                     bench, replay_result, rows_to_csv, rows_to_wide_csv, run)

USAGE_ERROR = 2
VERIFY_ERROR = 1


def _load_complex(path: str):
    p = Path(path)
    if not p.exists():
        raise InputNotFound(path)
    return fileio.load_complex(p)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_reduce(args) -> int:
    config = RunConfig(args.input, args.method, args.seed, args.iterations,
                       fmt=args.format, verify=args.verify, canonical=args.canonical)
    try:
        report = run(config)
    except VerificationFailure as err:
        if err.report is not None:
            doc = err.report.to_json(canonical=args.canonical)
            _write(fileio.dumps(doc), args.out)
        print(f"error: {err}", file=sys.stderr)
        return VERIFY_ERROR
    if args.format == "csv":
        _write(rows_to_csv(aggregate_statistics([report]), canonical=args.canonical),
               args.out)
    else:
        _write(fileio.dumps(report.to_json(canonical=args.canonical)), args.out)
    return 0


def _cmd_validate(args) -> int:
    cx, _ = _load_complex(args.input)
    doc = json.loads(Path(args.matching).read_text())
    try:
        pairs = fileio.matching_pairs_from_json(cx, doc)
    except (ValueError, KeyError, TypeError) as err:
        print(f"error: bad matching file: {err}", file=sys.stderr)
        return USAGE_ERROR
    report = validate_matching(cx, pairs)
    out = {"ok": report.ok, "pairing_valid": report.pairing_valid,
           "acyclic": report.acyclic, "problems": list(report.problems)}
    if report.witness_cycle:
        out["witness_cycle"] = [list(cx.to_labels(s)) for s in report.witness_cycle]
    sys.stdout.write(fileio.dumps(out))
    return 0 if report.ok else VERIFY_ERROR


def _cmd_homology(args) -> int:
    cx, _ = _load_complex(args.input)
    sys.stdout.write(fileio.dumps(homology(cx).to_json(), compact=True) + "\n")
    return 0


def _cmd_bench(args) -> int:
    manifest_path = Path(args.manifest)
    if not manifest_path.exists():
        raise InputNotFound(args.manifest)
    manifest = json.loads(manifest_path.read_text())
    reports = bench(manifest, base_dir=manifest_path.parent)
    rows = aggregate_statistics(reports)
    to_csv = rows_to_wide_csv if args.wide else rows_to_csv
    _write(to_csv(rows, canonical=args.canonical), args.out)
    if manifest.get("verify") and not all(r.all_verified for r in reports):
        return VERIFY_ERROR
    return 0


def _cmd_replay(args) -> int:
    cx, _ = _load_complex(args.input)
    doc = json.loads(Path(args.trace).read_text())
    if "iterations" in doc:
        results = [it["result"] for it in doc["iterations"] if it.get("result")]
        if not results:
            print("error: report carries no replayable results", file=sys.stderr)
            return USAGE_ERROR
    else:
        results = [doc]
    try:
        bad = [i for i, res in enumerate(results) if not replay_result(cx, res)]
    except ReplayError as err:
        print(f"error: illegal trace: {err}", file=sys.stderr)
        return VERIFY_ERROR
    if bad:
        print(f"error: replay diverged on results {bad}", file=sys.stderr)
        return VERIFY_ERROR
    print(f"replayed {len(results)} result(s) exactly")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="strongmorse",
        description="Reduce simplicial complexes by strong collapses, random "
                    "elementary collapses, and vertex-level Morse matchings; "
                    "verify every reduction against integer homology.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="run a reduction method on a facet file")
    p.add_argument("--input", required=True)
    p.add_argument("--method", required=True, choices=sorted(ENGINES))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--iterations", type=int, default=1)
    p.add_argument("--verify", action="store_true",
                   help="check every iteration against the homology oracle")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--canonical", action="store_true",
                   help="omit wall-clock fields for byte-reproducible output")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("validate", help="validate a matching against a complex")
    p.add_argument("--input", required=True)
    p.add_argument("--matching", required=True)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("homology", help="print integer homology of a facet file")
    p.add_argument("--input", required=True)
    p.set_defaults(func=_cmd_homology)

    p = sub.add_parser("bench", help="run a manifest of inputs x methods to CSV")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--wide", action="store_true",
                   help="one row per input with a column block per method")
    p.add_argument("--canonical", action="store_true")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("replay", help="re-execute an emitted trace and compare")
    p.add_argument("--trace", required=True, help="result or report JSON file")
    p.add_argument("--input", required=True)
    p.set_defaults(func=_cmd_replay)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputNotFound as err:
        print(f"error: input not found: {err}", file=sys.stderr)
        return USAGE_ERROR
    except (fileio.ParseError, fileio.EmptyFile, json.JSONDecodeError) as err:
        print(f"error: cannot parse input: {err}", file=sys.stderr)
        return USAGE_ERROR
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
