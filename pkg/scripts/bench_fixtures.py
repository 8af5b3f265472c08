#!/usr/bin/env python3
"""Benchmark the reduction methods over the bundled fixture files.

Reproduces the multi-seed experiment protocol at fixture scale: every method
runs ``--iterations`` independent seeded reductions per input and the mean
output sizes land in a CSV next to the per-iteration wall times.  Any
triangulation files dropped into data/library are picked up automatically.

    python scripts/bench_fixtures.py --iterations 100 --seed 0 --wide
"""
import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from strongmorse.runner import aggregate_statistics, bench, rows_to_csv, rows_to_wide_csv


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--iterations", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--verify", action="store_true",
                        help="run the homology oracle on every iteration")
    parser.add_argument("--wide", action="store_true",
                        help="one row per input, one column block per method")
    parser.add_argument("--out", default=None)
    args = parser.parse_args()

    data = ROOT / "data"
    inputs = sorted(str(p) for p in data.glob("*.txt"))
    inputs += sorted(str(p) for p in (data / "library").glob("*")
                     if p.is_file() and p.suffix in ("", ".txt", ".dat"))
    manifest = {
        "seed": args.seed,
        "iterations": args.iterations,
        "verify": args.verify,
        "inputs": inputs,
        "methods": ["strong-core", "weak-core", "strong-internal", "weak-then-strong"],
    }
    reports = bench(manifest, base_dir=ROOT)
    rows = aggregate_statistics(reports)
    text = rows_to_wide_csv(rows) if args.wide else rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if all(r.all_verified for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
