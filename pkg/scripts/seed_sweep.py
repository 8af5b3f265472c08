#!/usr/bin/env python3
"""Distribution of reduced sizes across seeds for a single input.

Vertex-removal reductions are seed-sensitive; this sweep shows how much the
critical-cell count varies and how often each size occurs, e.g.

    python scripts/seed_sweep.py data/dunce_hat.txt --seeds 200
"""
import argparse
import sys
from collections import Counter
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from strongmorse.fileio import load_complex
from strongmorse.homology import verify_reduction
from strongmorse.reduce import Rng, reduce_complex


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("input")
    parser.add_argument("--method", default="strong-internal",
                        choices=["strong-core", "weak-core", "strong-internal",
                                 "weak-then-strong"])
    parser.add_argument("--seeds", type=int, default=100)
    parser.add_argument("--master-seed", type=int, default=0)
    parser.add_argument("--verify", action="store_true")
    args = parser.parse_args()

    cx, ff = load_complex(args.input)
    master = Rng(args.master_seed)
    sizes = []
    for i in range(args.seeds):
        result = reduce_complex(cx, args.method, master.split(i))
        if args.verify and not verify_reduction(cx, result).ok:
            print(f"verification FAILED on seed index {i}", file=sys.stderr)
            return 1
        sizes.append(result.output_size)
    counter = Counter(sizes)
    name = ff.name or Path(args.input).stem
    print(f"{name}: {len(cx)} simplices, method {args.method}, "
          f"{args.seeds} seeds")
    print(f"mean {sum(sizes) / len(sizes):.2f}  min {min(sizes)}  max {max(sizes)}")
    width = max(counter.values())
    for size in sorted(counter):
        bar = "#" * max(1, round(40 * counter[size] / width))
        print(f"{size:5d}  {counter[size]:4d}  {bar}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
