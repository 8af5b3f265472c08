"""Multi-seed reduction runs, verification gating, and the bench harness.

A run executes ``iterations`` independent reductions whose seeds are split
from the master seed by iteration index, optionally verifying each one against
the integer-homology oracle.  Iterations execute in a worker pool when the
``STRONGMORSE_WORKERS`` environment variable asks for more than one process;
the default is single-threaded so reports stay reproducible everywhere.
Reports drop wall-clock fields under ``canonical`` serialization, which makes
equal-seed runs byte-identical.
"""
from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import fileio
from .complexes import SimplicialComplex
from .homology import verify_reduction
from .reduce import ENGINES, Rng, reduce_complex, replay_trace


class InputNotFound(Exception):
    pass


class VerificationFailure(Exception):
    def __init__(self, message: str, report: "RunReport | None" = None):
        super().__init__(message)
        self.report = report


@dataclass
class RunConfig:
    input_path: str
    method: str
    seed: int
    iterations: int = 1
    fmt: str = "json"  # json | csv
    verify: bool = False
    canonical: bool = False
    include_results: bool = True

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.method not in ENGINES:
            raise ValueError(f"unknown method {self.method!r}")


@dataclass
class IterationOutcome:
    index: int
    size: int
    wall_time: float
    verification: dict | None
    result: dict | None


@dataclass
class RunReport:
    name: str
    input_hash: str
    input_size: int
    method: str
    seed: int
    outcomes: list[IterationOutcome] = field(default_factory=list)

    @property
    def mean_size(self) -> float:
        return sum(o.size for o in self.outcomes) / len(self.outcomes)

    @property
    def mean_wall_time(self) -> float:
        return sum(o.wall_time for o in self.outcomes) / len(self.outcomes)

    @property
    def all_verified(self) -> bool:
        return all(o.verification is None or o.verification["ok"] for o in self.outcomes)

    def to_json(self, canonical: bool = False) -> dict:
        iterations = []
        for o in self.outcomes:
            entry: dict = {"index": o.index, "size": o.size}
            if not canonical:
                entry["wall_time"] = o.wall_time
            if o.verification is not None:
                entry["verification"] = o.verification
            if o.result is not None:
                result = dict(o.result)
                if canonical:
                    result.pop("wall_time", None)
                entry["result"] = result
            iterations.append(entry)
        doc = {
            "provenance": {"input": self.name, "input_hash": self.input_hash,
                           "input_size": self.input_size, "method": self.method,
                           "seed": self.seed, "iterations": len(self.outcomes)},
            "iterations": iterations,
            "aggregate": {"mean_size": self.mean_size},
        }
        if not canonical:
            doc["aggregate"]["mean_wall_time"] = self.mean_wall_time
        return doc


def _run_iteration(payload) -> tuple[int, int, float, dict | None, dict | None]:
    facets, method, subseed, verify, include_result, index = payload
    cx = SimplicialComplex.from_facets(facets)
    start = time.perf_counter()
    result = reduce_complex(cx, method, Rng(subseed))
    wall = time.perf_counter() - start
    verification = None
    if verify:
        verification = verify_reduction(cx, result).to_json()
    doc = fileio.result_to_json(cx, result) if include_result else None
    return index, result.output_size, wall, verification, doc


def run(config: RunConfig) -> RunReport:
    """Execute a seeded multi-iteration reduction run.

    With ``verify`` set, a failed oracle check raises ``VerificationFailure``
    carrying the partial report.
    """
    path = Path(config.input_path)
    if not path.exists():
        raise InputNotFound(str(path))
    cx, ff = fileio.load_complex(path)
    name = ff.name or path.stem
    master = Rng(config.seed)
    payloads = [
        ([list(cx.to_labels(f)) for f in cx.facets], config.method,
         master.split(i).seed, config.verify, config.include_results, i)
        for i in range(config.iterations)
    ]
    workers = int(os.environ.get("STRONGMORSE_WORKERS", "1"))
    if workers > 1 and config.iterations > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(_run_iteration, payloads))
    else:
        raw = [_run_iteration(p) for p in payloads]
    report = RunReport(name, fileio.input_hash(cx), len(cx), config.method, config.seed)
    for index, size, wall, verification, doc in sorted(raw, key=lambda r: r[0]):
        report.outcomes.append(IterationOutcome(index, size, wall, verification, doc))
    if config.verify and not report.all_verified:
        bad = [o.index for o in report.outcomes
               if o.verification is not None and not o.verification["ok"]]
        raise VerificationFailure(f"verification failed on iterations {bad}", report)
    return report


CSV_COLUMNS = ["name", "original_size", "method", "mean_size", "mean_time_sec"]


def aggregate_statistics(reports: list[RunReport]) -> list[dict]:
    """One summary row per report: name, original size, method, mean size, mean time."""
    if not reports:
        raise ValueError("no reports to aggregate")
    return [
        {"name": r.name, "original_size": r.input_size, "method": r.method,
         "mean_size": r.mean_size, "mean_time_sec": r.mean_wall_time}
        for r in reports
    ]


def rows_to_csv(rows: list[dict], canonical: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([row["name"], row["original_size"], row["method"],
                         f"{row['mean_size']:.2f}",
                         "" if canonical else f"{row['mean_time_sec']:.4f}"])
    return buf.getvalue()


def rows_to_wide_csv(rows: list[dict], canonical: bool = False) -> str:
    """Side-by-side layout: one row per input, one column pair per method."""
    methods = [m for m in ENGINES if any(r["method"] == m for r in rows)]
    by_name: dict[str, dict] = {}
    for row in rows:
        by_name.setdefault(row["name"], {"original_size": row["original_size"]})[
            row["method"]] = row
    buf = io.StringIO()
    writer = csv.writer(buf)
    header = ["name", "original_size"]
    for m in methods:
        header.append(m)
        if not canonical:
            header.append(f"{m}_time_sec")
    writer.writerow(header)
    for name, data in by_name.items():
        out = [name, data["original_size"]]
        for m in methods:
            row = data.get(m)
            out.append(f"{row['mean_size']:.2f}" if row else "")
            if not canonical:
                out.append(f"{row['mean_time_sec']:.4f}" if row else "")
        writer.writerow(out)
    return buf.getvalue()


def bench(manifest: dict, base_dir: str | Path = ".") -> list[RunReport]:
    """Run every input x method combination named by a bench manifest.

    Manifest schema: ``{"seed": int, "iterations": int, "inputs": [paths],
    "methods": [names], "verify": bool}``; paths are resolved against the
    manifest's directory.
    """
    base = Path(base_dir)
    seed = int(manifest.get("seed", 0))
    iterations = int(manifest.get("iterations", 10))
    methods = manifest.get("methods", list(ENGINES))
    verify = bool(manifest.get("verify", False))
    reports = []
    for raw_path in manifest["inputs"]:
        path = Path(raw_path)
        if not path.is_absolute():
            path = base / path
        for method in methods:
            config = RunConfig(str(path), method, seed, iterations,
                               verify=verify, include_results=False)
            reports.append(run(config))
    return reports


def replay_result(cx: SimplicialComplex, result_doc: dict) -> bool:
    """Re-execute a serialized result's trace and compare the reduced object."""
    trace = fileio.trace_from_json(cx, result_doc["trace"])
    recomputed = replay_trace(cx, trace)
    if result_doc.get("core") is not None:
        stored = sorted(sorted(f, key=repr) for f in result_doc["core"]["facets"])
        got = sorted(sorted(cx.to_labels(f), key=repr) for f in recomputed.core.facets)
        return stored == got
    stored_poset = result_doc.get("critical_poset")
    got_poset = fileio.poset_to_json(cx, recomputed.critical_poset)
    return json.dumps(stored_poset, sort_keys=True) == json.dumps(got_poset, sort_keys=True)
