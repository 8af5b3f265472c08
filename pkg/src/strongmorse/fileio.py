"""Facet-file parsing and JSON codecs for every wire artifact.

Three facet-file formats are accepted:

* ``BRACKET``: an optional ``name :=`` prefix, a nested bracket list such as
  ``[[1,2,3],[1,3,4]]``, and an optional trailing ``;``.  Whitespace and
  newlines are free.  This is the layout triangulation archives circulate in.
* ``LINES``: one facet per line as whitespace-separated integer labels, with
  ``#`` comments.
* ``JSON``: an array of arrays of integers.

Parsing reports syntax errors with line and column.  JSON serialization of
complexes, matchings, classifications, posets, traces, results, and reports is
deterministic: equal inputs give byte-identical documents (timing fields are
dropped when ``canonical`` is requested, since wall-clock values are the one
non-reproducible ingredient).
"""
from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .complexes import Label, Simplex, SimplicialComplex
from .morse import Matching, VertexClass
from .posets import FinitePoset, Key
from .reduce import (CoreResult, CriticalRemoval, FacetRemoval, ReductionTrace, Step,
                     StrongCollapse, WeakCollapse)


class ParseError(Exception):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class EmptyFile(Exception):
    pass


@dataclass
class FacetFile:
    facets: list[list[int]]
    fmt: str  # BRACKET | LINES | JSON
    name: str | None = None

    def complex(self) -> SimplicialComplex:
        return SimplicialComplex.from_facets(self.facets)


_NAME_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*:=")


def _parse_bracket(text: str) -> FacetFile:
    name = None
    pos = 0
    m = _NAME_RE.match(text)
    if m:
        name = m.group(1)
        pos = m.end()

    def location(at: int) -> tuple[int, int]:
        line = text.count("\n", 0, at) + 1
        col = at - (text.rfind("\n", 0, at) + 1) + 1
        return line, col

    def err(message: str, at: int):
        line, col = location(at)
        raise ParseError(message, line, col)

    def skip_ws(i: int) -> int:
        while i < len(text) and text[i].isspace():
            i += 1
        return i

    def parse_int(i: int) -> tuple[int, int]:
        j = i
        if j < len(text) and text[j] in "+-":
            j += 1
        start_digits = j
        while j < len(text) and text[j].isdigit():
            j += 1
        if j == start_digits:
            err("expected an integer label", i)
        return int(text[i:j]), j

    def parse_list(i: int) -> tuple[list, int]:
        if i >= len(text) or text[i] != "[":
            err("expected '['", i)
        i = skip_ws(i + 1)
        items: list = []
        if i < len(text) and text[i] == "]":
            return items, i + 1
        while True:
            if i >= len(text):
                err("unbalanced bracket: expected ']' before end of input", i)
            if text[i] == "[":
                item, i = parse_list(i)
            else:
                item, i = parse_int(i)
            items.append(item)
            i = skip_ws(i)
            if i >= len(text):
                err("unbalanced bracket: expected ']' before end of input", i)
            if text[i] == ",":
                i = skip_ws(i + 1)
                continue
            if text[i] == "]":
                return items, i + 1
            err(f"expected ',' or ']', found {text[i]!r}", i)

    pos = skip_ws(pos)
    if pos >= len(text):
        raise EmptyFile("no facet list found")
    value, pos = parse_list(pos)
    pos = skip_ws(pos)
    if pos < len(text) and text[pos] == ";":
        pos = skip_ws(pos + 1)
    if pos < len(text):
        err(f"unexpected trailing input {text[pos]!r}", pos)
    facets = _validate_facet_lists(value, at_error=lambda msg: err(msg, 0))
    return FacetFile(facets, "BRACKET", name)


def _validate_facet_lists(value, at_error) -> list[list[int]]:
    if not isinstance(value, list):
        at_error("expected a list of facets")
    out = []
    for f in value:
        if not isinstance(f, list) or not all(isinstance(x, int) for x in f):
            at_error(f"facet {f!r} is not a flat integer list")
        out.append(list(f))
    return out


def _parse_lines(text: str) -> FacetFile:
    facets = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        row = []
        for col, tok in enumerate(line.split()):
            try:
                row.append(int(tok))
            except ValueError:
                raise ParseError(f"label {tok!r} is not an integer",
                                 lineno, raw.find(tok) + 1)
        facets.append(row)
    if not facets:
        raise EmptyFile("no facets found")
    return FacetFile(facets, "LINES")


def parse_facet_file(text: str) -> FacetFile:
    """Parse a facet file, auto-detecting BRACKET, LINES, or JSON layout."""
    stripped = text.strip()
    if not stripped:
        raise EmptyFile("input is empty")
    if _NAME_RE.match(text):
        return _parse_bracket(text)
    if stripped[0] == "[":
        try:
            value = json.loads(stripped)
        except json.JSONDecodeError:
            return _parse_bracket(text)

        def bad(msg):
            raise ParseError(msg, 1, 1)

        return FacetFile(_validate_facet_lists(value, bad), "JSON")
    return _parse_lines(text)


def serialize_facet_file(ff: FacetFile) -> str:
    body = "[" + ",".join("[" + ",".join(str(x) for x in f) + "]" for f in ff.facets) + "]"
    if ff.fmt == "BRACKET":
        prefix = f"{ff.name}:=" if ff.name else ""
        return prefix + body + ";\n"
    if ff.fmt == "JSON":
        return json.dumps(ff.facets) + "\n"
    if ff.fmt == "LINES":
        return "".join(" ".join(str(x) for x in f) + "\n" for f in ff.facets)
    raise ValueError(f"unknown format {ff.fmt!r}")


def load_complex(path: str | Path) -> tuple[SimplicialComplex, FacetFile]:
    text = Path(path).read_text()
    ff = parse_facet_file(text)
    return ff.complex(), ff


# -- JSON codecs ---------------------------------------------------------------


def dumps(obj, compact: bool = False) -> str:
    if compact:
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def input_hash(cx: SimplicialComplex) -> str:
    doc = sorted(sorted(cx.to_labels(f), key=repr) for f in cx.facets)
    return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()


def complex_to_json(cx: SimplicialComplex) -> dict:
    return {"facets": [list(cx.to_labels(f)) for f in cx.facets]}


def _label_map(cx: SimplicialComplex) -> dict[Label, int]:
    return {lab: v for v, lab in cx.labels.items()}


def simplex_from_labels(cx: SimplicialComplex, labels: list) -> Simplex:
    to_id = _label_map(cx)
    try:
        return tuple(sorted(to_id[x] for x in labels))
    except KeyError as missing:
        raise ValueError(f"unknown vertex label {missing}")


def matching_to_json(cx: SimplicialComplex, matching: Matching) -> list:
    return [[list(cx.to_labels(lo)), list(cx.to_labels(hi))]
            for lo, hi in matching.pairs]


def matching_pairs_from_json(cx: SimplicialComplex, doc) -> list[tuple[Simplex, Simplex]]:
    pairs = doc["pairs"] if isinstance(doc, dict) else doc
    return [(simplex_from_labels(cx, lo), simplex_from_labels(cx, hi))
            for lo, hi in pairs]


def classification_to_json(cx: SimplicialComplex,
                           classes: Mapping[int, VertexClass]) -> list:
    out = []
    for v in sorted(classes):
        cls = classes[v]
        entry: dict = {"vertex": cx.label_of(v)}
        if cls.critical:
            entry["kind"] = "strong-critical"
        else:
            entry["kind"] = "dominated"
            entry["witness"] = cx.label_of(cls.witness)
        out.append(entry)
    return out


def _key_members(key: Key) -> list:
    # singleton classes are simplex tuples; matched classes are pairs of them
    if key and isinstance(key[0], tuple):
        return [list(key[0]), list(key[1])]
    return [list(key)]


def poset_to_json(cx: SimplicialComplex, poset: FinitePoset) -> dict:
    def member_labels(key: Key) -> list:
        return [list(cx.to_labels(tuple(s))) for s in _key_members(key)]

    order = sorted(poset.elements, key=lambda e: (poset.grade_of(e) is None,
                                                  poset.grade_of(e) or 0,
                                                  repr(e)))
    index = {e: i for i, e in enumerate(order)}
    elements = [{"members": member_labels(e), "grade": poset.grade_of(e)}
                for e in order]
    covers = sorted([index[x], index[y]] for x, y in poset.cover_pairs())
    return {"elements": elements, "covers": covers}


def _step_to_json(cx: SimplicialComplex, step: Step) -> dict:
    if isinstance(step, StrongCollapse):
        return {"kind": "strong-collapse", "vertex": cx.label_of(step.vertex),
                "witness": cx.label_of(step.witness)}
    if isinstance(step, CriticalRemoval):
        return {"kind": "critical-removal", "vertex": cx.label_of(step.vertex),
                "star": [list(cx.to_labels(s)) for s in step.star]}
    if isinstance(step, WeakCollapse):
        return {"kind": "weak-collapse", "free_face": list(cx.to_labels(step.free_face)),
                "coface": list(cx.to_labels(step.coface))}
    if isinstance(step, FacetRemoval):
        return {"kind": "facet-removal", "facet": list(cx.to_labels(step.facet))}
    raise TypeError(f"unknown step {step!r}")


def _step_from_json(cx: SimplicialComplex, doc: dict) -> Step:
    to_id = _label_map(cx)
    kind = doc["kind"]
    if kind == "strong-collapse":
        return StrongCollapse(to_id[doc["vertex"]], to_id[doc["witness"]])
    if kind == "critical-removal":
        return CriticalRemoval(to_id[doc["vertex"]],
                               tuple(sorted(simplex_from_labels(cx, s)
                                            for s in doc["star"])))
    if kind == "weak-collapse":
        return WeakCollapse(simplex_from_labels(cx, doc["free_face"]),
                            simplex_from_labels(cx, doc["coface"]))
    if kind == "facet-removal":
        return FacetRemoval(simplex_from_labels(cx, doc["facet"]))
    raise ValueError(f"unknown step kind {kind!r}")


def trace_to_json(cx: SimplicialComplex, trace: ReductionTrace) -> dict:
    heights = None
    if trace.implied_heights is not None:
        heights = [[cx.label_of(v), h]
                   for v, h in sorted(trace.implied_heights.items())]
    return {
        "vertices": [cx.label_of(v) for v in trace.vertices],
        "steps": [_step_to_json(cx, s) for s in trace.steps],
        "matching": matching_to_json(cx, trace.final_matching),
        "critical": [list(cx.to_labels(s)) for s in sorted(trace.critical_set)],
        "implied_heights": heights,
    }


def trace_from_json(cx: SimplicialComplex, doc: dict) -> ReductionTrace:
    to_id = _label_map(cx)
    steps = tuple(_step_from_json(cx, s) for s in doc["steps"])
    matching = Matching(matching_pairs_from_json(cx, doc["matching"]))
    critical = frozenset(simplex_from_labels(cx, s) for s in doc["critical"])
    heights = None
    if doc.get("implied_heights") is not None:
        heights = {to_id[lab]: h for lab, h in doc["implied_heights"]}
    return ReductionTrace(tuple(sorted(to_id[lab] for lab in doc["vertices"])),
                          steps, matching, critical, heights)


def result_to_json(cx: SimplicialComplex, result: CoreResult,
                   canonical: bool = False) -> dict:
    doc = {
        "method": result.method,
        "input_hash": input_hash(cx),
        "sizes": [result.input_size, result.output_size],
        "core": complex_to_json(result.core) if result.core is not None else None,
        "critical_poset": (poset_to_json(cx, result.critical_poset)
                           if result.critical_poset is not None else None),
        "trace": trace_to_json(cx, result.trace),
    }
    if not canonical:
        doc["wall_time"] = result.wall_time
    return doc
