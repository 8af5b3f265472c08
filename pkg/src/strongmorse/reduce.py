"""Randomized reduction engines with replayable traces.

Four engines are provided: the minimal strong core (remove random dominated
vertices until none remain), the minimal weak core (perform random elementary
collapses until no free face remains), the strong internal core (vertex
removal with on-the-fly matching construction, followed by the quotient and
critical poset on the original face poset), and the combined strategy (weak
core first, then the strong internal core of the result, with the union
matching validated on the original complex).

Every engine returns a ``CoreResult`` whose trace replays deterministically:
equal seeds give identical traces, matchings, posets, and serialized reports.
"""
from __future__ import annotations

import hashlib
import random
import time
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .complexes import Simplex, SimplicialComplex
from .morse import Matching, validate_matching
from .posets import FinitePoset, MatchingNotAcyclic, critical_subposet, face_poset, localization


class UnsupportedTrace(Exception):
    pass


class ReplayError(Exception):
    pass


class Rng:
    """Deterministic random stream, splittable into per-iteration substreams."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._random = random.Random(self.seed)

    def split(self, index: int) -> "Rng":
        digest = hashlib.sha256(f"{self.seed}:{index}".encode()).digest()
        return Rng(int.from_bytes(digest[:8], "big"))

    def shuffle(self, seq: Iterable) -> list:
        items = list(seq)
        self._random.shuffle(items)
        return items

    def choice(self, seq: Sequence):
        return seq[self._random.randrange(len(seq))]


@dataclass(frozen=True)
class StrongCollapse:
    vertex: int
    witness: int


@dataclass(frozen=True)
class CriticalRemoval:
    vertex: int
    star: tuple[Simplex, ...]


@dataclass(frozen=True)
class WeakCollapse:
    free_face: Simplex
    coface: Simplex


@dataclass(frozen=True)
class FacetRemoval:
    facet: Simplex


Step = Union[StrongCollapse, CriticalRemoval, WeakCollapse, FacetRemoval]


@dataclass(frozen=True)
class ReductionTrace:
    """Ordered record of a reduction run, sufficient to replay it exactly."""

    vertices: tuple[int, ...]
    steps: tuple[Step, ...]
    final_matching: Matching
    critical_set: frozenset[Simplex]
    implied_heights: Mapping[int, int] | None = None


@dataclass
class CoreResult:
    method: str
    core: SimplicialComplex | None
    critical_poset: FinitePoset | None
    trace: ReductionTrace
    input_size: int
    output_size: int
    wall_time: float = 0.0

    @property
    def sizes(self) -> tuple[int, int]:
        return (self.input_size, self.output_size)


def strong_collapse_pairs(cx: SimplicialComplex, v: int, a: int) -> list[tuple[Simplex, Simplex]]:
    """Matched pairs of the elementary strong collapse removing ``v`` towards ``a``.

    Every simplex through ``v`` avoiding ``a`` is paired with its extension by
    ``a``; together the pairs exhaust the open star of ``v``.
    """
    pairs = []
    for s in cx.open_star(v):
        if a not in s:
            pairs.append((s, tuple(sorted(s + (a,)))))
    return sorted(pairs)


def vertex_function_from_trace(trace: ReductionTrace) -> dict[int, int]:
    """Heights from removal order: removed earlier means strictly larger.

    Vertices surviving the trace sit at height 0.  Only vertex-removal steps
    are supported; traces with collapse or facet steps raise
    ``UnsupportedTrace``.
    """
    removed = []
    for step in trace.steps:
        if not isinstance(step, (StrongCollapse, CriticalRemoval)):
            raise UnsupportedTrace(f"step {step} is not a vertex removal")
        removed.append(step.vertex)
    n = len(removed)
    heights = {v: 0 for v in trace.vertices}
    for i, v in enumerate(removed):
        heights[v] = n - i
    return heights


def minimal_strong_core(cx: SimplicialComplex, rng: Rng) -> CoreResult:
    """Remove uniformly random dominated vertices until none are left.

    The result is the unique (up to isomorphism) subcomplex without dominated
    vertices; the accumulated pairs form an acyclic matching on the original
    face poset whose critical set is the core.
    """
    start = time.perf_counter()
    current = cx
    steps: list[Step] = []
    pairs: list[tuple[Simplex, Simplex]] = []
    while True:
        dominated = [v for v in current.vertices if current.dominating_vertices(v)]
        if not dominated:
            break
        v = rng.choice(sorted(dominated))
        a = rng.choice(sorted(current.dominating_vertices(v)))
        pairs.extend(strong_collapse_pairs(current, v, a))
        steps.append(StrongCollapse(v, a))
        current = current.remove_vertex(v)
    trace = ReductionTrace(cx.vertices, tuple(steps), Matching(pairs),
                           frozenset(current.simplices()))
    trace = _with_heights(trace)
    return CoreResult("strong-core", current, None, trace, len(cx), len(current),
                      time.perf_counter() - start)


def _with_heights(trace: ReductionTrace) -> ReductionTrace:
    return ReductionTrace(trace.vertices, trace.steps, trace.final_matching,
                          trace.critical_set, vertex_function_from_trace(trace))


def _free_pairs(simplices: set[Simplex]) -> list[tuple[Simplex, Simplex]]:
    """All (free face, unique proper coface) pairs of the current complex."""
    cofaces: dict[Simplex, list[Simplex]] = {s: [] for s in simplices}
    for s in simplices:
        if len(s) == 1:
            continue
        for i in range(len(s)):
            cofaces[s[:i] + s[i + 1:]].append(s)
    out = []
    for s, cfs in cofaces.items():
        if len(cfs) == 1 and not cofaces[cfs[0]]:
            out.append((s, cfs[0]))
    return sorted(out)


def minimal_weak_core(cx: SimplicialComplex, rng: Rng) -> CoreResult:
    """Perform uniformly random elementary collapses until no free face remains."""
    start = time.perf_counter()
    alive = set(cx.simplices())
    steps: list[Step] = []
    pairs: list[tuple[Simplex, Simplex]] = []
    while True:
        free = _free_pairs(alive)
        if not free:
            break
        s, t = rng.choice(free)
        alive.discard(s)
        alive.discard(t)
        steps.append(WeakCollapse(s, t))
        pairs.append((s, t))
    core = SimplicialComplex.from_simplices(alive, cx.labels)
    trace = ReductionTrace(cx.vertices, tuple(steps), Matching(pairs), frozenset(alive))
    return CoreResult("weak-core", core, None, trace, len(cx), len(core),
                      time.perf_counter() - start)


def strong_morse_reduction(cx: SimplicialComplex, rng: Rng,
                           ) -> tuple[frozenset[Simplex], Matching, ReductionTrace]:
    """Randomized vertex-removal reduction producing a matching and critical set.

    Each round shuffles the surviving vertices once; the first dominated vertex
    in that order is strong-collapsed (with a random dominating witness),
    pairing every simplex through it that avoids the witness with its
    extension.  If no vertex is dominated, the first vertex of the shuffle is
    removed as critical and its whole open star joins the critical set.  The
    rounds repeat on the remaining full subcomplex until nothing is left, so
    the pairs and critical simplices partition the input complex.
    """
    current = cx
    steps: list[Step] = []
    pairs: list[tuple[Simplex, Simplex]] = []
    critical: set[Simplex] = set()
    while current.vertices:
        order = rng.shuffle(sorted(current.vertices))
        chosen = None
        for v in order:
            doms = current.dominating_vertices(v)
            if doms:
                chosen = (v, rng.choice(sorted(doms)))
                break
        if chosen is not None:
            v, a = chosen
            pairs.extend(strong_collapse_pairs(current, v, a))
            steps.append(StrongCollapse(v, a))
        else:
            v = order[0]
            star = tuple(sorted(current.open_star(v)))
            critical.update(star)
            steps.append(CriticalRemoval(v, star))
        current = current.remove_vertex(v)
    trace = _with_heights(ReductionTrace(cx.vertices, tuple(steps), Matching(pairs),
                                         frozenset(critical)))
    return trace.critical_set, trace.final_matching, trace


def _critical_poset(cx: SimplicialComplex, matching: Matching,
                    critical: frozenset[Simplex]) -> FinitePoset:
    loc, class_map = localization(face_poset(cx), matching.pairs)
    return critical_subposet(loc, class_map, critical)


def strong_internal_core(cx: SimplicialComplex, rng: Rng) -> CoreResult:
    """Reduce and return the critical poset over the original face poset.

    The matching produced by the reduction is acyclic by construction;
    ``MatchingNotAcyclic`` here would indicate an internal inconsistency.
    """
    start = time.perf_counter()
    critical, matching, trace = strong_morse_reduction(cx, rng)
    poset = _critical_poset(cx, matching, critical)
    return CoreResult("strong-internal", None, poset, trace, len(cx), len(poset),
                      time.perf_counter() - start)


def combined_reduction(cx: SimplicialComplex, rng: Rng) -> CoreResult:
    """Weak core first, then the strong internal core of the result.

    The union of the collapse pairing and the internal matching is validated
    as an acyclic matching on the original face poset, and the critical poset
    is computed there.
    """
    start = time.perf_counter()
    weak = minimal_weak_core(cx, rng)
    critical, internal, inner_trace = strong_morse_reduction(weak.core, rng)
    union = Matching(weak.trace.final_matching.pairs + internal.pairs)
    report = validate_matching(cx, union.pairs)
    if not report.ok:
        raise MatchingNotAcyclic(
            f"combined matching failed validation: {report.problems}",
            report.witness_cycle or ())
    poset = _critical_poset(cx, union, critical)
    steps = weak.trace.steps + inner_trace.steps
    trace = ReductionTrace(cx.vertices, steps, union, critical)
    return CoreResult("weak-then-strong", None, poset, trace, len(cx), len(poset),
                      time.perf_counter() - start)


ENGINES = {
    "strong-core": minimal_strong_core,
    "weak-core": minimal_weak_core,
    "strong-internal": strong_internal_core,
    "weak-then-strong": combined_reduction,
}


def reduce_complex(cx: SimplicialComplex, method: str, rng: Rng) -> CoreResult:
    try:
        engine = ENGINES[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(ENGINES)}")
    return engine(cx, rng)


def replay_trace(cx: SimplicialComplex, trace: ReductionTrace) -> CoreResult:
    """Re-execute a trace step by step, checking each step is legal.

    Returns a fresh ``CoreResult`` recomputed from the steps alone.  The
    final matching and critical set must reproduce the recorded ones;
    any illegal or diverging step raises ``ReplayError``.
    """
    current = cx
    pairs: list[tuple[Simplex, Simplex]] = []
    critical: set[Simplex] = set()
    alive: set[Simplex] | None = None
    saw_weak = False
    for step in trace.steps:
        if isinstance(step, WeakCollapse):
            saw_weak = True
            if alive is None:
                alive = set(current.simplices())
            s, t = step.free_face, step.coface
            cofs = {u for u in alive if len(u) == len(s) + 1 and set(s) < set(u)}
            if s not in alive or cofs != {t} or any(
                    len(u) > len(t) and set(t) < set(u) for u in alive):
                raise ReplayError(f"collapse step ({s}, {t}) is illegal")
            alive.discard(s)
            alive.discard(t)
            pairs.append((s, t))
            continue
        if alive is not None:
            current = SimplicialComplex.from_simplices(alive, cx.labels)
            alive = None
        if isinstance(step, StrongCollapse):
            v, a = step.vertex, step.witness
            if a not in current.dominating_vertices(v):
                raise ReplayError(f"vertex {v} is not dominated by {a}")
            pairs.extend(strong_collapse_pairs(current, v, a))
            current = current.remove_vertex(v)
        elif isinstance(step, CriticalRemoval):
            v = step.vertex
            star = tuple(sorted(current.open_star(v)))
            if star != tuple(sorted(step.star)):
                raise ReplayError(f"recorded star of {v} diverges")
            critical.update(star)
            current = current.remove_vertex(v)
        elif isinstance(step, FacetRemoval):
            s = tuple(step.facet)
            if s not in set(current.facets):
                raise ReplayError(f"{s} is not a maximal simplex")
            critical.add(s)
            current = SimplicialComplex.from_simplices(
                set(current.simplices()) - {s}, cx.labels)
        else:
            raise ReplayError(f"unknown step {step!r}")
    if alive is not None:
        current = SimplicialComplex.from_simplices(alive, cx.labels)
    survivors = frozenset(current.simplices())
    matching = Matching(pairs)
    expected = frozenset(critical) | survivors
    if matching != trace.final_matching:
        raise ReplayError("replayed matching differs from the recorded one")
    if expected != trace.critical_set:
        raise ReplayError("replayed critical set differs from the recorded one")
    if survivors:
        method = "weak-core" if saw_weak else "strong-core"
        return CoreResult(method, current, None, trace, len(cx), len(current))
    method = "weak-then-strong" if saw_weak else "strong-internal"
    poset = _critical_poset(cx, matching, expected)
    return CoreResult(method, None, poset, trace, len(cx), len(poset))
