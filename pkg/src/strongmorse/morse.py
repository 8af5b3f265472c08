"""Acyclic matchings, discrete Morse functions, and vertex-level reductions.

The central construction turns a real-valued map on the vertices (a "height")
into an acyclic matching on the simplices.  Each vertex is classified by its
descending link: the link inside the sublevel complex spanned by vertices of
no larger height.  A vertex dominated there by a strictly lower vertex is
*descending dominated* and receives one fixed dominating witness; otherwise it
is *strong critical*.

Every simplex is governed by its highest vertex (ties broken towards the
larger id).  Simplices governed by a strong critical vertex are critical;
simplices governed by a dominated vertex are paired with their image under
adding/removing that vertex's witness.  For injective heights the critical set
is exactly the union of the descending open stars of the strong critical
vertices, and the matching is always acyclic.
"""
from __future__ import annotations

from dataclasses import dataclass
from heapq import heapify, heappop, heappush
from typing import Iterable, Mapping, Sequence

from .complexes import Simplex, SimplicialComplex, UnknownVertex
from .posets import InvalidMatching, MatchingNotAcyclic, face_poset, localization

Heights = Mapping[int, float]


class InvalidMorseFunction(Exception):
    pass


class IllegalCollapseStep(Exception):
    pass


def _as_pair(lo, hi) -> tuple[Simplex, Simplex]:
    lo, hi = tuple(lo), tuple(hi)
    if len(hi) == len(lo) + 1 and set(lo) < set(hi):
        return lo, hi
    if len(lo) == len(hi) + 1 and set(hi) < set(lo):
        return hi, lo
    raise InvalidMatching(f"({lo}, {hi}) is not a codimension-1 face pair")


class Matching:
    """A set of disjoint codimension-1 simplex pairs ``(lower, upper)``.

    Construction enforces the pairing shape (codimension 1, each simplex in at
    most one pair); acyclicity is a separate check, see ``validate_matching``.
    """

    __slots__ = ("_pairs", "_partner")

    def __init__(self, pairs: Iterable[tuple[Simplex, Simplex]] = ()):
        norm = sorted({_as_pair(lo, hi) for lo, hi in pairs})
        partner: dict[Simplex, Simplex] = {}
        for lo, hi in norm:
            for s, t in ((lo, hi), (hi, lo)):
                if s in partner:
                    raise InvalidMatching(f"simplex {s} appears in two pairs")
                partner[s] = t
        self._pairs = tuple(norm)
        self._partner = partner

    @property
    def pairs(self) -> tuple[tuple[Simplex, Simplex], ...]:
        return self._pairs

    def partner(self, s: Simplex) -> Simplex | None:
        return self._partner.get(tuple(s))

    def covers(self, s: Simplex) -> bool:
        return tuple(s) in self._partner

    def simplices(self) -> frozenset[Simplex]:
        return frozenset(self._partner)

    def __len__(self) -> int:
        return len(self._pairs)

    def __iter__(self):
        return iter(self._pairs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return self._pairs == other._pairs

    def __hash__(self) -> int:
        return hash(self._pairs)

    def __repr__(self) -> str:
        return f"Matching({len(self._pairs)} pairs)"


@dataclass(frozen=True)
class MatchingReport:
    pairing_valid: bool
    acyclic: bool
    problems: tuple[str, ...]
    witness_cycle: tuple[Simplex, ...] | None = None

    @property
    def ok(self) -> bool:
        return self.pairing_valid and self.acyclic


def validate_matching(cx: SimplicialComplex,
                      pairs: Iterable[tuple[Simplex, Simplex]]) -> MatchingReport:
    """Check pairing shape, membership, and acyclicity; never raises.

    Acyclicity is decided by cycle detection on the modified Hasse digraph:
    matched pairs point up, unmatched covers point down.  A directed cycle is
    returned as the witness.
    """
    problems: list[str] = []
    partner: dict[Simplex, Simplex] = {}
    for raw in pairs:
        lo, hi = tuple(raw[0]), tuple(raw[1])
        if lo not in cx or hi not in cx:
            problems.append(f"pair ({lo}, {hi}) leaves the complex")
            continue
        if not (len(hi) == len(lo) + 1 and set(lo) < set(hi)):
            problems.append(f"pair ({lo}, {hi}) is not a codimension-1 face pair")
            continue
        if lo in partner or hi in partner:
            problems.append(f"pair ({lo}, {hi}) reuses a matched simplex")
            continue
        partner[lo] = hi
        partner[hi] = lo
    pairing_valid = not problems
    # modified Hasse digraph
    succs: dict[Simplex, list[Simplex]] = {s: [] for s in cx.simplices()}
    for s in cx.simplices():
        if len(s) == 1:
            continue
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            if partner.get(f) == s:
                succs[f].append(s)
            else:
                succs[s].append(f)
    color: dict[Simplex, int] = {}
    parent: dict[Simplex, Simplex] = {}
    cycle: tuple[Simplex, ...] | None = None
    for root in cx.simplices():
        if cycle:
            break
        if color.get(root):
            continue
        stack = [(root, iter(succs[root]))]
        color[root] = 1
        while stack and not cycle:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                c = color.get(nxt, 0)
                if c == 0:
                    color[nxt] = 1
                    parent[nxt] = node
                    stack.append((nxt, iter(succs[nxt])))
                    advanced = True
                    break
                if c == 1:
                    path = [nxt, node]
                    cur = node
                    while cur != nxt:
                        cur = parent[cur]
                        path.append(cur)
                    path.reverse()
                    cycle = tuple(path[:-1])
                    break
            if not advanced and not cycle:
                color[node] = 2
                stack.pop()
    if cycle:
        problems.append(f"matching admits the directed cycle {cycle}")
    return MatchingReport(pairing_valid, cycle is None, tuple(problems), cycle)


# -- discrete Morse functions -------------------------------------------------


def _morse_set(cx: SimplicialComplex, values: Mapping[Simplex, float],
               s: Simplex) -> list[Simplex]:
    out = []
    for f in (s[:i] + s[i + 1:] for i in range(len(s))):
        if len(s) > 1 and values[f] >= values[s]:
            out.append(f)
    for t in cx.simplices(len(s)):
        if set(s) < set(t) and values[t] <= values[s]:
            out.append(t)
    return out


def _check_total(cx: SimplicialComplex, values: Mapping[Simplex, float]) -> None:
    for s in cx.simplices():
        if s not in values:
            raise InvalidMorseFunction(f"no value assigned to {s}")


def is_discrete_morse(cx: SimplicialComplex, values: Mapping[Simplex, float]) -> bool:
    """True when every simplex has at most one order-violating neighbour."""
    _check_total(cx, values)
    return all(len(_morse_set(cx, values, s)) <= 1 for s in cx.simplices())


def critical_simplices(cx: SimplicialComplex,
                       values: Mapping[Simplex, float]) -> frozenset[Simplex]:
    _check_total(cx, values)
    return frozenset(s for s in cx.simplices() if not _morse_set(cx, values, s))


def matching_from_morse(cx: SimplicialComplex,
                        values: Mapping[Simplex, float]) -> Matching:
    """The pairing of each simplex with its unique order-violating neighbour."""
    _check_total(cx, values)
    pairs = set()
    for s in cx.simplices():
        bad = _morse_set(cx, values, s)
        if len(bad) > 1:
            raise InvalidMorseFunction(f"{s} has two order-violating neighbours {bad}")
        if bad:
            pairs.add(_as_pair(s, bad[0]))
    return Matching(pairs)


def morse_from_matching(cx: SimplicialComplex, matching: Matching) -> dict[Simplex, int]:
    """Integer values from a linear extension of the quotient poset.

    Matched pairs share a value; values increase strictly along the extension,
    so the induced pairing is exactly ``matching``.
    """
    loc, class_map = localization(face_poset(cx), matching.pairs)
    index = {e: i for i, e in enumerate(loc.elements)}
    indeg = {e: len(loc.down_covers(e)) for e in loc.elements}
    ready = [(repr(e), e) for e in loc.elements if indeg[e] == 0]
    heapify(ready)
    rank: dict = {}
    while ready:
        _, e = heappop(ready)
        rank[e] = len(rank)
        for up in loc.up_covers(e):
            indeg[up] -= 1
            if indeg[up] == 0:
                heappush(ready, (repr(up), up))
    return {s: rank[class_map[s]] for s in cx.simplices()}


# -- vertex heights ------------------------------------------------------------


def sublevel_complex(cx: SimplicialComplex, heights: Heights,
                     alpha: float) -> SimplicialComplex:
    """Full subcomplex spanned by the vertices of height at most ``alpha``."""
    keep = [v for v in cx.vertices if heights[v] <= alpha]
    return cx.full_subcomplex(keep)


def _check_heights(cx: SimplicialComplex, heights: Heights) -> None:
    for v in cx.vertices:
        if v not in heights:
            raise UnknownVertex(f"no height assigned to vertex {v}")


def descending_star(cx: SimplicialComplex, heights: Heights, v: int) -> frozenset[Simplex]:
    """Open star of ``v`` in the sublevel complex at its own height."""
    _check_heights(cx, heights)
    return sublevel_complex(cx, heights, heights[v]).open_star(v)


def descending_link(cx: SimplicialComplex, heights: Heights, v: int) -> SimplicialComplex:
    _check_heights(cx, heights)
    return sublevel_complex(cx, heights, heights[v]).link(v)


@dataclass(frozen=True)
class VertexClass:
    critical: bool
    witness: int | None = None


def classify_vertices(cx: SimplicialComplex, heights: Heights) -> dict[int, VertexClass]:
    """Tag each vertex strong critical or descending dominated with a witness.

    The witness is the dominating vertex of strictly smaller height that is
    latest in the (height, id) order; only the order type of the heights
    matters, never their actual values.
    """
    _check_heights(cx, heights)
    out: dict[int, VertexClass] = {}
    for v in cx.vertices:
        sub = sublevel_complex(cx, heights, heights[v])
        doms = [a for a in sub.dominating_vertices(v) if heights[a] < heights[v]]
        if doms:
            witness = max(doms, key=lambda a: (heights[a], a))
            out[v] = VertexClass(False, witness)
        else:
            out[v] = VertexClass(True)
    return out


def _governing_vertex(s: Simplex, heights: Heights) -> int:
    return max(s, key=lambda v: (heights[v], v))


def matching_from_vertex_function(
        cx: SimplicialComplex, heights: Heights,
        classes: Mapping[int, VertexClass] | None = None,
) -> tuple[Matching, frozenset[Simplex]]:
    """Acyclic matching and critical set induced by a vertex height map.

    Each simplex is handled by its governing (highest) vertex ``w``: critical
    when ``w`` is strong critical, otherwise paired through the witness ``a``
    of ``w`` as ``(s - a, s)`` or ``(s, s + a)``.  Pairs partition the
    non-critical simplices, so ``2 * len(matching) + len(critical)`` equals the
    total simplex count.  For injective heights the critical set equals the
    union of descending open stars of the strong critical vertices.
    """
    if classes is None:
        classes = classify_vertices(cx, heights)
    pairs: set[tuple[Simplex, Simplex]] = set()
    critical: set[Simplex] = set()
    for s in cx.simplices():
        w = _governing_vertex(s, heights)
        cls = classes[w]
        if cls.critical:
            critical.add(s)
            continue
        a = cls.witness
        if a in s:
            pairs.add((tuple(x for x in s if x != a), s))
        else:
            pairs.add((s, tuple(sorted(s + (a,)))))
    return Matching(pairs), frozenset(critical)


def matching_from_collapse_sequence(
        cx: SimplicialComplex,
        steps: Sequence[tuple[Simplex, Simplex]]) -> Matching:
    """The matching formed by a legal elementary collapse sequence.

    Each step must remove a free face together with its unique proper coface
    from the current complex; an illegal step raises ``IllegalCollapseStep``.
    """
    alive = set(cx.simplices())
    pairs = []
    for raw in steps:
        lo, hi = tuple(raw[0]), tuple(raw[1])
        if lo not in alive or hi not in alive:
            raise IllegalCollapseStep(f"({lo}, {hi}) not present any more")
        if not (len(hi) == len(lo) + 1 and set(lo) < set(hi)):
            raise IllegalCollapseStep(f"({lo}, {hi}) is not a codimension-1 pair")
        cofaces = {t for t in alive if len(t) == len(lo) + 1 and set(lo) < set(t)}
        if cofaces != {hi}:
            raise IllegalCollapseStep(f"{lo} is not free: cofaces {sorted(cofaces)}")
        if any(len(t) > len(hi) and set(hi) < set(t) for t in alive):
            raise IllegalCollapseStep(f"{hi} is not maximal")
        alive.discard(lo)
        alive.discard(hi)
        pairs.append((lo, hi))
    return Matching(pairs)
