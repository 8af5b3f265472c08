"""Finite posets: face posets, quotients by matchings, order complexes.

Element keys are arbitrary hashable values; for face posets they are simplex
tuples and for quotient classes either a simplex tuple (singleton class) or an
ordered pair ``(lower, upper)`` of matched simplices.  Reachability is cached
as bitmasks at construction time, so reads are cheap and thread-safe.

The quotient construction interprets "poset with the projected relations" as:
take the preorder generated by the projected cover pairs and fail if it is not
antisymmetric.  Antisymmetry failure is exactly how an invalid (cyclic)
matching manifests, and callers receive ``MatchingNotAcyclic`` with a witness.
"""
from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Sequence

import networkx as nx

from .complexes import Simplex, SimplicialComplex

Key = Hashable


class PosetError(Exception):
    pass


class PosetCycleError(PosetError):
    """The given relations are not antisymmetric; carries a witness cycle."""

    def __init__(self, message: str, cycle: tuple[Key, ...] = ()):
        super().__init__(message)
        self.cycle = cycle


class MatchingNotAcyclic(PosetError):
    def __init__(self, message: str, cycle: tuple[Key, ...] = ()):
        super().__init__(message)
        self.cycle = cycle


class InvalidMatching(PosetError):
    pass


class CriticalSimplexWasMatched(PosetError):
    pass


class NotGraded(PosetError):
    pass


class SizeLimitExceeded(PosetError):
    pass


def _canon(key: Key) -> str:
    return repr(key)


def _popcount(x: int) -> int:
    return x.bit_count()


class FinitePoset:
    """Immutable finite poset given by elements and irredundant cover pairs."""

    __slots__ = ("_elements", "_index", "_up", "_down", "_above", "_below", "_grade")

    def __init__(self, elements: Sequence[Key], up_covers: Mapping[int, tuple[int, ...]],
                 above: Sequence[int], grade: Mapping[Key, int] | None):
        # Internal: use from_covers / from_relations.
        self._elements = tuple(elements)
        self._index = {e: i for i, e in enumerate(self._elements)}
        self._up = {i: tuple(up_covers.get(i, ())) for i in range(len(self._elements))}
        down: dict[int, list[int]] = {i: [] for i in range(len(self._elements))}
        for i, ups in self._up.items():
            for j in ups:
                down[j].append(i)
        self._down = {i: tuple(sorted(js)) for i, js in down.items()}
        self._above = tuple(above)
        below = [0] * len(self._elements)
        for i, mask in enumerate(self._above):
            m = mask
            while m:
                j = (m & -m).bit_length() - 1
                below[j] |= 1 << i
                m &= m - 1
        self._below = tuple(below)
        self._grade = dict(grade) if grade else None

    # -- constructors ----------------------------------------------------

    @staticmethod
    def _toposort(n: int, succs: Mapping[int, Iterable[int]]) -> list[int]:
        indeg = [0] * n
        for i in range(n):
            for j in succs.get(i, ()):
                indeg[j] += 1
        stack = [i for i in range(n) if indeg[i] == 0]
        order = []
        while stack:
            i = stack.pop()
            order.append(i)
            for j in succs.get(i, ()):
                indeg[j] -= 1
                if indeg[j] == 0:
                    stack.append(j)
        return order if len(order) == n else []

    @staticmethod
    def _find_cycle(n: int, succs: Mapping[int, Iterable[int]]) -> list[int]:
        color = [0] * n
        parent: dict[int, int] = {}
        for root in range(n):
            if color[root]:
                continue
            stack = [(root, iter(succs.get(root, ())))]
            color[root] = 1
            while stack:
                node, it = stack[-1]
                advanced = False
                for j in it:
                    if color[j] == 0:
                        color[j] = 1
                        parent[j] = node
                        stack.append((j, iter(succs.get(j, ()))))
                        advanced = True
                        break
                    if color[j] == 1:
                        cyc = [j, node]
                        cur = node
                        while cur != j:
                            cur = parent[cur]
                            cyc.append(cur)
                        cyc.reverse()
                        return cyc[:-1]
                if not advanced:
                    color[node] = 2
                    stack.pop()
        return []

    @classmethod
    def _build(cls, elements: Sequence[Key], edges: set[tuple[int, int]],
               grade) -> "FinitePoset":
        n = len(elements)
        succs: dict[int, list[int]] = {}
        for i, j in edges:
            succs.setdefault(i, []).append(j)
        order = cls._toposort(n, succs)
        if not order:
            cyc = cls._find_cycle(n, succs)
            keys = tuple(elements[i] for i in cyc)
            raise PosetCycleError(f"relation graph has a cycle through {keys}", keys)
        above = [0] * n
        for i in reversed(order):
            m = 0
            for j in succs.get(i, ()):
                m |= above[j] | (1 << j)
            above[i] = m
        covers: dict[int, list[int]] = {}
        for i in range(n):
            cand = above[i]
            bad = 0
            m = cand
            while m:
                j = (m & -m).bit_length() - 1
                bad |= above[j]
                m &= m - 1
            cov = cand & ~bad
            js = []
            while cov:
                j = (cov & -cov).bit_length() - 1
                js.append(j)
                cov &= cov - 1
            covers[i] = js
        up = {i: tuple(sorted(covers.get(i, ()))) for i in range(n)}
        return cls(elements, up, above, grade)

    @classmethod
    def from_covers(cls, elements: Iterable[Key], covers: Iterable[tuple[Key, Key]],
                    grade: Mapping[Key, int] | None = None) -> "FinitePoset":
        """Build from cover pairs ``x < y``; redundant covers are reduced away."""
        elements = sorted(set(elements), key=_canon)
        index = {e: i for i, e in enumerate(elements)}
        edges = {(index[x], index[y]) for x, y in covers}
        return cls._build(elements, edges, grade)

    @classmethod
    def from_relations(cls, elements: Iterable[Key], relations: Iterable[tuple[Key, Key]],
                       grade: Mapping[Key, int] | None = None) -> "FinitePoset":
        """Build from arbitrary strict relations ``x < y``.

        The order is the transitive closure; a failure of antisymmetry raises
        ``PosetCycleError`` with a witness cycle.
        """
        return cls.from_covers(elements, relations, grade)

    # -- queries -----------------------------------------------------------

    @property
    def elements(self) -> tuple[Key, ...]:
        return self._elements

    def __len__(self) -> int:
        return len(self._elements)

    def __contains__(self, key: Key) -> bool:
        return key in self._index

    def __repr__(self) -> str:
        return f"FinitePoset({len(self)} elements, {len(self.cover_pairs())} covers)"

    def grade_of(self, key: Key) -> int | None:
        if self._grade is None:
            return None
        return self._grade.get(key)

    @property
    def grades(self) -> dict[Key, int] | None:
        return dict(self._grade) if self._grade is not None else None

    def cover_pairs(self) -> tuple[tuple[Key, Key], ...]:
        out = []
        for i, ups in self._up.items():
            for j in ups:
                out.append((self._elements[i], self._elements[j]))
        return tuple(sorted(out, key=lambda p: (_canon(p[0]), _canon(p[1]))))

    def up_covers(self, key: Key) -> tuple[Key, ...]:
        return tuple(self._elements[j] for j in self._up[self._index[key]])

    def down_covers(self, key: Key) -> tuple[Key, ...]:
        return tuple(self._elements[j] for j in self._down[self._index[key]])

    def above(self, key: Key) -> frozenset[Key]:
        """All elements strictly greater than ``key``."""
        m = self._above[self._index[key]]
        return frozenset(self._elements[j] for j in self._bits(m))

    def below(self, key: Key) -> frozenset[Key]:
        m = self._below[self._index[key]]
        return frozenset(self._elements[j] for j in self._bits(m))

    @staticmethod
    def _bits(m: int):
        while m:
            j = (m & -m).bit_length() - 1
            yield j
            m &= m - 1

    def le(self, x: Key, y: Key) -> bool:
        if x == y:
            return x in self._index
        return bool(self._above[self._index[x]] & (1 << self._index[y]))

    def lt(self, x: Key, y: Key) -> bool:
        return x != y and self.le(x, y)

    def minimal_elements(self) -> tuple[Key, ...]:
        return tuple(e for i, e in enumerate(self._elements) if not self._down[i])

    def maximal_elements(self) -> tuple[Key, ...]:
        return tuple(e for i, e in enumerate(self._elements) if not self._up[i])

    def maximal_chains(self) -> list[tuple[Key, ...]]:
        """All saturated chains from a minimal to a maximal element."""
        chains: list[tuple[Key, ...]] = []
        idx_min = [self._index[e] for e in self.minimal_elements()]
        stack: list[tuple[int, list[int]]] = [(i, [i]) for i in idx_min]
        while stack:
            node, path = stack.pop()
            ups = self._up[node]
            if not ups:
                chains.append(tuple(self._elements[k] for k in path))
                continue
            for j in ups:
                stack.append((j, path + [j]))
        return chains

    def chain_count_by_size(self) -> dict[int, int]:
        """Number of totally ordered subsets of each size (size >= 1)."""
        n = len(self._elements)
        order = self._toposort(n, self._up)
        counts: dict[int, dict[int, int]] = {}
        totals: dict[int, int] = {}
        for i in order:
            c = {1: 1}
            for j in self._bits(self._below[i]):
                for size, cnt in counts[j].items():
                    c[size + 1] = c.get(size + 1, 0) + cnt
            counts[i] = c
            for size, cnt in c.items():
                totals[size] = totals.get(size, 0) + cnt
        return totals

    def isomorphism_digraph(self) -> "nx.DiGraph":
        g = nx.DiGraph()
        for i, e in enumerate(self._elements):
            g.add_node(i, grade=self.grade_of(e))
        for i, ups in self._up.items():
            for j in ups:
                g.add_edge(i, j)
        return g


def face_poset(cx: SimplicialComplex) -> FinitePoset:
    """All simplices ordered by the face relation, graded by dimension."""
    elements = list(cx.simplices())
    covers = []
    for s in elements:
        if len(s) > 1:
            for i in range(len(s)):
                covers.append((s[:i] + s[i + 1:], s))
    grade = {s: len(s) - 1 for s in elements}
    return FinitePoset.from_covers(elements, covers, grade)


def localization(poset: FinitePoset, pairs: Iterable[tuple[Key, Key]],
                 ) -> tuple[FinitePoset, dict[Key, Key]]:
    """Quotient ``poset`` by identifying each matched pair.

    ``pairs`` must be disjoint cover pairs of ``poset``.  The quotient order is
    the transitive closure of the projected cover relations; if that relation
    is not antisymmetric the matching is cyclic and ``MatchingNotAcyclic`` is
    raised with a witness cycle of classes.
    """
    pairs = [tuple(p) for p in pairs]
    seen: set[Key] = set()
    class_map: dict[Key, Key] = {e: e for e in poset.elements}
    for lo, hi in pairs:
        if lo not in poset or hi not in poset:
            raise InvalidMatching(f"pair ({lo}, {hi}) not in poset")
        if hi not in poset.up_covers(lo):
            raise InvalidMatching(f"pair ({lo}, {hi}) is not a cover relation")
        if lo in seen or hi in seen:
            raise InvalidMatching(f"pair ({lo}, {hi}) reuses a matched element")
        seen.update((lo, hi))
        class_map[lo] = class_map[hi] = (lo, hi)
    elements = sorted(set(class_map.values()), key=_canon)
    projected = set()
    for x, y in poset.cover_pairs():
        cx_, cy_ = class_map[x], class_map[y]
        if cx_ != cy_:
            projected.add((cx_, cy_))
    grade = {}
    for e in elements:
        if e in poset:
            g = poset.grade_of(e)
            if g is not None:
                grade[e] = g
    try:
        loc = FinitePoset.from_relations(elements, projected, grade or None)
    except PosetCycleError as err:
        raise MatchingNotAcyclic(
            f"matching is not acyclic: quotient relation has cycle {err.cycle}",
            err.cycle) from err
    return loc, class_map


def critical_subposet(loc: FinitePoset, class_map: Mapping[Key, Key],
                      critical: Iterable[Key]) -> FinitePoset:
    """Subposet of the quotient induced by the (unmatched) critical elements.

    The induced order uses full reachability in the quotient, not just the
    projected covers: relations between critical classes may only exist through
    chains of matched classes.
    """
    critical = sorted(set(critical), key=_canon)
    for c in critical:
        if class_map.get(c, c) != c:
            raise CriticalSimplexWasMatched(f"critical element {c} is matched")
        if c not in loc:
            raise CriticalSimplexWasMatched(f"critical element {c} missing from quotient")
    crit_set = set(critical)
    relations = []
    for c in critical:
        for other in loc.above(c):
            if other in crit_set:
                relations.append((c, other))
    grade = {c: loc.grade_of(c) for c in critical if loc.grade_of(c) is not None}
    return FinitePoset.from_relations(critical, relations, grade or None)


def order_complex(poset: FinitePoset) -> SimplicialComplex:
    """The complex of chains; facets are the maximal chains."""
    keys = sorted(poset.elements, key=_canon)
    index = {k: i for i, k in enumerate(keys)}
    facets = [tuple(sorted(index[k] for k in chain)) for chain in poset.maximal_chains()]
    return SimplicialComplex.from_simplices(facets, {i: k for k, i in index.items()})


class ThinnessReport:
    """Outcome of the length-two interval check, with the first violation."""

    __slots__ = ("ok", "violation")

    def __init__(self, ok: bool, violation: tuple[Key | None, Key, int] | None = None):
        self.ok = ok
        self.violation = violation

    def __bool__(self) -> bool:
        return self.ok

    def __repr__(self) -> str:
        return f"ThinnessReport(ok={self.ok}, violation={self.violation})"


def is_thin_with_bottom(poset: FinitePoset) -> ThinnessReport:
    """Check that every length-2 interval of ``poset + bottom`` has 4 elements.

    This is a necessary condition for being the face poset of a regular
    CW-complex.  The poset must be graded by cell dimension: every cover must
    raise the grade by exactly one and minimal elements must have grade 0 (the
    virtual bottom sits at grade -1); otherwise ``NotGraded`` is raised.
    """
    grades = poset.grades
    if grades is None or any(poset.grade_of(e) is None for e in poset.elements):
        raise NotGraded("poset carries no total dimension grading")
    for x, y in poset.cover_pairs():
        if grades[y] - grades[x] != 1:
            raise NotGraded(f"cover {x} < {y} jumps grade by {grades[y] - grades[x]}")
    for e in poset.minimal_elements():
        if grades[e] != 0:
            raise NotGraded(f"minimal element {e} has grade {grades[e]}, expected 0")
    for y in poset.elements:
        below = poset.below(y)
        for x in below:
            if grades[y] - grades[x] == 2:
                above_x = poset.above(x)
                mid = sum(1 for z in below if z in above_x)
                if mid != 2:
                    return ThinnessReport(False, (x, y, mid))
        if grades[y] == 1:
            mid = len(below)
            if mid != 2:
                return ThinnessReport(False, (None, y, mid))
    return ThinnessReport(True)


def are_isomorphic(p: FinitePoset, q: FinitePoset, size_limit: int = 200) -> bool:
    """Order-isomorphism of small posets (grade-preserving when graded)."""
    if len(p) > size_limit or len(q) > size_limit:
        raise SizeLimitExceeded(f"posets exceed the {size_limit}-element limit")
    if len(p) != len(q) or len(p.cover_pairs()) != len(q.cover_pairs()):
        return False

    def profile(poset: FinitePoset):
        return sorted((poset.grade_of(e), len(poset.up_covers(e)), len(poset.down_covers(e)))
                      for e in poset.elements)

    try:
        if profile(p) != profile(q):
            return False
    except TypeError:
        # mixed None grades; fall through to the full check
        pass
    matcher = nx.algorithms.isomorphism.DiGraphMatcher(
        p.isomorphism_digraph(), q.isomorphism_digraph(),
        node_match=lambda a, b: a.get("grade") == b.get("grade"))
    return matcher.is_isomorphic()
