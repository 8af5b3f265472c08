"""Finite abstract simplicial complexes stored by facets.

A simplex is a sorted tuple of integer vertex ids.  ``SimplicialComplex.from_facets``
normalizes arbitrary input labels (integers or strings) to dense 0-based ids and
remembers the original labels for reporting.  Complexes derived from an existing one
(links, vertex deletions, full subcomplexes) stay in the parent's id space, so vertex
sets remain directly comparable across operations; ids of a derived subcomplex are
therefore not necessarily dense.

All values are immutable after construction and safe to share across threads.
"""
from __future__ import annotations

from itertools import combinations
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

Simplex = tuple[int, ...]
Label = Hashable


class ComplexError(Exception):
    """Base class for simplicial complex errors."""


class EmptyFacet(ComplexError):
    pass


class DuplicateVertexInFacet(ComplexError):
    pass


class UnknownVertex(ComplexError):
    pass


class UnknownSimplex(ComplexError):
    pass


def simplex(vertices: Iterable[int]) -> Simplex:
    """Sorted duplicate-free vertex tuple; raises on duplicates or emptiness."""
    vs = tuple(sorted(vertices))
    if not vs:
        raise EmptyFacet("a simplex needs at least one vertex")
    for i in range(len(vs) - 1):
        if vs[i] == vs[i + 1]:
            raise DuplicateVertexInFacet(f"vertex {vs[i]} repeated in {vs}")
    return vs


def facets_of_faces(s: Simplex) -> Iterator[Simplex]:
    """The codimension-1 faces of ``s`` (empty for vertices)."""
    if len(s) == 1:
        return
    for i in range(len(s)):
        yield s[:i] + s[i + 1:]


def closure(simplices: Iterable[Simplex]) -> frozenset[Simplex]:
    """All non-empty faces of the given simplices."""
    out: set[Simplex] = set()
    for s in simplices:
        for k in range(1, len(s) + 1):
            out.update(combinations(s, k))
    return frozenset(out)


def retract_simplex(s: Simplex, v: int, a: int) -> Simplex:
    """Replace ``v`` by ``a`` in ``s`` (identity when v is absent).

    The image is sorted with duplicates merged; the dimension drops by one
    exactly when both v and a lie in ``s``.
    """
    if v == a:
        raise ValueError("retraction endpoints must differ")
    if v not in s:
        return s
    return tuple(sorted(set(s) - {v} | {a}))


def _maximal(simplices: Iterable[Simplex]) -> tuple[Simplex, ...]:
    """Filter a simplex family down to its inclusion-maximal members."""
    by_size = sorted(set(simplices), key=len, reverse=True)
    kept: list[frozenset[int]] = []
    out: list[Simplex] = []
    for s in by_size:
        fs = frozenset(s)
        if any(fs <= k for k in kept):
            continue
        kept.append(fs)
        out.append(s)
    return tuple(sorted(out, key=lambda s: (len(s), s)))


def _label_sort_key(label: Label):
    # integers first (numeric order), then strings, then anything else by repr
    if isinstance(label, bool) or not isinstance(label, (int, str)):
        return (2, repr(label))
    if isinstance(label, int):
        return (0, label)
    return (1, label)


class SimplicialComplex:
    """Finite abstract simplicial complex with an eager simplex enumeration."""

    __slots__ = ("_facets", "_labels", "_by_dim", "_all", "_vertices")

    def __init__(self, facets: Iterable[Simplex], labels: Mapping[int, Label]):
        # Internal constructor: facets must already be simplices over int ids.
        self._facets = _maximal(facets)
        self._all = closure(self._facets)
        by_dim: dict[int, list[Simplex]] = {}
        for s in self._all:
            by_dim.setdefault(len(s) - 1, []).append(s)
        self._by_dim = {d: tuple(sorted(ss)) for d, ss in by_dim.items()}
        self._vertices = tuple(s[0] for s in self._by_dim.get(0, ()))
        self._labels = {v: labels.get(v, v) for v in self._vertices}

    @classmethod
    def from_facets(cls, facets: Sequence[Iterable[Label]]) -> "SimplicialComplex":
        """Build a complex from facet label lists, normalizing labels to dense ids.

        Non-maximal input faces are absorbed; duplicate vertices within one facet
        are an error, as is an empty facet.
        """
        raw = []
        labels_seen: set[Label] = set()
        for f in facets:
            f = list(f)
            if not f:
                raise EmptyFacet("empty facet in input")
            if len(set(f)) != len(f):
                raise DuplicateVertexInFacet(f"facet {f} repeats a vertex")
            raw.append(f)
            labels_seen.update(f)
        ordered = sorted(labels_seen, key=_label_sort_key)
        to_id = {lab: i for i, lab in enumerate(ordered)}
        id_facets = [simplex(to_id[x] for x in f) for f in raw]
        return cls(id_facets, {i: lab for lab, i in to_id.items()})

    @classmethod
    def from_simplices(cls, simplices: Iterable[Simplex],
                       labels: Mapping[int, Label] | None = None) -> "SimplicialComplex":
        """Build from an arbitrary simplex family over int ids (closure is taken)."""
        return cls(tuple(simplices), dict(labels or {}))

    # -- basic queries -------------------------------------------------------

    @property
    def facets(self) -> tuple[Simplex, ...]:
        return self._facets

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    @property
    def labels(self) -> dict[int, Label]:
        return dict(self._labels)

    def label_of(self, v: int) -> Label:
        return self._labels[v]

    def to_labels(self, s: Simplex) -> tuple[Label, ...]:
        return tuple(self._labels[v] for v in s)

    @property
    def dim(self) -> int:
        return max(self._by_dim) if self._by_dim else -1

    def simplices(self, dim: int | None = None) -> tuple[Simplex, ...]:
        if dim is None:
            return tuple(s for d in sorted(self._by_dim) for s in self._by_dim[d])
        return self._by_dim.get(dim, ())

    def __contains__(self, s: Simplex) -> bool:
        return tuple(s) in self._all

    def __len__(self) -> int:
        return len(self._all)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._all == other._all and self._labels == other._labels

    def __hash__(self) -> int:
        return hash(frozenset(self._facets))

    def __repr__(self) -> str:
        return f"SimplicialComplex(f_vector={self.f_vector()})"

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self._by_dim.get(d, ())) for d in range(self.dim + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector()))

    def _check_vertex(self, v: int) -> None:
        if v not in self._labels:
            raise UnknownVertex(f"vertex {v} not in complex")

    # -- local operations ----------------------------------------------------

    def open_star(self, v: int) -> frozenset[Simplex]:
        """All simplices containing ``v`` (not a subcomplex)."""
        self._check_vertex(v)
        return frozenset(s for s in self._all if v in s)

    def link(self, v: int) -> "SimplicialComplex":
        """Simplices disjoint from ``v`` whose union with it is a simplex."""
        self._check_vertex(v)
        faces = [tuple(x for x in f if x != v) for f in self._facets if v in f]
        return SimplicialComplex([f for f in faces if f], self._labels)

    def closed_star(self, v: int) -> "SimplicialComplex":
        self._check_vertex(v)
        return SimplicialComplex([f for f in self._facets if v in f], self._labels)

    def cone_apexes(self) -> frozenset[int]:
        """Vertices contained in every facet (empty for non-cones)."""
        if not self._facets:
            return frozenset()
        common = set(self._facets[0])
        for f in self._facets[1:]:
            common.intersection_update(f)
            if not common:
                break
        return frozenset(common)

    def dominating_vertices(self, v: int) -> frozenset[int]:
        """Vertices a != v present in every facet that contains ``v``.

        Equivalent to the apexes of the link of ``v``: the maximal simplices of
        the link are exactly the facets through ``v`` with ``v`` removed.
        """
        self._check_vertex(v)
        common: set[int] | None = None
        for f in self._facets:
            if v in f:
                if common is None:
                    common = set(f)
                else:
                    common.intersection_update(f)
                if common == {v}:
                    break
        common = common or set()
        common.discard(v)
        return frozenset(common)

    def remove_vertex(self, v: int) -> "SimplicialComplex":
        """The subcomplex of simplices disjoint from ``v``."""
        self._check_vertex(v)
        cands = []
        for f in self._facets:
            if v in f:
                rest = tuple(x for x in f if x != v)
                if rest:
                    cands.append(rest)
            else:
                cands.append(f)
        return SimplicialComplex(cands, self._labels)

    def full_subcomplex(self, keep: Iterable[int]) -> "SimplicialComplex":
        """All simplices whose vertices lie in ``keep``."""
        keep = set(keep)
        for v in keep:
            self._check_vertex(v)
        cands = []
        for f in self._facets:
            rest = tuple(x for x in f if x in keep)
            if rest:
                cands.append(rest)
        return SimplicialComplex(cands, self._labels)

    def free_face(self, s: Simplex) -> Simplex | None:
        """The unique proper coface of ``s`` when exactly one exists.

        A unique proper coface is necessarily of codimension 1 and maximal.
        """
        s = tuple(s)
        if s not in self._all:
            raise UnknownSimplex(f"{s} not in complex")
        cofaces = [t for t in self._by_dim.get(len(s), ()) if set(s) <= set(t)]
        if len(cofaces) != 1:
            return None
        t = cofaces[0]
        return t if t in set(self._facets) else None


def cone(cx: SimplicialComplex, apex_label: Label | None = None) -> SimplicialComplex:
    """The cone over ``cx`` with a fresh apex carrying ``apex_label``.

    Without an explicit label the apex gets one past the largest integer label
    (or the string ``"apex"`` when no label is an integer).
    """
    if apex_label is None:
        ints = [lab for lab in cx.labels.values()
                if isinstance(lab, int) and not isinstance(lab, bool)]
        apex_label = max(ints) + 1 if ints else "apex"
    if apex_label in cx.labels.values():
        raise ValueError(f"apex label {apex_label!r} already used")
    apex = max(cx.vertices, default=-1) + 1
    labels = cx.labels
    labels[apex] = apex_label
    facets = [f + (apex,) for f in cx.facets] or [(apex,)]
    return SimplicialComplex(facets, labels)
