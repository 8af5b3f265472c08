"""Integer simplicial homology via Smith normal form.

This is the correctness oracle for every reduction: a reduced core is accepted
only if its homology (Betti numbers and torsion coefficients over the
integers) agrees with the input complex.  Arithmetic is exact throughout;
entries can grow during elimination, so Python integers are mandatory here.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .complexes import Simplex, SimplicialComplex
from .posets import FinitePoset, NotGraded, is_thin_with_bottom, order_complex


@dataclass(frozen=True)
class BoundaryMatrix:
    """Signed incidence matrix from d-simplices to their (d-1)-faces."""

    dimension: int
    rows: tuple[Simplex, ...]
    cols: tuple[Simplex, ...]
    entries: tuple[tuple[int, ...], ...]  # entries[i][j] over rows i, cols j


def boundary_matrices(cx: SimplicialComplex) -> list[BoundaryMatrix]:
    """The chain-complex boundary maps for dimensions 1..dim.

    Signs come from the position of the omitted vertex in sorted order, so the
    composition of consecutive matrices is zero.
    """
    out = []
    for d in range(1, cx.dim + 1):
        rows = cx.simplices(d - 1)
        cols = cx.simplices(d)
        row_index = {s: i for i, s in enumerate(rows)}
        mat = [[0] * len(cols) for _ in rows]
        for j, s in enumerate(cols):
            for k in range(len(s)):
                face = s[:k] + s[k + 1:]
                mat[row_index[face]][j] = -1 if k % 2 else 1
        out.append(BoundaryMatrix(d, rows, cols, tuple(tuple(r) for r in mat)))
    return out


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Invariant factors d1 | d2 | ... of an integer matrix.

    Sparse elimination with smallest-absolute-value pivoting (unit pivots
    preferred, breaking ties towards least fill).  The trailing divisibility
    pass guarantees the chain condition, and the number of factors is the
    rank.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for i, row in enumerate(matrix):
        for j, a in enumerate(row):
            if a:
                rows.setdefault(i, {})[j] = int(a)
                cols.setdefault(j, set()).add(i)

    def row_op(i: int, k: int, q: int) -> None:
        # row_i -= q * row_k
        if not q:
            return
        target = rows.setdefault(i, {})
        for j, a in list(rows.get(k, {}).items()):
            new = target.get(j, 0) - q * a
            if new:
                target[j] = new
                cols.setdefault(j, set()).add(i)
            elif j in target:
                del target[j]
                cols[j].discard(i)
        if not target:
            del rows[i]

    def col_op(j: int, k: int, q: int) -> None:
        # col_j -= q * col_k
        if not q:
            return
        for i in list(cols.get(k, set())):
            a = rows[i][k]
            new = rows[i].get(j, 0) - q * a
            if new:
                rows[i][j] = new
                cols.setdefault(j, set()).add(i)
            elif j in rows[i]:
                del rows[i][j]
                cols[j].discard(i)

    factors: list[int] = []
    while rows:
        best = None
        for i, row in rows.items():
            for j, a in row.items():
                score = (abs(a) != 1, abs(a), len(row) * len(cols[j]))
                if best is None or score < best[0]:
                    best = (score, i, j)
        _, pi, pj = best
        while True:
            restart = False
            for i in list(cols[pj]):
                if i == pi:
                    continue
                q = rows[i][pj] // rows[pi][pj]
                row_op(i, pi, q)
                if rows.get(i, {}).get(pj):
                    pi = i  # the smaller remainder becomes the pivot
                    restart = True
                    break
            if restart:
                continue
            for j in list(rows[pi]):
                if j == pj:
                    continue
                q = rows[pi][j] // rows[pi][pj]
                col_op(j, pj, q)
                if rows[pi].get(j):
                    pj = j
                    restart = True
                    break
            if restart:
                continue
            p = abs(rows[pi][pj])
            if p != 1:
                # divisibility chain: fold a non-divisible row into the pivot
                # row and keep eliminating; the pivot strictly shrinks
                offender = None
                for i, row in rows.items():
                    if i != pi and any(a % p for a in row.values()):
                        offender = i
                        break
                if offender is not None:
                    row_op(pi, offender, -1)
                    continue
            for j in list(rows[pi]):
                cols[j].discard(pi)
                if not cols[j]:
                    del cols[j]
            del rows[pi]
            factors.append(p)
            break
    return tuple(factors)


def rational_rank(matrix: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    a = [list(map(int, row)) for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    rank = 0
    prev = 1
    for col in range(n):
        piv = next((r for r in range(rank, m) if a[r][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(rank + 1, m):
            for c in range(col + 1, n):
                a[r][c] = (a[r][c] * a[rank][col] - a[r][col] * a[rank][c]) // prev
            a[r][col] = 0
        prev = a[rank][col]
        rank += 1
        if rank == m:
            break
    return rank


class HomologyProfile:
    """Betti numbers and torsion coefficients per dimension.

    Profiles of complexes of different dimensions compare equal when they agree
    after dropping trailing zero Betti entries and empty torsion lists.
    """

    __slots__ = ("betti", "torsion")

    def __init__(self, betti: Sequence[int], torsion: Sequence[Sequence[int]]):
        self.betti = tuple(int(b) for b in betti)
        self.torsion = tuple(tuple(sorted(int(t) for t in ts)) for ts in torsion)

    def normalized(self) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
        betti = list(self.betti)
        while betti and betti[-1] == 0:
            betti.pop()
        torsion = list(self.torsion)
        while torsion and not torsion[-1]:
            torsion.pop()
        return tuple(betti), tuple(torsion)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomologyProfile):
            return NotImplemented
        return self.normalized() == other.normalized()

    def __hash__(self) -> int:
        return hash(self.normalized())

    def __repr__(self) -> str:
        return f"HomologyProfile(betti={self.betti}, torsion={self.torsion})"

    def to_json(self) -> dict:
        return {"betti": list(self.betti), "torsion": [list(t) for t in self.torsion]}


def homology(cx: SimplicialComplex) -> HomologyProfile:
    """Integer homology from Smith normal forms of the boundary maps."""
    if len(cx) == 0:
        return HomologyProfile((), ())
    f = cx.f_vector()
    dim = cx.dim
    factors = {d: smith_normal_form(b.entries) for d, b in
               ((b.dimension, b) for b in boundary_matrices(cx))}
    betti = []
    torsion = []
    for d in range(dim + 1):
        rank_d = len(factors.get(d, ()))
        rank_up = len(factors.get(d + 1, ()))
        betti.append(f[d] - rank_d - rank_up)
        torsion.append(tuple(t for t in factors.get(d + 1, ()) if t > 1))
    return HomologyProfile(betti, torsion)


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> tuple[Check, ...]:
        return tuple(c for c in self.checks if not c.ok)

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail}
                           for c in self.checks]}


def _poset_cell_counts(poset: FinitePoset) -> dict[int, int]:
    counts: dict[int, int] = {}
    for e in poset.elements:
        g = poset.grade_of(e)
        counts[g] = counts.get(g, 0) + 1
    return counts


def poset_euler_characteristic(poset: FinitePoset) -> int:
    return sum((-1) ** g * n for g, n in _poset_cell_counts(poset).items())


def verify_reduction(cx: SimplicialComplex, result) -> VerificationReport:
    """Audit a reduction outcome against the input complex.

    Checks the Euler characteristic, homology equality (through the order
    complex for critical posets, directly for subcomplex cores), thinness of
    critical posets, and the cell-count correspondence with the descending
    stars recorded in the trace.
    """
    checks: list[Check] = []
    want = homology(cx)
    chi = cx.euler_characteristic()
    if result.critical_poset is not None:
        poset = result.critical_poset
        got_chi = poset_euler_characteristic(poset)
        checks.append(Check("euler", got_chi == chi, f"{got_chi} vs {chi}"))
        got = homology(order_complex(poset))
        checks.append(Check("homology", got == want, f"{got} vs {want}"))
        try:
            thin = is_thin_with_bottom(poset)
            checks.append(Check("thin", thin.ok, str(thin.violation or "")))
        except NotGraded as err:
            checks.append(Check("thin", False, f"not graded: {err}"))
        star_counts: dict[int, int] = {}
        for step in result.trace.steps:
            star = getattr(step, "star", None)
            if star is not None:
                for s in star:
                    d = len(s) - 1
                    star_counts[d] = star_counts.get(d, 0) + 1
        checks.append(Check("cells", star_counts == _poset_cell_counts(poset),
                            f"{star_counts} vs {_poset_cell_counts(poset)}"))
    else:
        core = result.core
        got_chi = core.euler_characteristic()
        checks.append(Check("euler", got_chi == chi, f"{got_chi} vs {chi}"))
        got = homology(core)
        checks.append(Check("homology", got == want, f"{got} vs {want}"))
        fvec = {d: n for d, n in enumerate(core.f_vector())}
        crit_counts: dict[int, int] = {}
        for s in result.trace.critical_set:
            d = len(s) - 1
            crit_counts[d] = crit_counts.get(d, 0) + 1
        checks.append(Check("cells", fvec == crit_counts, f"{fvec} vs {crit_counts}"))
    return VerificationReport(tuple(checks))
