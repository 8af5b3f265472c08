"""Bundled test complexes.

The dunce hat below is the quotient of a triangulated 9-gon disk (five
interior vertices) whose boundary is glued along the word a a a^-1; vertices
1, 2, 3 form the singular boundary circle.  It has f-vector (8, 24, 17),
49 simplices in total, trivial reduced homology, and neither free faces nor
dominated vertices, so both plain core reductions leave it untouched.
"""
from __future__ import annotations

from .complexes import Label, SimplicialComplex, cone

DUNCE_HAT_FACETS = [
    [1, 2, 4], [2, 3, 4], [1, 3, 5], [1, 2, 5], [2, 3, 6], [1, 3, 6],
    [1, 3, 7], [2, 3, 7], [1, 2, 8], [3, 4, 5], [2, 5, 6], [1, 6, 7],
    [2, 7, 8], [1, 4, 8], [4, 5, 6], [4, 6, 7], [4, 7, 8],
]

# minimal vertex triangulation of the real projective plane (antipodal
# icosahedron quotient): 10 facets on the complete graph K6
RP2_FACETS = [
    [1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 2, 6], [1, 5, 6],
    [2, 3, 5], [2, 4, 5], [2, 4, 6], [3, 4, 6], [3, 5, 6],
]


def full_simplex(n: int) -> SimplicialComplex:
    """The solid n-simplex on vertices 0..n."""
    return SimplicialComplex.from_facets([list(range(n + 1))])


def simplex_boundary(n: int) -> SimplicialComplex:
    """The boundary of the n-simplex, a triangulated (n-1)-sphere."""
    verts = list(range(n + 1))
    return SimplicialComplex.from_facets(
        [verts[:i] + verts[i + 1:] for i in range(n + 1)])


def rp2() -> SimplicialComplex:
    return SimplicialComplex.from_facets(RP2_FACETS)


def dunce_hat() -> SimplicialComplex:
    return SimplicialComplex.from_facets(DUNCE_HAT_FACETS)


def cone_over(cx: SimplicialComplex, apex_label: Label | None = None) -> SimplicialComplex:
    return cone(cx, apex_label)


FIXTURES = {
    "dunce_hat": dunce_hat,
    "rp2": rp2,
    "boundary_delta_3": lambda: simplex_boundary(3),
    "boundary_delta_2": lambda: simplex_boundary(2),
    "cone_dunce_hat": lambda: cone_over(dunce_hat()),
}
