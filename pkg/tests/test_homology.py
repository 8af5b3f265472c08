import random

from hypothesis import given, settings
from hypothesis import strategies as st

from strongmorse.complexes import SimplicialComplex
from strongmorse.fixtures import dunce_hat, full_simplex, rp2, simplex_boundary
from strongmorse.homology import (HomologyProfile, boundary_matrices, homology,
                                  rational_rank, smith_normal_form)
from strongmorse.posets import face_poset, order_complex

from conftest import complexes


def dense_snf_oracle(matrix):
    """Tiny textbook Smith normal form for cross-checking the sparse one."""
    a = [list(map(int, row)) for row in matrix]
    m, n = len(a), len(a[0]) if matrix else 0
    factors = []
    t = 0
    while True:
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = a[i][t] // p
                for j in range(t, n):
                    a[i][j] -= q * a[t][j]
                if a[i][t]:
                    a[t], a[i] = a[i], a[t]
                    dirty = True
                    break
            if dirty:
                continue
            for j in range(t + 1, n):
                q = a[t][j] // p
                for i in range(t, m):
                    a[i][j] -= q * a[i][t]
                if a[t][j]:
                    for row in a:
                        row[t], row[j] = row[j], row[t]
                    dirty = True
                    break
            if dirty:
                continue
            p = abs(a[t][t])
            offender = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                             if a[i][j] % p), None)
            if offender is None:
                break
            oi, _ = offender
            for j in range(t, n):
                a[t][j] += a[oi][j]
        factors.append(abs(a[t][t]))
        t += 1
    return tuple(factors)


def test_boundary_matrix_edge():
    (b1,) = boundary_matrices(SimplicialComplex.from_facets([[0, 1]]))
    assert b1.entries == ((-1,), (1,))


def test_boundary_matrix_circle():
    (b1,) = boundary_matrices(simplex_boundary(2))
    assert len(b1.entries) == 3 and len(b1.entries[0]) == 3
    for j in range(3):
        col = [b1.entries[i][j] for i in range(3)]
        assert sorted(col) == [-1, 0, 1]


@given(complexes)
@settings(max_examples=40, deadline=None)
def test_boundary_composition_is_zero(cx):
    mats = boundary_matrices(cx)
    for low, high in zip(mats, mats[1:]):
        rows, mid, cols = len(low.entries), len(high.entries), len(high.entries[0])
        for i in range(rows):
            for j in range(cols):
                assert sum(low.entries[i][k] * high.entries[k][j]
                           for k in range(mid)) == 0


def test_snf_examples():
    assert smith_normal_form([[2]]) == (2,)
    assert smith_normal_form([[1, 0], [0, 0]]) == (1,)
    (b1,) = boundary_matrices(simplex_boundary(2))
    assert smith_normal_form(b1.entries) == (1, 1)
    assert smith_normal_form([]) == ()
    assert smith_normal_form([[0, 0], [0, 0]]) == ()


def test_snf_divisibility_chain_random():
    rnd = random.Random(3)
    for _ in range(60):
        m = rnd.randint(1, 6)
        n = rnd.randint(1, 6)
        mat = [[rnd.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        got = smith_normal_form(mat)
        assert got == dense_snf_oracle(mat)
        for a, b in zip(got, got[1:]):
            assert b % a == 0


def test_snf_rank_matches_rational_rank_on_sign_matrices():
    rnd = random.Random(17)
    for _ in range(10):
        mat = [[rnd.choice((-1, 0, 1)) for _ in range(30)] for _ in range(30)]
        assert len(smith_normal_form(mat)) == rational_rank(mat)


def test_homology_spheres():
    assert homology(simplex_boundary(3)) == HomologyProfile((1, 0, 1), ((), (), ()))
    assert homology(simplex_boundary(2)) == HomologyProfile((1, 1), ((), ()))
    for n in range(1, 6):
        profile = homology(full_simplex(n))
        assert profile == HomologyProfile((1,), ((),))


def test_homology_projective_plane():
    profile = homology(rp2())
    assert profile.betti == (1, 0, 0)
    assert profile.torsion == ((), (2,), ())


def test_homology_dunce_hat():
    assert homology(dunce_hat()) == HomologyProfile((1, 0, 0), ((), (), ()))


def test_homology_profile_normalization():
    assert HomologyProfile((1, 0, 0), ((), (), ())) == HomologyProfile((1,), ((),))
    assert HomologyProfile((1, 2), ()) != HomologyProfile((1,), ())
    assert HomologyProfile((1, 0), (((2,)), ())) != HomologyProfile((1, 0), ((), ()))


def test_homology_json_shape():
    doc = homology(simplex_boundary(3)).to_json()
    assert doc == {"betti": [1, 0, 1], "torsion": [[], [], []]}


@given(complexes, st.randoms(use_true_random=False))
@settings(max_examples=25, deadline=None)
def test_homology_invariant_under_relabeling(cx, rnd):
    perm = list(range(len(cx.vertices)))
    rnd.shuffle(perm)
    relabeled = SimplicialComplex.from_facets(
        [[perm[v] for v in f] for f in cx.facets])
    assert homology(relabeled) == homology(cx)


@given(complexes)
@settings(max_examples=20, deadline=None)
def test_homology_of_barycentric_subdivision(cx):
    sd = order_complex(face_poset(cx))
    assert homology(sd) == homology(cx)
