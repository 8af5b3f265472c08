import random
import time

import pytest

from strongmorse.complexes import SimplicialComplex, cone
from strongmorse.fixtures import cone_over, dunce_hat, full_simplex, rp2, simplex_boundary
from strongmorse.homology import homology, verify_reduction
from strongmorse.morse import classify_vertices, matching_from_vertex_function, validate_matching
from strongmorse.posets import are_isomorphic, face_poset, order_complex
from strongmorse.reduce import (CriticalRemoval, ReplayError, Rng, StrongCollapse,
                                UnsupportedTrace, WeakCollapse, combined_reduction,
                                minimal_strong_core, minimal_weak_core, reduce_complex,
                                replay_trace, strong_internal_core, strong_morse_reduction,
                                vertex_function_from_trace)

from conftest import ScriptedRng, random_complex, seeded_complexes


def test_rng_determinism_and_split():
    a, b = Rng(99), Rng(99)
    assert a.shuffle(range(10)) == b.shuffle(range(10))
    assert a.split(3).seed == b.split(3).seed
    assert a.split(3).seed != a.split(4).seed


def test_minimal_strong_core_collapses_solid_simplex():
    for seed in range(5):
        res = minimal_strong_core(full_simplex(5), Rng(seed))
        assert res.output_size == 1
        assert res.core.f_vector() == (1,)


def test_minimal_strong_core_fixed_points():
    bd3 = simplex_boundary(3)
    res = minimal_strong_core(bd3, Rng(0))
    assert res.core == bd3 and res.output_size == 14
    dh = dunce_hat()
    res = minimal_strong_core(dh, Rng(0))
    assert res.output_size == 49 and res.core == dh


def test_minimal_strong_core_trace_matching_valid():
    coned = cone_over(simplex_boundary(2), apex_label=99)
    res = minimal_strong_core(coned, Rng(4))
    assert res.output_size == 1
    report = validate_matching(coned, res.trace.final_matching.pairs)
    assert report.ok
    assert 2 * len(res.trace.final_matching) + len(res.trace.critical_set) == len(coned)


def test_minimal_weak_core_examples():
    assert minimal_weak_core(full_simplex(2), Rng(1)).output_size == 1
    path = SimplicialComplex.from_facets([[0, 1], [1, 2]])
    assert minimal_weak_core(path, Rng(2)).output_size == 1
    dh = dunce_hat()
    res = minimal_weak_core(dh, Rng(3))
    assert res.output_size == 49
    assert res.trace.steps == ()


def test_weak_core_of_closed_surface_is_identity():
    bd3 = simplex_boundary(3)
    res = minimal_weak_core(bd3, Rng(5))
    assert res.core == bd3


def test_strong_morse_reduction_triangle():
    for seed in range(5):
        critical, matching, trace = strong_morse_reduction(full_simplex(2), Rng(seed))
        assert len(critical) == 1 and len(matching) == 3
        assert next(iter(critical)) in {(0,), (1,), (2,)}


def test_strong_morse_reduction_boundary_tetrahedron():
    for seed in range(5):
        critical, matching, trace = strong_morse_reduction(simplex_boundary(3), Rng(seed))
        assert len(critical) == 8 and len(matching) == 3


def test_strong_morse_reduction_point():
    critical, matching, trace = strong_morse_reduction(
        SimplicialComplex.from_facets([[0]]), Rng(0))
    assert critical == {(0,)} and len(matching) == 0


def test_strong_internal_core_forced_order_golden():
    bd3 = simplex_boundary(3)
    rng = ScriptedRng([[3, 2, 1, 0], [2, 1, 0], [1, 0], [0]], choices=[1, 0])
    res = strong_internal_core(bd3, rng)
    crit = res.critical_poset
    counts = {}
    for e in crit.elements:
        counts[crit.grade_of(e)] = counts.get(crit.grade_of(e), 0) + 1
    assert counts == {0: 2, 1: 3, 2: 3}
    assert ((0,), (1, 3)) in set(crit.cover_pairs())
    assert res.trace.final_matching.pairs == (
        ((0, 2), (0, 1, 2)), ((1,), (0, 1)), ((2,), (1, 2)))
    assert res.trace.implied_heights == {0: 1, 1: 2, 2: 3, 3: 4}


def test_strong_internal_core_solid_simplices():
    for n in range(1, 6):
        for seed in (0, 1):
            res = strong_internal_core(full_simplex(n), Rng(seed))
            assert res.output_size == 1


def test_partition_and_euler_identities_random():
    for seed, cx in seeded_complexes(60, master_seed=5150):
        critical, matching, trace = strong_morse_reduction(cx, Rng(seed))
        assert 2 * len(matching) + len(critical) == len(cx)
        chi = sum((-1) ** (len(s) - 1) for s in critical)
        assert chi == cx.euler_characteristic()
        assert validate_matching(cx, matching.pairs).ok


def test_reduction_classification_consistency():
    # critical removals are exactly the strong critical vertices of the
    # removal-order heights, and the stars agree
    for seed, cx in seeded_complexes(40, master_seed=999):
        critical, matching, trace = strong_morse_reduction(cx, Rng(seed))
        heights = vertex_function_from_trace(trace)
        assert heights == trace.implied_heights
        cls = classify_vertices(cx, heights)
        removed_critical = {s.vertex for s in trace.steps
                            if isinstance(s, CriticalRemoval)}
        assert removed_critical == {v for v, c in cls.items() if c.critical}
        _, expected_critical = matching_from_vertex_function(cx, heights, cls)
        assert expected_critical == critical


def test_homology_preserved_on_fixtures():
    for fixture in (simplex_boundary(3), rp2(), dunce_hat()):
        want = homology(fixture)
        for seed in range(3):
            res = strong_internal_core(fixture, Rng(seed))
            assert homology(order_complex(res.critical_poset)) == want


def test_strong_core_uniqueness_small():
    for seed, cx in seeded_complexes(15, master_seed=31337):
        cores = [minimal_strong_core(cx, Rng(seed + k)).core for k in range(3)]
        posets = [face_poset(c) for c in cores]
        for other in posets[1:]:
            assert are_isomorphic(posets[0], other)


def test_strong_then_weak_never_grows():
    for seed, cx in seeded_complexes(25, master_seed=4242):
        strong = minimal_strong_core(cx, Rng(seed))
        weak_after = minimal_weak_core(strong.core, Rng(seed))
        assert weak_after.output_size <= strong.output_size <= len(cx)
        weak = minimal_weak_core(cx, Rng(seed))
        assert weak.output_size <= len(cx)


def test_combined_reduction_examples():
    assert combined_reduction(full_simplex(2), Rng(0)).output_size == 1
    dh = dunce_hat()
    res = combined_reduction(dh, Rng(8))
    internal = strong_internal_core(dh, Rng(8))
    assert res.output_size == internal.output_size
    assert set(res.critical_poset.elements) == set(internal.critical_poset.elements)
    assert set(res.critical_poset.cover_pairs()) == set(internal.critical_poset.cover_pairs())


def test_combined_reduction_after_weak_collapse_preserves_homology():
    # cone over the dunce hat with one top facet removed: collapsible down to
    # the dunce hat, then reducible by internal collapses
    coned = cone_over(dunce_hat())
    simplices = set(coned.simplices())
    simplices.discard(coned.facets[0])
    cx = SimplicialComplex.from_simplices(simplices, coned.labels)
    want = homology(cx)
    for seed in range(5):
        res = combined_reduction(cx, Rng(seed))
        weak_steps = [s for s in res.trace.steps if isinstance(s, WeakCollapse)]
        assert weak_steps
        assert homology(order_complex(res.critical_poset)) == want
        assert verify_reduction(cx, res).ok


def test_vertex_function_from_trace_pure_strong_collapse():
    coned = cone(simplex_boundary(2), apex_label="a")
    res = minimal_strong_core(coned, Rng(12))
    heights = vertex_function_from_trace(res.trace)
    removed = [s.vertex for s in res.trace.steps]
    n = len(removed)
    for i, v in enumerate(removed):
        assert heights[v] == n - i
    for v in res.core.vertices:
        assert heights[v] == 0
    matching, critical = matching_from_vertex_function(coned, heights)
    assert critical == frozenset(res.core.simplices())


def test_vertex_function_from_trace_rejects_weak_steps():
    res = minimal_weak_core(full_simplex(2), Rng(0))
    with pytest.raises(UnsupportedTrace):
        vertex_function_from_trace(res.trace)


def test_vertex_function_from_empty_trace():
    res = minimal_strong_core(simplex_boundary(3), Rng(0))
    assert res.trace.steps == ()
    assert vertex_function_from_trace(res.trace) == {v: 0 for v in range(4)}


def test_determinism_identical_seeds():
    dh = dunce_hat()
    r1 = strong_internal_core(dh, Rng(77))
    r2 = strong_internal_core(dh, Rng(77))
    assert r1.trace == r2.trace
    assert r1.critical_poset.elements == r2.critical_poset.elements
    assert r1.critical_poset.cover_pairs() == r2.critical_poset.cover_pairs()


def test_replay_trace_roundtrip_all_methods():
    dh = dunce_hat()
    for method in ("strong-core", "weak-core", "strong-internal", "weak-then-strong"):
        res = reduce_complex(dh, method, Rng(21))
        replayed = replay_trace(dh, res.trace)
        if res.core is not None:
            assert replayed.core == res.core
        else:
            assert replayed.critical_poset.elements == res.critical_poset.elements
            assert replayed.critical_poset.cover_pairs() == res.critical_poset.cover_pairs()


def test_replay_rejects_tampered_trace():
    d2 = full_simplex(2)
    res = strong_internal_core(d2, Rng(2))
    first = res.trace.steps[0]
    if isinstance(first, StrongCollapse):
        bad = StrongCollapse(first.vertex, first.vertex)
    else:
        bad = CriticalRemoval(first.vertex, ())
    tampered = res.trace.__class__(res.trace.vertices, (bad,) + res.trace.steps[1:],
                                   res.trace.final_matching, res.trace.critical_set)
    with pytest.raises(ReplayError):
        replay_trace(d2, tampered)


def test_verify_reduction_examples():
    bd3 = simplex_boundary(3)
    rng = ScriptedRng([[3, 2, 1, 0], [2, 1, 0], [1, 0], [0]], choices=[1, 0])
    forced = strong_internal_core(bd3, rng)
    report = verify_reduction(bd3, forced)
    assert report.ok
    assert {c.name for c in report.checks} == {"euler", "homology", "thin", "cells"}
    single = strong_internal_core(full_simplex(2), Rng(1))
    assert verify_reduction(full_simplex(2), single).ok
    assert homology(order_complex(single.critical_poset)).betti == (1,)


def test_runtime_monitor_prints_scaling():
    # soft monitor only: cubic-in-vertices times simplex-count growth envelope
    rows = []
    for n in (3, 4, 5):
        cx = simplex_boundary(n)
        start = time.perf_counter()
        strong_morse_reduction(cx, Rng(0))
        rows.append((len(cx.vertices), len(cx), time.perf_counter() - start))
    for v, f, t in rows:
        print(f"strong_morse_reduction V={v} F={f}: {t:.4f}s")
