"""Cut enumeration, cut taxonomy, Menger bounds, and class validators.

``bruteforce_cuts`` and ``bruteforce_min_separation`` are the reference
implementations: plain bipartition scans with no normal form and no flow
algorithm, against which the package's versions are checked.
"""

from itertools import combinations

import pytest

from conftest import (
    build_graph,
    random_multigraph,
    square_with_chord,
    triangle,
    wheel,
)
from crossflow.cuts import (
    EdgeCut,
    OperationError,
    boundary_connectivity,
    check_class,
    classify_cut,
    cut_edges,
    cuts_cross,
    edge_connectivity,
    enumerate_robust_cuts,
    make_cut,
)
from crossflow.embedding import boundary_vertices
from crossflow.families import gen_circulant_b, gen_counterexample, gen_random_pt
from crossflow.orient import random_prescription


def bruteforce_cuts(g, max_size, min_side):
    """All bipartitions (side holds the smallest vertex's complement rule:
    every subset not containing vertex 0's stand-in, so each cut appears
    once per side) with at most max_size crossing edges and both sides of
    order at least min_side.  Returns frozenset sides."""
    verts = g.vertices
    anchor = verts[0]
    rest = verts[1:]
    found = []
    for r in range(1, len(verts)):
        for combo in combinations(rest, r):
            side = frozenset(combo)
            if len(side) < min_side or len(verts) - len(side) < min_side:
                continue
            if len(cut_edges(g, side)) <= max_size:
                found.append(side)
    return found


def bruteforce_min_separation(g, v):
    """Minimum |delta(S)| over all S containing v and avoiding the
    boundary vertex set entirely."""
    bnd = boundary_vertices(g)
    pool = [x for x in g.vertices if x not in bnd and x != v]
    best = None
    for r in range(len(pool) + 1):
        for combo in combinations(pool, r):
            side = frozenset(combo) | {v}
            k = len(cut_edges(g, side))
            if best is None or k < best:
                best = k
    return best


def _normal(g, side):
    # the enumerator's normal form: connected side, or two isolated vertices
    from crossflow.cuts import _induced_connected, _normal_side

    return _normal_side(g, side)


# --------------------------------------------------------- connectivity


def test_k4_edge_connectivity():
    g = build_graph(
        {0: (0, 1), 1: (0, 2), 2: (0, 3), 3: (1, 2), 4: (1, 3), 5: (2, 3)}
    )
    assert edge_connectivity(g) == 3


def test_b5_edge_connectivity():
    assert edge_connectivity(gen_circulant_b(5)) == 4


def test_counterexample_connectivity_and_unique_3cut():
    g, p, dspec = gen_counterexample(0)
    assert edge_connectivity(g) == 3
    t = g.tvertex
    sides = bruteforce_cuts(g, 3, 1)
    expected = {frozenset({t}), frozenset(set(g.vertices) - {t})}
    assert {s for s in sides if len(cut_edges(g, s)) == 3} <= expected
    assert any(s in expected for s in sides)


def test_edge_connectivity_needs_two_vertices():
    g = build_graph({}, rotations={0: []})
    g.rotation = {0: []}
    with pytest.raises(OperationError):
        edge_connectivity(g)


# ---------------------------------------------------------- enumeration


def test_triangle_two_cuts_each_vertex():
    g = triangle()
    cuts = enumerate_robust_cuts(g, max_size=2, min_side=1)
    assert len(cuts) == 3
    assert all(c.size == 2 for c in cuts)


def test_counterexample_no_small_robust_cuts():
    g, p, dspec = gen_counterexample(0)
    assert enumerate_robust_cuts(g, max_size=3, min_side=2) == []


def test_b5_robust_4cuts_match_bruteforce():
    g = gen_circulant_b(5)
    got = enumerate_robust_cuts(g, max_size=4, min_side=2)
    want = {
        frozenset(s)
        for s in bruteforce_cuts(g, 4, 2)
        if _normal(g, frozenset(s)) and _normal(g, frozenset(g.vertices) - s)
    }
    # brute force lists each cut once per orientation of the bipartition
    canon = {min(s, frozenset(g.vertices) - s, key=sorted) for s in want}
    assert {min(c.side, c.complement, key=sorted) for c in got} == canon


def test_enumeration_deterministic_and_sorted():
    g = random_multigraph(3)
    cuts = enumerate_robust_cuts(g, max_size=4, min_side=2)
    keys = [(c.size, sorted(c.side)) for c in cuts]
    assert keys == sorted(keys)


def test_enumeration_agrees_with_bruteforce_smallcases():
    for seed in range(25):
        g = random_multigraph(seed, max_vertices=8)
        got = enumerate_robust_cuts(g, max_size=3, min_side=2)
        allv = frozenset(g.vertices)
        want = set()
        for s in bruteforce_cuts(g, 3, 2):
            if _normal(g, s) and _normal(g, allv - s):
                want.add(min(s, allv - s, key=sorted))
        assert {min(c.side, c.complement, key=sorted) for c in got} == want, seed


def test_size_cap_refused_on_large_graphs():
    g = build_graph({i: (i, (i + 1) % 30) for i in range(30)})
    with pytest.raises(OperationError):
        enumerate_robust_cuts(g, max_size=7, min_side=2)


def test_cut_fields_consistent():
    g = gen_circulant_b(7)
    for c in enumerate_robust_cuts(g, max_size=4, min_side=2):
        assert c.size == len(c.edges)
        assert set(c.edges) == set(cut_edges(g, c.side))
        assert c.robust == (len(c.side) >= 2 and len(c.complement) >= 2)


# ------------------------------------------------------------- taxonomy


def test_wheel_hub_cut_is_type1():
    g = wheel(5)
    c = classify_cut(g, make_cut(g, {5}))
    assert c.cut_type == 1  # spokes only, no boundary edge


def test_boundary_pair_cut_is_type2():
    g = gen_circulant_b(5)
    from crossflow.embedding import boundary_cycle

    cyc = boundary_cycle(g)
    c = classify_cut(g, make_cut(g, set(cyc[:2])))
    assert c.cut_type == 2


def test_two_arc_side_is_type3():
    g = gen_circulant_b(7)
    from crossflow.embedding import boundary_cycle

    cyc = boundary_cycle(g)
    side = {cyc[0], cyc[3]}  # two separated boundary vertices
    c = classify_cut(g, make_cut(g, side))
    assert c.cut_type == 3


def test_boundary_intersection_always_even():
    from crossflow.embedding import specified_walk

    for seed in range(20):
        g, p = gen_random_pt(seed, 9)
        walk_edges = specified_walk(g).edge_ids()
        for c in enumerate_robust_cuts(g, max_size=5, min_side=2):
            assert len(set(c.edges) & walk_edges) % 2 == 0


def test_classify_requires_cycle_boundary():
    g = build_graph({0: (0, 1), 1: (1, 2)})
    from crossflow.embedding import canonical_anchor, trace_faces

    g.specified = [canonical_anchor(g, trace_faces(g)[0])]
    with pytest.raises(OperationError):
        classify_cut(g, make_cut(g, {0}))


# -------------------------------------------------------------- crossing


def test_disjoint_cuts_do_not_cross():
    g = build_graph({i: (i, (i + 1) % 8) for i in range(8)})
    a = make_cut(g, {0, 1})
    b = make_cut(g, {4, 5})
    assert not cuts_cross(a, b)


def test_nested_cuts_do_not_cross():
    g = build_graph({i: (i, (i + 1) % 8) for i in range(8)})
    a = make_cut(g, {0, 1, 2, 3})
    b = make_cut(g, {1, 2})
    assert not cuts_cross(a, b)


def test_quadrant_cuts_cross():
    g = build_graph({i: (i, (i + 1) % 8) for i in range(8)})
    a = make_cut(g, {0, 1, 2, 3})
    b = make_cut(g, {2, 3, 4, 5})
    assert cuts_cross(a, b)


# ---------------------------------------------------------------- Menger


def test_wheel_hub_five_paths():
    g = wheel(5)
    assert boundary_connectivity(g, 5) == 5


def test_bottleneck_limits_paths():
    # inner vertex 4 reaches the square boundary through 3 edges only
    g = build_graph(
        {
            0: (0, 1),
            1: (1, 2),
            2: (2, 3),
            3: (3, 0),
            4: (4, 0),
            5: (4, 1),
            6: (4, 2),
        },
        rotations={
            0: [(3, 1), (4, 1), (0, 0)],
            1: [(0, 1), (5, 1), (1, 0)],
            2: [(1, 1), (6, 1), (2, 0)],
        },
    )
    from crossflow.embedding import canonical_anchor, trace_faces

    outer = [f for f in trace_faces(g) if set(f.edge_ids()) == {0, 1, 2, 3}][0]
    g.specified = [canonical_anchor(g, outer)]
    assert boundary_connectivity(g, 4) == 3
    assert bruteforce_min_separation(g, 4) == 3


def test_boundary_vertex_refused():
    g = wheel(5)
    with pytest.raises(OperationError):
        boundary_connectivity(g, 0)


def test_menger_against_bruteforce():
    hits = 0
    for seed in range(60):
        g = random_multigraph(seed, max_vertices=8)
        bnd = boundary_vertices(g)
        interior = [v for v in g.vertices if v not in bnd]
        for v in interior:
            assert boundary_connectivity(g, v) == bruteforce_min_separation(g, v)
            hits += 1
    assert hits >= 10  # the sample actually exercised interior vertices


# -------------------------------------------------------------- classes


def test_b5_is_pt():
    g = gen_circulant_b(5)
    p = random_prescription(g, 0)
    rep = check_class(g, p, "pt")
    assert rep.holds and rep.violations == ()


def test_counterexample_without_d_is_pt():
    g, p, dspec = gen_counterexample(0)
    h = g.copy()
    h.dvertex = None
    h.darcs = {}
    rep = check_class(h, p, "pt")
    assert rep.holds
    assert h.degree(h.tvertex) == 3


def test_counterexample_with_d_fails_pt():
    g, p, dspec = gen_counterexample(0)
    rep = check_class(g, p, "pt")
    assert not rep.holds
    assert any(idx == 2 for idx, _ in rep.violations)


def test_two_low_degree_vertices_fail_pt():
    g, p = gen_random_pt(0, 9)
    # forcing a second degree-3 vertex by lifting at a degree-4 vertex
    from crossflow.embedding import lift_pair

    v = next(x for x in g.vertices if g.degree(x) == 4 and x != g.tvertex)
    inc = g.incident(v)
    out = None
    for i in range(4):
        e1, e2 = inc[i], inc[(i + 1) % 4]
        try:
            out = lift_pair(g, e1, e2, v)
            break
        except Exception:
            continue
    assert out is not None
    rep = check_class(out, p, "pt")
    assert not rep.holds


def test_unknown_class_refused():
    g = triangle()
    with pytest.raises(OperationError):
        check_class(g, {v: 0 for v in g.vertices}, "zt")


def test_holds_iff_no_violations():
    for seed in range(15):
        g = random_multigraph(seed)
        p = random_prescription(g, seed)
        for name in ("pt", "3pt", "ft", "dts", "3dts"):
            rep = check_class(g, p, name)
            assert rep.holds == (rep.violations == ())


def test_plane_instance_fails_pt_on_surface():
    g = square_with_chord()
    p = {v: 0 for v in g.vertices}
    rep = check_class(g, p, "pt")
    assert not rep.holds
    assert any(idx == 0 for idx, _ in rep.violations)
