"""Face tracing, topological predicates, and the reduction operations.

The frozen face counts and walk lengths in here were derived by hand
from the rotation data before the implementation existed; they are the
reference the tracer is checked against, not values copied from it.
"""

import pytest
from hypothesis import given, settings, strategies as st

from conftest import (
    bowtie_crosscap,
    build_graph,
    random_multigraph,
    square_with_chord,
    triangle,
    wheel,
)
from crossflow.embedding import (
    DisconnectedError,
    EmbeddedGraph,
    OperationError,
    StructureError,
    boundary_cycle,
    canonical_anchor,
    contract_subgraph,
    cycle_sign,
    delete_edge,
    delete_vertex,
    euler_characteristic,
    is_contractible_chord,
    lift_pair,
    planarize_along_chord,
    side_in_open_disk,
    specified_walk,
    split_doubled_boundary_vertex,
    trace_faces,
)
from crossflow.families import gen_circulant_b, gen_counterexample


# ------------------------------------------------------------ face tracing


def test_triangle_two_faces():
    g = triangle()
    faces = trace_faces(g)
    assert sorted(f.length for f in faces) == [3, 3]
    assert euler_characteristic(g) == 2


def test_single_edge_one_face():
    g = build_graph({0: (0, 1)})
    faces = trace_faces(g)
    assert [f.length for f in faces] == [2]
    assert euler_characteristic(g) == 2


def test_b5_face_census():
    # 5 vertices, 10 edges, chi 1 forces F = 6; lengths add up to 2|E|
    g = gen_circulant_b(5)
    faces = trace_faces(g)
    assert len(faces) == 6
    assert sum(f.length for f in faces) == 20
    assert euler_characteristic(g) == 1


def test_face_walk_sum_is_twice_edges():
    for seed in range(40):
        g = random_multigraph(seed)
        assert sum(f.length for f in trace_faces(g)) == 2 * len(g.edges)


def test_anchor_roundtrip():
    g = random_multigraph(7)
    faces = trace_faces(g)
    anchors = [canonical_anchor(g, f) for f in faces]
    assert len(set(anchors)) == len(faces)


def test_trace_rejects_malformed_rotation():
    g = triangle()
    g.rotation[0] = g.rotation[0][:1]
    with pytest.raises(StructureError):
        g.validate()


def test_disconnected_characteristic_refused():
    g = build_graph({0: (0, 1), 1: (2, 3)})
    with pytest.raises(DisconnectedError):
        euler_characteristic(g)


# --------------------------------------------------------------- cycle sign


def test_boundary_cycle_sign_positive():
    g = gen_circulant_b(5)
    walk = specified_walk(g)
    assert cycle_sign(g, sorted(walk.edge_ids())) == 1


def test_one_jump_cycle_sign_negative():
    g = gen_circulant_b(5)
    cyc = boundary_cycle(g)
    # boundary edges v1->v2->v3 plus the jump chord v3 back to v1
    b12 = g.edges_between(cyc[0], cyc[1])[0]
    b23 = g.edges_between(cyc[1], cyc[2])[0]
    jump = [e for e in g.edges_between(cyc[2], cyc[0]) if g.sign[e] == -1][0]
    assert cycle_sign(g, [b12, b23, jump]) == -1


def test_cycle_sign_requires_cycle():
    g = gen_circulant_b(5)
    cyc = boundary_cycle(g)
    b12 = g.edges_between(cyc[0], cyc[1])[0]
    with pytest.raises(OperationError):
        cycle_sign(g, [b12])


def test_cycle_sign_switching_invariant():
    # flipping all signs at one vertex never changes any cycle's sign
    g = gen_circulant_b(7)
    walk_edges = sorted(specified_walk(g).edge_ids())
    before = cycle_sign(g, walk_edges)
    v = g.vertices[3]
    h = g.copy()
    for e in set(h.incident(v)):
        h.sign[e] = -h.sign[e]
    assert cycle_sign(h, walk_edges) == before


# ----------------------------------------------------------- disk predicates


def test_acyclic_side_in_disk():
    g = gen_circulant_b(5)
    assert side_in_open_disk(g, frozenset(boundary_cycle(g)[:2]))


def test_whole_b5_not_in_disk():
    g = gen_circulant_b(5)
    assert not side_in_open_disk(g, frozenset(g.vertices))


def test_counterexample_pair_side_in_disk():
    g, p, dspec = gen_counterexample(0)
    u2 = next(v for v in g.vertices if g.labels.get(v) == "u2")
    u3 = next(v for v in g.vertices if g.labels.get(v) == "u3")
    assert side_in_open_disk(g, frozenset({u2, u3}))


def test_jump_chords_non_contractible():
    g = gen_circulant_b(5)
    for e in g.edges:
        if g.sign[e] == -1:
            assert not is_contractible_chord(g, e)


def test_tw_chord_non_contractible():
    g, p, dspec = gen_counterexample(0)
    t = g.tvertex
    w = next(v for v in g.vertices if g.labels.get(v) == "w")
    e = g.edges_between(t, w)[0]
    assert not is_contractible_chord(g, e)


def test_plane_chord_contractible():
    g = square_with_chord()
    assert specified_walk(g).length == 4
    assert is_contractible_chord(g, 4)


# ------------------------------------------------------------------ deletion


def test_delete_triangle_edge_single_face():
    g = triangle()
    out = delete_edge(g, 1)
    faces = trace_faces(out)
    assert [f.length for f in faces] == [4]


def test_delete_b5_boundary_edge():
    g = gen_circulant_b(5)
    cyc = boundary_cycle(g)
    e = g.edges_between(cyc[0], cyc[1])[0]
    out = delete_edge(g, e)
    assert len(trace_faces(out)) == 5
    assert euler_characteristic(out) == 1


def test_delete_bridge_refused():
    g = build_graph({0: (0, 1), 1: (1, 2)})
    with pytest.raises(DisconnectedError):
        delete_edge(g, 0)


def test_delete_rim_vertex_exposes_hub():
    # face rule for vertex deletion: the specified face absorbs every face
    # at the vertex, so the hub lands on the new boundary
    g = wheel(5)
    out = delete_vertex(g, 0)
    assert 5 in specified_walk(out).tails


def test_delete_vertex_clears_marks():
    g, p, dspec = gen_counterexample(0)
    out = delete_vertex(g, g.dvertex)
    assert out.dvertex is None and not out.darcs


# --------------------------------------------------------------- contraction


def test_contract_single_vertex_identity():
    g = gen_circulant_b(5)
    out = contract_subgraph(g, {g.vertices[0]})
    assert sorted(out.edges.items()) == sorted(g.edges.items())
    assert euler_characteristic(out) == euler_characteristic(g)


def test_contract_boundary_pair_of_counterexample():
    g, p, dspec = gen_counterexample(0)
    u2 = next(v for v in g.vertices if g.labels.get(v) == "u2")
    u3 = next(v for v in g.vertices if g.labels.get(v) == "u3")
    before = specified_walk(g).length
    out = contract_subgraph(g, {u2, u3})
    merged = out.next_vertex_id() - 1
    assert out.degree(merged) == 6
    assert specified_walk(out).length == before - 1
    assert euler_characteristic(out) == 1


def test_contract_drops_loops():
    g = triangle()
    out = contract_subgraph(g, {0, 1})
    assert all(not out.is_loop(e) for e in out.edges)
    assert len(out.edges) == 2


# --------------------------------------------------------------------- lifts


def test_lift_triangle():
    g = triangle()
    out = lift_pair(g, 0, 1, 1)
    assert out.degree(1) == 0
    assert len(out.edges_between(0, 2)) == 2
    darts_before = sum(len(r) for r in g.rotation.values())
    darts_after = sum(len(r) for r in out.rotation.values())
    assert darts_after == darts_before - 2


def test_lift_b5_boundary_with_chord():
    g = gen_circulant_b(5)
    cyc = boundary_cycle(g)
    v1, v2 = cyc[0], cyc[1]
    e1 = g.edges_between(v1, v2)[0]
    v4 = cyc[3]
    e2 = [e for e in g.edges_between(v1, v4) if g.sign[e] == -1][0]
    out = lift_pair(g, e1, e2, v1)
    new = out.next_edge_id() - 1
    assert set(out.edges[new]) == {v2, v4}
    assert out.sign[new] == -1  # (+1) * (-1)


def test_lift_loop_refused():
    g = build_graph({0: (0, 1), 1: (0, 1), 2: (1, 2)})
    with pytest.raises(OperationError):
        lift_pair(g, 0, 1, 1)  # both lead back to 0


# ------------------------------------------------------------- planarization


def test_planarize_b5_chord():
    g = gen_circulant_b(5)
    chord = next(e for e in sorted(g.edges) if g.sign[e] == -1)
    out = planarize_along_chord(g, chord)
    assert euler_characteristic(out) == 2
    assert all(s == 1 for s in out.sign.values())
    assert len(out.vertices) == 3


def test_planarize_counterexample_tw():
    g, p, dspec = gen_counterexample(0)
    t = g.tvertex
    w = next(v for v in g.vertices if g.labels.get(v) == "w")
    e = g.edges_between(t, w)[0]
    out = planarize_along_chord(g, e)
    assert euler_characteristic(out) == 2


def test_planarize_contractible_chord_refused():
    g = square_with_chord()
    with pytest.raises(OperationError):
        planarize_along_chord(g, 4)


# ----------------------------------------------------------------- splitting


def test_split_bowtie():
    g = bowtie_crosscap()
    out = split_doubled_boundary_vertex(g, 0)
    assert euler_characteristic(out) == 2
    assert len(out.specified) == 2
    assert sorted(out.edges.items()) == sorted(g.edges.items())
    for i in range(2):
        assert 0 in specified_walk(out, i).tails


def test_split_requires_doubled_visit():
    g = gen_circulant_b(5)  # Hamiltonian boundary, every vertex once
    with pytest.raises(OperationError):
        split_doubled_boundary_vertex(g, boundary_cycle(g)[0])


# -------------------------------------------------------------- value object


def test_copy_equality_and_independence():
    g = gen_circulant_b(7)
    h = g.copy()
    assert g == h
    h.sign[0] = -h.sign[0]
    assert g != h


def test_operations_do_not_mutate_input():
    g = gen_circulant_b(5)
    key = g._key()
    contract_subgraph(g, set(boundary_cycle(g)[:2]))
    delete_edge(g, next(iter(g.edges)))
    assert g._key() == key


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_random_graphs_trace_consistently(seed):
    g = random_multigraph(seed)
    faces = trace_faces(g)
    assert sum(f.length for f in faces) == 2 * len(g.edges)
    # each (dart, orientation) state lands in exactly one reported orbit
    seen = [s for f in faces for s in f.states]
    assert len(seen) == len(set(seen)) == 2 * len(g.edges)
