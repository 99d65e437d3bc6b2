"""Prescriptions, orientations mod 3, the exhaustive oracle, and the
greedy direct-and-delete engine.

A prescription assigns every vertex a residue in {-1, 0, +1}; its total
must vanish mod 3 (reversing the handshake argument, no orientation can
meet it otherwise).  An orientation directs edges; it is valid when at
every vertex indegree minus outdegree is congruent to the prescribed
residue mod 3, and when it extends the forced arcs at the directed
vertex if the graph carries one.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .embedding import EmbeddedGraph


class OrientationError(Exception):
    """Bad orientation/prescription input."""


class OracleBoundError(OrientationError):
    """Instance exceeds the configured exhaustive-search budget."""


class ScheduleError(OrientationError):
    """Greedy schedule failed.  ``vertex`` names the blocking vertex when
    the failure is local, else None."""

    def __init__(self, message: str, vertex: int | None = None):
        self.vertex = vertex
        super().__init__(message)


@dataclass(frozen=True)
class DirectedVertexSpec:
    """Forced arcs at one vertex: edge id -> "in" | "out"."""

    vertex: int
    arcs: dict[int, str]

    def residue(self) -> int:
        r = sum(1 if w == "in" else -1 for w in self.arcs.values()) % 3
        return r - 3 if r == 2 else r


def dspec_of(g: EmbeddedGraph) -> DirectedVertexSpec | None:
    if g.dvertex is None:
        return None
    return DirectedVertexSpec(vertex=g.dvertex, arcs=dict(g.darcs))


@dataclass
class Orientation:
    """Edge directions, possibly partial.

    direction maps edge id -> (tail, head).  ``fixed`` lists edges whose
    direction is frozen input (the directed vertex's arcs, transferred
    cut edges); operations must not flip them.
    """

    direction: dict[int, tuple[int, int]] = field(default_factory=dict)
    fixed: frozenset[int] = frozenset()

    def tails(self) -> dict[int, int]:
        return {e: th[0] for e, th in self.direction.items()}

    def is_total_for(self, g: EmbeddedGraph) -> bool:
        return set(self.direction) == set(g.edges)


def orientation_from_tails(g: EmbeddedGraph, tails: dict[int, int]) -> Orientation:
    direction = {}
    for e, t in tails.items():
        if e not in g.edges:
            raise OrientationError(f"unknown edge {e}")
        u, v = g.edges[e]
        if t == u:
            direction[e] = (u, v)
        elif t == v:
            direction[e] = (v, u)
        else:
            raise OrientationError(f"vertex {t} is not an endpoint of edge {e}")
    return Orientation(direction=direction)


# ----------------------------------------------------------- prescriptions


def prescription_ok(g: EmbeddedGraph, p: dict[int, int]) -> bool:
    """Covers every vertex with a residue in {-1,0,1}, total 0 mod 3."""
    if set(p) != set(g.rotation):
        return False
    if any(r not in (-1, 0, 1) for r in p.values()):
        return False
    return sum(p.values()) % 3 == 0


def random_prescription(g: EmbeddedGraph, seed: int) -> dict[int, int]:
    """Uniform over valid prescriptions: free residues on all vertices but
    the last, which is forced to close the total."""
    rng = np.random.default_rng(seed)
    verts = g.vertices
    p: dict[int, int] = {}
    for v in verts[:-1]:
        p[v] = int(rng.integers(-1, 2))
    last = (-sum(p.values())) % 3
    p[verts[-1]] = last - 3 if last == 2 else last
    return p


def residue(g: EmbeddedGraph, o: Orientation, v: int) -> int:
    """Indegree minus outdegree at v, reduced to {-1, 0, +1}.  Loops
    contribute nothing.  Every non-loop edge at v must be directed."""
    if v not in g.rotation:
        raise OrientationError(f"unknown vertex {v}")
    r = 0
    for d in g.rotation[v]:
        e = d[0]
        if g.is_loop(e):
            continue
        if e not in o.direction:
            raise OrientationError(f"edge {e} at vertex {v} is undirected")
        r += 1 if o.direction[e][1] == v else -1
    r %= 3
    return r - 3 if r == 2 else r


def is_valid_orientation(g: EmbeddedGraph, p: dict[int, int], o: Orientation) -> bool:
    """Total orientation meeting p everywhere and extending the graph's
    forced arcs."""
    if not o.is_total_for(g):
        raise OrientationError("orientation is not total")
    if not prescription_ok(g, p):
        raise OrientationError("prescription is malformed")
    for e, (t, h) in o.direction.items():
        if {t, h} != set(g.edges[e]):
            raise OrientationError(f"edge {e} directed between non-endpoints")
    for v in g.rotation:
        if (residue(g, o, v) - p[v]) % 3 != 0:
            return False
    for e, way in g.darcs.items():
        t = o.direction[e][0]
        if way == "out" and t != g.dvertex:
            return False
        if way == "in" and t == g.dvertex:
            return False
    return True


def orientation_to_flow(
    g: EmbeddedGraph, o: Orientation, reference: Orientation
) -> dict[int, int]:
    """Nowhere-zero values against a reference direction: 1 where o agrees
    with the reference, 2 where it is reversed."""
    for name, ori in (("orientation", o), ("reference", reference)):
        if not ori.is_total_for(g):
            raise OrientationError(f"{name} is not total")
    return {
        e: 1 if o.direction[e][0] == reference.direction[e][0] else 2
        for e in g.edges
    }


# ----------------------------------------------------------------- oracle


def _merged_partial(g: EmbeddedGraph, partial: Orientation | None) -> dict[int, tuple[int, int]]:
    """Partial directions plus the graph's forced arcs; conflicts error."""
    merged: dict[int, tuple[int, int]] = {}
    if partial is not None:
        for e, (t, h) in partial.direction.items():
            if e not in g.edges:
                raise OrientationError(f"partial directs unknown edge {e}")
            if {t, h} != set(g.edges[e]):
                raise OrientationError(f"partial directs edge {e} between non-endpoints")
            merged[e] = (t, h)
    for e, way in g.darcs.items():
        u, v = g.edges[e]
        other = v if u == g.dvertex else u
        want = (g.dvertex, other) if way == "out" else (other, g.dvertex)
        if e in merged and merged[e] != want:
            raise OrientationError(f"partial contradicts the forced arc on edge {e}")
        merged[e] = want
    return merged


def _oracle_arrays(g, p, directed):
    verts = g.vertices
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    cur = np.zeros(n, dtype=np.int64)
    und = np.zeros(n, dtype=np.int64)
    tgt = np.array([p[v] for v in verts], dtype=np.int64)
    free = []
    for e in sorted(g.edges):
        u, v = g.edges[e]
        if u == v:
            raise OrientationError(f"edge {e} is a loop; resolve loops first")
        if e in directed:
            t, h = directed[e]
            cur[index[t]] -= 1
            cur[index[h]] += 1
        else:
            free.append(e)
            und[index[u]] += 1
            und[index[v]] += 1
    lo = np.array([index[min(g.edges[e])] for e in free], dtype=np.int64)
    hi = np.array([index[max(g.edges[e])] for e in free], dtype=np.int64)
    return free, lo, hi, cur, und, tgt


def oracle_solve(
    g: EmbeddedGraph,
    p: dict[int, int],
    partial: Orientation | None = None,
    bound: int = 28,
) -> Orientation | None:
    """Exhaustive, deterministic completion search.

    Finds the first valid total orientation extending ``partial`` and the
    graph's forced arcs, branching undirected edges in id order with
    tail-at-lower-endpoint tried first; returns None when the full pruned
    tree is exhausted.  Refuses more than ``bound`` undirected edges.
    """
    if not prescription_ok(g, p):
        return None
    directed = _merged_partial(g, partial)
    free, lo, hi, cur, und, tgt = _oracle_arrays(g, p, directed)
    if len(free) > bound:
        raise OracleBoundError(
            f"{len(free)} undirected edges exceed the oracle bound {bound}"
        )
    out = np.zeros(len(free), dtype=np.int8)
    hit = _kernels.orient_search(lo, hi, cur, und, tgt, 0, out)
    if not hit:
        return None
    direction = dict(directed)
    for j, e in enumerate(free):
        u, v = min(g.edges[e]), max(g.edges[e])
        direction[e] = (u, v) if out[j] == 1 else (v, u)
    fixed = frozenset(g.darcs) | (partial.fixed if partial else frozenset())
    o = Orientation(direction=direction, fixed=fixed)
    assert is_valid_orientation(g, p, o)
    return o


def count_valid(g: EmbeddedGraph, p: dict[int, int], bound: int = 24) -> int:
    """Number of valid total orientations (extending forced arcs)."""
    if len(g.edges) > bound:
        raise OracleBoundError(f"|E|={len(g.edges)} exceeds the count bound {bound}")
    if not prescription_ok(g, p):
        return 0
    directed = _merged_partial(g, None)
    free, lo, hi, cur, und, tgt = _oracle_arrays(g, p, directed)
    return int(_kernels.orient_search(lo, hi, cur, und, tgt, 1, np.zeros(0, np.int8)))


# --------------------------------------------------- greedy direct-and-delete


def _abstract_digest(edges: dict[int, tuple[int, int]]) -> str:
    text = "\n".join(f"{e} {u} {v}" for e, (u, v) in sorted(edges.items()))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def greedy_direct_and_delete(
    g: EmbeddedGraph,
    p: dict[int, int],
    lifts: list[tuple[int, int, int]],
    order: list[int],
    step_log: list | None = None,
) -> Orientation:
    """Run a lift-then-sweep schedule and return a validated orientation.

    ``lifts`` lists (edge1, edge2, shared vertex) to lift first; ``order``
    lists vertices to process: each in turn directs all its remaining
    undirected edges so its residue lands on p, lowest edge ids inward,
    and drops out.  Edges forced along the way (a vertex keeping a single
    undirected edge gets it by its neighbour's turn) are inherited.  The
    result is pulled back through the lifts and fully validated; any
    residue the sweep cannot meet raises ScheduleError naming the vertex.

    ``step_log``, when given, accumulates (kind, args, digest) triples of
    the working multigraph after each step, for solver traces.
    """
    if not prescription_ok(g, p):
        raise OrientationError("prescription is malformed")
    if g.darcs:
        raise ScheduleError("greedy schedules do not handle forced arcs")
    edges = dict(g.edges)
    ep = dict(g.edges)
    lifted: list[tuple[int, int, int, int, int, int]] = []
    next_id = g.next_edge_id()
    for e1, e2, v in lifts:
        for e in (e1, e2):
            if e not in edges:
                raise ScheduleError(f"lift names missing edge {e}")
        a, b = edges[e1]
        u = b if a == v else a if b == v else None
        a, b = edges[e2]
        w = b if a == v else a if b == v else None
        if u is None or w is None:
            raise ScheduleError(f"edges {e1},{e2} do not meet at {v}")
        if u == w:
            raise ScheduleError("lift would create a loop")
        del edges[e1]
        del edges[e2]
        edges[next_id] = (u, w)
        ep[next_id] = (u, w)
        lifted.append((next_id, e1, e2, u, v, w))
        if step_log is not None:
            step_log.append(("LiftPair", (e1, e2, v), _abstract_digest(edges)))
        next_id += 1

    direction: dict[int, tuple[int, int]] = {}
    cur: dict[int, int] = {v: 0 for v in g.rotation}
    for v in order:
        if v not in cur:
            raise ScheduleError(f"schedule names missing vertex {v}", vertex=v)
        mine = sorted(e for e, (a, b) in edges.items() if v in (a, b))
        k = len(mine)
        need = (2 * (p[v] - cur[v] + k)) % 3
        if need > k:
            raise ScheduleError(
                f"vertex {v} cannot reach its residue with {k} undirected edges",
                vertex=v,
            )
        for idx, e in enumerate(mine):
            a, b = edges[e]
            other = b if a == v else a
            if idx < need:
                direction[e] = (other, v)
                cur[other] -= 1
            else:
                direction[e] = (v, other)
                cur[other] += 1
            del edges[e]
        if step_log is not None:
            step_log.append(("OrientDeleteVertex", (v,), _abstract_digest(edges)))

    if edges:
        raise ScheduleError(f"{len(edges)} edges left undirected by the schedule")
    for new, e1, e2, u, v, w in reversed(lifted):
        t, h = direction.pop(new)
        if t == u:
            direction[e1] = _toward(ep[e1], src=u)
            direction[e2] = _toward(ep[e2], src=v)
        else:
            direction[e2] = _toward(ep[e2], src=w)
            direction[e1] = _toward(ep[e1], src=v)
    o = Orientation(direction=direction)
    if not is_valid_orientation(g, p, o):
        raise ScheduleError("schedule completed but the result does not validate")
    return o


def _toward(endpoints: tuple[int, int], src: int) -> tuple[int, int]:
    u, v = endpoints
    return (u, v) if u == src else (v, u)


# ------------------------------------------------------------- transfer


def transfer_orientation(
    g: EmbeddedGraph,
    side,
    solved: Orientation,
    merged: int,
    contracted: EmbeddedGraph | None = None,
    prescription: dict[int, int] | None = None,
) -> Orientation:
    """Map a valid orientation of the side-contracted graph back onto g.

    Every surviving edge keeps its id across contraction, so each gets the
    solved direction with ``merged`` replaced by its own endpoint inside
    ``side``; edges interior to the side stay undirected.  When the
    contracted graph and its prescription are supplied, ``solved`` is
    validated against them first.
    """
    side = set(side)
    if contracted is not None and prescription is not None:
        if not is_valid_orientation(contracted, prescription, solved):
            raise OrientationError("solved orientation is invalid for the contraction")
    direction: dict[int, tuple[int, int]] = {}
    for e, (t, h) in solved.direction.items():
        if e not in g.edges:
            continue
        u, v = g.edges[e]
        if u in side and v in side:
            continue
        if t == merged:
            t = u if u in side else v
            hh = v if t == u else u
            direction[e] = (t, hh)
        elif h == merged:
            hh = u if u in side else v
            tt = v if hh == u else u
            direction[e] = (tt, hh)
        else:
            direction[e] = (t, h)
    return Orientation(direction=direction, fixed=frozenset(direction))
