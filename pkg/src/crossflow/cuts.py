"""Edge cuts: connectivity, exhaustive small-cut enumeration, the
Type 1/2/3 taxonomy against the specified face, crossing tests, and the
validators for the graph classes the solver dispatches on.

Cut types count boundary edges of the specified face inside the cut:
Type 1 has none, Type 2 exactly two, Type 3 at least four (the count is
even because the boundary is a cycle).  A cut is robust when both sides
hold at least two vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .embedding import (
    EmbeddedGraph,
    OperationError,
    _balance_potentials,
    boundary_cycle,
    boundary_vertices,
    euler_characteristic,
    specified_walk,
)
from .orient import prescription_ok

CUT_VERTEX_CEILING = 24


@dataclass(frozen=True)
class EdgeCut:
    """One edge cut, named by a side.  ``vertices`` is the graph's vertex
    set, so the complement is recoverable without the graph in hand."""

    side: frozenset[int]
    vertices: frozenset[int]
    edges: tuple[int, ...]
    size: int
    robust: bool
    cut_type: int | None = None
    disk_side: str | None = None

    @property
    def complement(self) -> frozenset[int]:
        return self.vertices - self.side


def cut_edges(g: EmbeddedGraph, side) -> tuple[int, ...]:
    side = set(side)
    return tuple(
        sorted(e for e, (u, v) in g.edges.items() if (u in side) != (v in side))
    )


def make_cut(g: EmbeddedGraph, side) -> EdgeCut:
    side = frozenset(side)
    verts = frozenset(g.rotation)
    if not side or not side < verts:
        raise OperationError("cut side must be a proper non-empty vertex subset")
    edges = cut_edges(g, side)
    return EdgeCut(
        side=side,
        vertices=verts,
        edges=edges,
        size=len(edges),
        robust=len(side) >= 2 and len(verts - side) >= 2,
    )


def _induced_connected(g: EmbeddedGraph, side: frozenset[int]) -> bool:
    start = min(side)
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for d in g.rotation[x]:
            y = g.dart_head(d)
            if y in side and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(side)


def _normal_side(g: EmbeddedGraph, side: frozenset[int]) -> bool:
    """Minimal-cut normal form: the side induces a connected subgraph, or
    is exactly two mutually non-adjacent vertices."""
    if _induced_connected(g, side):
        return True
    if len(side) != 2:
        return False
    a, b = side
    return not any({u, v} == {a, b} for u, v in g.edges.values())


def _scan_masks(g: EmbeddedGraph, max_size: int, min_side: int):
    """All bipartition sides (as vertex frozensets, anchor vertex excluded)
    cutting at most max_size edges with both sides >= min_side."""
    verts = g.vertices
    n = len(verts)
    free = verts[1:]
    index = {v: i for i, v in enumerate(free)}
    index[verts[0]] = len(free)
    iu = np.array([index[u] for u, _ in g.edges.values()], dtype=np.int64)
    iv = np.array([index[v] for _, v in g.edges.values()], dtype=np.int64)
    masks = _kernels.cut_scan(iu, iv, len(free), n, max_size, min_side)
    for mask in masks:
        yield frozenset(free[i] for i in range(len(free)) if (int(mask) >> i) & 1)


def enumerate_robust_cuts(
    g: EmbeddedGraph, max_size: int, min_side: int = 2
) -> list[EdgeCut]:
    """Every cut of size <= max_size whose sides both have >= min_side
    vertices and whose named side is in normal form; one entry per
    bipartition, the normal side named (lexicographically smaller when both
    qualify); sorted by (size, side).  Exhaustive, so refused above
    24 vertices."""
    verts = g.vertices
    if len(verts) > CUT_VERTEX_CEILING:
        raise OperationError(
            f"exhaustive cut scan is capped at {CUT_VERTEX_CEILING} vertices"
        )
    if len(verts) < 2:
        return []
    out = []
    vset = frozenset(verts)
    for side in _scan_masks(g, max_size, min_side):
        comp = vset - side
        ok_a = _normal_side(g, side)
        ok_b = _normal_side(g, comp)
        if not ok_a and not ok_b:
            continue
        if ok_a and ok_b:
            rep = min(side, comp, key=sorted)
        else:
            rep = side if ok_a else comp
        edges = cut_edges(g, rep)
        out.append(
            EdgeCut(
                side=rep,
                vertices=vset,
                edges=edges,
                size=len(edges),
                robust=len(rep) >= 2 and len(vset - rep) >= 2,
            )
        )
    out.sort(key=lambda c: (c.size, sorted(c.side)))
    return out


def _all_small_cuts(g: EmbeddedGraph, max_size: int):
    """(side, edge set) of every bipartition cutting <= max_size edges; no
    normal-form or side-size filtering."""
    if len(g.vertices) > CUT_VERTEX_CEILING:
        raise OperationError(
            f"exhaustive cut scan is capped at {CUT_VERTEX_CEILING} vertices"
        )
    for side in _scan_masks(g, max_size, 1):
        yield side, frozenset(cut_edges(g, side))


def classify_cut(g: EmbeddedGraph, cut: EdgeCut) -> EdgeCut:
    """Fill cut_type from the boundary-edge count of the specified face
    (which must be bounded by a cycle) and disk_side from sign balance of
    each side's induced subgraph."""
    if boundary_cycle(g) is None:
        raise OperationError("specified face boundary is not a cycle")
    brd = specified_walk(g).edge_ids()
    k = len(set(cut.edges) & brd)
    if k % 2 != 0:
        raise OperationError("cut meets the boundary cycle in an odd edge count")
    cut_type = 1 if k == 0 else (2 if k == 2 else 3)
    in_disk_a = _balance_potentials(g, set(cut.side)) is not None
    in_disk_b = _balance_potentials(g, set(cut.complement)) is not None
    disk = {
        (True, True): "both",
        (True, False): "side",
        (False, True): "complement",
        (False, False): "neither",
    }[(in_disk_a, in_disk_b)]
    return replace(cut, cut_type=cut_type, disk_side=disk)


def cuts_cross(c1: EdgeCut, c2: EdgeCut) -> bool:
    """Whether the four corner regions of the two bipartitions are all
    non-empty."""
    if c1.vertices != c2.vertices:
        raise OperationError("cuts come from different graphs")
    a, b = c1.side, c2.side
    u = c1.vertices
    return bool(a & b) and bool(a - b) and bool(b - a) and bool(u - (a | b))


# ------------------------------------------------------------- max flow


def _max_flow(caps: dict[int, dict[int, int]], s: int, t: int) -> int:
    """Edmonds-Karp on an integer-capacity digraph given as nested dicts.
    Mutates caps (residual form)."""
    flow = 0
    while True:
        prev = {s: s}
        queue = [s]
        while queue and t not in prev:
            nxt = []
            for x in queue:
                for y, c in caps.get(x, {}).items():
                    if c > 0 and y not in prev:
                        prev[y] = x
                        nxt.append(y)
            queue = nxt
        if t not in prev:
            return flow
        path = [t]
        while path[-1] != s:
            path.append(prev[path[-1]])
        path.reverse()
        push = min(caps[path[i]][path[i + 1]] for i in range(len(path) - 1))
        for i in range(len(path) - 1):
            x, y = path[i], path[i + 1]
            caps[x][y] -= push
            caps.setdefault(y, {})[x] = caps[y].get(x, 0) + push
        flow += push


def _unit_caps(g: EmbeddedGraph) -> dict[int, dict[int, int]]:
    caps: dict[int, dict[int, int]] = {v: {} for v in g.rotation}
    for u, v in g.edges.values():
        if u == v:
            continue
        caps[u][v] = caps[u].get(v, 0) + 1
        caps[v][u] = caps[v].get(u, 0) + 1
    return caps


def edge_connectivity(g: EmbeddedGraph) -> int:
    """Global minimum cut size by max-flow from a fixed vertex to every
    other vertex."""
    verts = g.vertices
    if len(verts) < 2:
        raise OperationError("edge connectivity needs at least two vertices")
    if not g.is_connected():
        return 0
    s = verts[0]
    best = None
    for t in verts[1:]:
        caps = _unit_caps(g)
        f = _max_flow(caps, s, t)
        if best is None or f < best:
            best = f
    return best


def boundary_connectivity(g: EmbeddedGraph, v: int) -> int:
    """Max number of edge-disjoint paths from v to the specified-face
    boundary vertex set (all specified faces pooled)."""
    if v not in g.rotation:
        raise OperationError(f"unknown vertex {v}")
    bnd = boundary_vertices(g)
    if v in bnd:
        raise OperationError(f"vertex {v} lies on the boundary")
    if not bnd:
        raise OperationError("graph has no specified face")
    sink = -1
    caps = _unit_caps(g)
    big = 2 * len(g.edges) + 1
    for b in bnd:
        caps[b][sink] = big
    caps[sink] = {}
    return _max_flow(caps, v, sink)


# ------------------------------------------------------- class validators


@dataclass(frozen=True)
class ClassReport:
    class_name: str
    holds: bool
    violations: tuple[tuple[int, str], ...]


def _surface_violations(g, p, chi_want: int, n_faces: int) -> list[tuple[int, str]]:
    """Index-0 plumbing checks shared by every class: connectivity, the
    expected surface, the expected number of face anchors, and p."""
    out = []
    if not g.rotation:
        return [(0, "empty graph")]
    if not g.is_connected():
        return [(0, "graph is disconnected")]
    chi = euler_characteristic(g)
    if chi != chi_want:
        out.append((0, f"euler characteristic {chi}, expected {chi_want}"))
    if len(g.specified) != n_faces:
        out.append((0, f"{len(g.specified)} specified faces, expected {n_faces}"))
    if not prescription_ok(g, p):
        out.append((0, "prescription invalid"))
    return out


def _three_cut_sets(g: EmbeddedGraph):
    """Distinct 3-edge-cuts as (edge set -> one witness side)."""
    found: dict[frozenset[int], frozenset[int]] = {}
    for side, edges in _all_small_cuts(g, 3):
        if len(edges) == 3 and edges not in found:
            found[edges] = side
    return found


def _vertex_cut(g: EmbeddedGraph, v: int) -> frozenset[int]:
    return frozenset(e for e, uv in g.edges.items() if v in uv and uv[0] != uv[1])


def _fmt_cut(edges) -> str:
    return "edges " + ",".join(map(str, sorted(edges)))


def _check_paths(g, bound: int, cond: int, out: list) -> None:
    if not g.specified:
        return
    bnd = boundary_vertices(g)
    for v in g.vertices:
        if v in bnd:
            continue
        k = boundary_connectivity(g, v)
        if k < bound:
            out.append((cond, f"vertex {v} has only {k} edge-disjoint paths"))


def _d_is_oriented(g) -> bool:
    if g.dvertex is None:
        return False
    return set(g.darcs) == set(g.incident(g.dvertex))


def check_class(g: EmbeddedGraph, p: dict[int, int], class_name: str) -> ClassReport:
    """Evaluate every condition of the named class definition.

    Violations carry the condition index; index 0 is reserved for instance
    plumbing (surface, face-anchor count, prescription validity).  Class
    conditions, by index:

    pt / 3pt (projective, one face, optional protected vertex t):
      1 3-edge-connected           2 at most one special vertex, no d
      3 t has degree 3, on the boundary
      4 (pt) the only 3-edge-cut is the one around t
        (3pt) all non-t degrees >= 4; every 3-cut side holding t is in a disk
      5 off-boundary vertices have >= 5 edge-disjoint paths to the boundary
      Graphs on <= 2 vertices: only conditions 0-1 apply.

    ft (plane, two faces sharing a vertex, at most one of d / t):
      1 3-edge-connected           2 two faces, not both d and t
      3 boundaries share a vertex  4 d: degree 3..5, fully directed, on both
      5 t: degree 3, on a boundary
      6 the only 3-edge-cut is around d or around t
      7 off-boundary vertices have >= 5 paths to the pooled boundary

    dts / 3dts (plane, one face, d plus inferred degree-3 role vertices):
      the undirected degree-3 vertices play the t/s roles
      1 3-edge-connected           2 at most two role vertices
      3 d: degree 3..5, fully directed, on the boundary
      4 role vertices on the boundary
      5 deg(d) <= 5 - (number of role vertices)
      6 (dts) every 3-edge-cut is around d or a role vertex
        (3dts) if d and both roles exist, every 3-cut splits one from two
      7 off-boundary vertices have >= 5 paths to the boundary
    """
    name = class_name.lower()
    if name in ("pt", "3pt"):
        return _check_pt(g, p, strong=(name == "3pt"))
    if name == "ft":
        return _check_ft(g, p)
    if name in ("dts", "3dts"):
        return _check_dts(g, p, strong=(name == "3dts"))
    raise OperationError(f"unknown class {class_name!r}")


def _check_pt(g, p, strong: bool) -> ClassReport:
    name = "3PT" if strong else "PT"
    v = _surface_violations(g, p, chi_want=1, n_faces=1)
    if v and v[0][1] in ("empty graph", "graph is disconnected"):
        return ClassReport(name, False, tuple(v))
    small = len(g.vertices) <= 2
    if len(g.vertices) >= 2:
        lam = edge_connectivity(g)
        if lam < 3:
            v.append((1, f"edge connectivity {lam}"))
    if small:
        return ClassReport(name, not v, tuple(v))
    bnd = boundary_vertices(g) if g.specified else set()
    t = g.tvertex
    if g.dvertex is not None:
        v.append((2, f"directed vertex {g.dvertex} is not allowed"))
    if t is not None:
        if g.degree(t) != 3:
            v.append((3, f"t={t} has degree {g.degree(t)}"))
        if t not in bnd:
            v.append((3, f"t={t} is not on the boundary"))
    allowed = {_vertex_cut(g, t)} if t is not None else set()
    three = _three_cut_sets(g)
    if strong:
        for x in g.vertices:
            if x != t and g.degree(x) < 4:
                v.append((4, f"vertex {x} has degree {g.degree(x)}"))
        if t is not None:
            for edges, side in three.items():
                tside = side if t in side else frozenset(g.rotation) - side
                if _balance_potentials(g, set(tside)) is None:
                    v.append((4, f"t-side of {_fmt_cut(edges)} is not in a disk"))
    else:
        for edges in three:
            if edges not in allowed:
                v.append((4, _fmt_cut(edges)))
    _check_paths(g, bound=5, cond=5, out=v)
    return ClassReport(name, not v, tuple(v))


def _check_ft(g, p) -> ClassReport:
    v = _surface_violations(g, p, chi_want=2, n_faces=2)
    if v and v[0][1] in ("empty graph", "graph is disconnected"):
        return ClassReport("FT", False, tuple(v))
    if len(g.vertices) >= 2:
        lam = edge_connectivity(g)
        if lam < 3:
            v.append((1, f"edge connectivity {lam}"))
    d, t = g.dvertex, g.tvertex
    if d is not None and t is not None:
        v.append((2, "both d and t are present"))
    b0 = set(specified_walk(g, 0).tails) if g.specified else set()
    b1 = set(specified_walk(g, 1).tails) if len(g.specified) > 1 else set()
    if g.specified and len(g.specified) > 1 and not b0 & b1:
        v.append((3, "the two boundaries share no vertex"))
    if d is not None:
        if g.degree(d) not in (3, 4, 5):
            v.append((4, f"d={d} has degree {g.degree(d)}"))
        if not _d_is_oriented(g):
            v.append((4, f"d={d} is not fully directed"))
        if not (d in b0 and d in b1):
            v.append((4, f"d={d} is not on both boundaries"))
    if t is not None:
        if g.degree(t) != 3:
            v.append((5, f"t={t} has degree {g.degree(t)}"))
        if t not in b0 | b1:
            v.append((5, f"t={t} is not on a boundary"))
    allowed = {_vertex_cut(g, x) for x in (d, t) if x is not None}
    three = _three_cut_sets(g)
    if len(three) > 1:
        v.append((6, f"{len(three)} distinct 3-edge-cuts"))
    for edges in three:
        if edges not in allowed:
            v.append((6, _fmt_cut(edges)))
    _check_paths(g, bound=5, cond=7, out=v)
    return ClassReport("FT", not v, tuple(v))


def _check_dts(g, p, strong: bool) -> ClassReport:
    name = "3DTS" if strong else "DTS"
    v = _surface_violations(g, p, chi_want=2, n_faces=1)
    if v and v[0][1] in ("empty graph", "graph is disconnected"):
        return ClassReport(name, False, tuple(v))
    if len(g.vertices) >= 2:
        lam = edge_connectivity(g)
        if lam < 3:
            v.append((1, f"edge connectivity {lam}"))
    d = g.dvertex
    roles = sorted(
        x for x in g.vertices if x != d and g.degree(x) == 3
    )
    if len(roles) > 2:
        v.append((2, f"degree-3 vertices {roles} exceed the two t/s slots"))
        roles = roles[:2]
    bnd = boundary_vertices(g) if g.specified else set()
    if d is not None:
        if g.degree(d) not in (3, 4, 5):
            v.append((3, f"d={d} has degree {g.degree(d)}"))
        if not _d_is_oriented(g):
            v.append((3, f"d={d} is not fully directed"))
        if d not in bnd:
            v.append((3, f"d={d} is not on the boundary"))
    for x in roles:
        if x not in bnd:
            v.append((4, f"degree-3 vertex {x} is not on the boundary"))
    if d is not None and g.degree(d) > 5 - len(roles):
        v.append((5, f"deg(d)={g.degree(d)} with {len(roles)} role vertices"))
    three = _three_cut_sets(g)
    if strong:
        if d is not None and len(roles) == 2:
            marks = [d, roles[0], roles[1]]
            for edges, side in three.items():
                inside = sum(1 for x in marks if x in side)
                if inside not in (1, 2):
                    v.append((6, f"{_fmt_cut(edges)} does not split d/t/s 1-vs-2"))
    else:
        allowed = {_vertex_cut(g, x) for x in [d, *roles] if x is not None}
        if len(three) > 3:
            v.append((6, f"{len(three)} distinct 3-edge-cuts"))
        for edges in three:
            if edges not in allowed:
                v.append((6, _fmt_cut(edges)))
    _check_paths(g, bound=5, cond=7, out=v)
    return ClassReport(name, not v, tuple(v))
