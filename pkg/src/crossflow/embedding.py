"""Multigraphs embedded in the plane or the projective plane.

An embedding is stored as a signed rotation system: every vertex carries a
cyclic order of incident edge ends (darts), and every edge carries a sign.
Sign -1 means the edge passes through the crosscap, so a facial traversal
flips its local orientation when it crosses that edge.  A connected system
whose traced Euler characteristic is 2 is a plane embedding; characteristic
1 is the projective plane.

A dart is a pair ``(edge_id, end)`` with ``end`` 0 or 1.  Dart ``(e, 0)``
leaves endpoint 0 of edge ``e`` and arrives at endpoint 1; ``(e, 1)`` is the
reverse.  Faces are traced as orbits of (dart, local orientation) states.
Every orbit has a mirror orbit (the same boundary walked the other way
round); a face is such a pair, reported once through a canonical
representative.  A face anchor is a dart ``a`` naming the face whose orbit
pair contains the state ``(a, +1)``.

Graphs are value objects: every operation returns a new graph and leaves
its input untouched.  Vertex and edge ids are non-negative integers; an
operation that introduces a vertex or an edge uses the smallest id strictly
above every id in its input, and never renumbers anything else.
"""

from __future__ import annotations

from dataclasses import dataclass, field

Dart = tuple[int, int]
State = tuple[Dart, int]


class EmbeddingError(Exception):
    """Base class for errors raised by the embedding layer."""


class StructureError(EmbeddingError):
    """The stored rotation/sign data does not describe an embedding."""


class OperationError(EmbeddingError):
    """An operation was applied to input that violates its contract."""


class DisconnectedError(OperationError):
    """The operation needs a connected graph or would disconnect it."""


def reversed_dart(d: Dart) -> Dart:
    return (d[0], 1 - d[1])


@dataclass
class EmbeddedGraph:
    """A signed rotation system with optional marked structure.

    Fields:
      edges     edge id -> (endpoint0, endpoint1); loops only transiently
      sign      edge id -> +1 or -1
      rotation  vertex id -> cyclic list of darts leaving that vertex
      specified face anchors (one, or two for plane instances split out of a
                projective one); each anchor ``a`` names the face whose orbit
                pair contains state ``(a, +1)``
      tvertex   protected degree-3 vertex, if any
      dvertex   vertex whose incident edges carry forced directions
      darcs     edge id -> "in" | "out", directions at ``dvertex``
      labels    display names; ignored by equality and serialization
    """

    edges: dict[int, tuple[int, int]] = field(default_factory=dict)
    sign: dict[int, int] = field(default_factory=dict)
    rotation: dict[int, list[Dart]] = field(default_factory=dict)
    specified: list[Dart] = field(default_factory=list)
    tvertex: int | None = None
    dvertex: int | None = None
    darcs: dict[int, str] = field(default_factory=dict)
    labels: dict[int, str] = field(default_factory=dict)

    # ------------------------------------------------------------ queries

    @property
    def vertices(self) -> list[int]:
        return sorted(self.rotation)

    def endpoints(self, e: int) -> tuple[int, int]:
        return self.edges[e]

    def is_loop(self, e: int) -> bool:
        u, v = self.edges[e]
        return u == v

    def dart_tail(self, d: Dart) -> int:
        return self.edges[d[0]][d[1]]

    def dart_head(self, d: Dart) -> int:
        return self.edges[d[0]][1 - d[1]]

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def incident(self, v: int) -> list[int]:
        """Edge ids at v, loops listed twice, in rotation order."""
        return [d[0] for d in self.rotation[v]]

    def edges_between(self, u: int, v: int) -> list[int]:
        return sorted(e for e, (a, b) in self.edges.items() if {a, b} == {u, v})

    def next_edge_id(self) -> int:
        return max(self.edges, default=-1) + 1

    def next_vertex_id(self) -> int:
        return max(self.rotation, default=-1) + 1

    def copy(self) -> "EmbeddedGraph":
        return EmbeddedGraph(
            edges=dict(self.edges),
            sign=dict(self.sign),
            rotation={v: list(r) for v, r in self.rotation.items()},
            specified=list(self.specified),
            tvertex=self.tvertex,
            dvertex=self.dvertex,
            darcs=dict(self.darcs),
            labels=dict(self.labels),
        )

    def _canonical_rotation(self, v: int) -> tuple[Dart, ...]:
        rot = self.rotation[v]
        if not rot:
            return ()
        k = rot.index(min(rot))
        return tuple(rot[k:] + rot[:k])

    def _key(self):
        return (
            tuple(sorted(self.edges.items())),
            tuple(sorted(self.sign.items())),
            tuple((v, self._canonical_rotation(v)) for v in self.vertices),
            tuple(sorted(self.specified)),
            self.tvertex,
            self.dvertex,
            tuple(sorted(self.darcs.items())),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmbeddedGraph):
            return NotImplemented
        return self._key() == other._key()

    def is_connected(self) -> bool:
        verts = self.vertices
        if len(verts) <= 1:
            return True
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            x = stack.pop()
            for d in self.rotation[x]:
                y = self.dart_head(d)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(verts)

    def validate(self) -> None:
        """Raise StructureError if the stored data is malformed."""
        expected: dict[int, list[Dart]] = {v: [] for v in self.rotation}
        for e, (u, v) in self.edges.items():
            if u not in self.rotation or v not in self.rotation:
                raise StructureError(f"edge {e} has a missing endpoint")
            if self.sign.get(e) not in (1, -1):
                raise StructureError(f"edge {e} has no sign")
            expected[u].append((e, 0))
            expected[v].append((e, 1))
        if set(self.sign) != set(self.edges):
            raise StructureError("sign table does not match the edge set")
        for v, rot in self.rotation.items():
            if sorted(rot) != sorted(expected[v]):
                raise StructureError(f"rotation at vertex {v} is malformed")
        if len(self.specified) > 2:
            raise StructureError("at most two specified faces are allowed")
        for a in self.specified:
            if a[0] not in self.edges or a[1] not in (0, 1):
                raise StructureError(f"face anchor {a} is not a dart")
        if self.tvertex is not None and self.tvertex not in self.rotation:
            raise StructureError("tvertex is not a vertex")
        if self.dvertex is not None:
            if self.dvertex not in self.rotation:
                raise StructureError("dvertex is not a vertex")
            for e, way in self.darcs.items():
                if way not in ("in", "out"):
                    raise StructureError(f"darc for edge {e} must be in or out")
                if e not in self.edges or self.dvertex not in self.edges[e]:
                    raise StructureError(f"darc edge {e} is not incident to dvertex")
        elif self.darcs:
            raise StructureError("darcs given without a dvertex")


# ---------------------------------------------------------------- tracing


@dataclass(frozen=True)
class FaceWalk:
    """A facial walk: one canonical traversal of a face boundary.

    ``states[i]`` is the (dart, orientation) state traversed at step i,
    ``darts[i]`` its dart and ``tails[i]`` the vertex it leaves.  The empty
    walk stands for the single face of an edgeless graph.
    """

    states: tuple[State, ...]
    tails: tuple[int, ...]

    @property
    def darts(self) -> tuple[Dart, ...]:
        return tuple(d for d, _ in self.states)

    @property
    def length(self) -> int:
        return len(self.states)

    def edge_ids(self) -> set[int]:
        return {d[0] for d, _ in self.states}


def _state_key(st: State) -> tuple[int, int, int]:
    (e, end), s = st
    return (e, end, 0 if s == 1 else 1)


def _face_step(g: EmbeddedGraph, st: State) -> State:
    (e, end), s = st
    head = g.edges[e][1 - end]
    s2 = s * g.sign[e]
    arrive = (e, 1 - end)
    rot = g.rotation[head]
    i = rot.index(arrive)
    j = (i + 1) % len(rot) if s2 == 1 else (i - 1) % len(rot)
    return (rot[j], s2)


def _mirror(g: EmbeddedGraph, st: State) -> State:
    (e, end), s = st
    return ((e, 1 - end), -s * g.sign[e])


def _walk_from(g: EmbeddedGraph, start: State) -> list[State]:
    orbit = [start]
    cur = _face_step(g, start)
    while cur != start:
        orbit.append(cur)
        if len(orbit) > 4 * len(g.edges) + 1:
            raise StructureError("facial walk does not close")
        cur = _face_step(g, cur)
    return orbit


def _as_facewalk(g: EmbeddedGraph, orbit: list[State]) -> FaceWalk:
    return FaceWalk(
        states=tuple(orbit),
        tails=tuple(g.edges[d[0]][d[1]] for d, _ in orbit),
    )


def trace_faces(g: EmbeddedGraph) -> list[FaceWalk]:
    """All faces of the embedding, one canonical walk per face.

    Deterministic: each walk starts at its smallest state and faces are
    listed by that key.  Every dart side belongs to exactly one walk, so the
    walk lengths sum to twice the number of edges.
    """
    if not g.edges:
        return [FaceWalk(states=(), tails=())] if g.rotation else []
    orbit_of: dict[State, int] = {}
    orbits: list[list[State]] = []
    for e in sorted(g.edges):
        for end in (0, 1):
            for s in (1, -1):
                st = ((e, end), s)
                if st in orbit_of:
                    continue
                orbit = _walk_from(g, st)
                for x in orbit:
                    if x in orbit_of:
                        raise StructureError("rotation system is not a permutation")
                    orbit_of[x] = len(orbits)
                orbits.append(orbit)
    faces = []
    taken: set[int] = set()
    for idx, orbit in enumerate(orbits):
        if idx in taken:
            continue
        midx = orbit_of[_mirror(g, orbit[0])]
        if midx == idx:
            raise StructureError("facial walk is its own mirror")
        taken.add(idx)
        taken.add(midx)
        rep = min((orbits[idx], orbits[midx]), key=lambda o: min(map(_state_key, o)))
        k = rep.index(min(rep, key=_state_key))
        faces.append(_as_facewalk(g, rep[k:] + rep[:k]))
    faces.sort(key=lambda f: _state_key(f.states[0]))
    return faces


def face_lookup(g: EmbeddedGraph, faces: list[FaceWalk]) -> dict[State, int]:
    """State -> face index, covering each face's walk and its mirror."""
    table: dict[State, int] = {}
    for i, f in enumerate(faces):
        for st in f.states:
            table[st] = i
            table[_mirror(g, st)] = i
    return table


def face_of_anchor(g: EmbeddedGraph, faces: list[FaceWalk], anchor: Dart) -> int:
    table = face_lookup(g, faces)
    st = (anchor, 1)
    if st not in table:
        raise StructureError(f"anchor {anchor} is not a dart of the graph")
    return table[st]


def canonical_anchor(g: EmbeddedGraph, face: FaceWalk) -> Dart:
    """Smallest dart ``a`` with state ``(a, +1)`` on the face's orbit pair."""
    darts = [d for d, s in face.states if s == 1]
    for st in face.states:
        m = _mirror(g, st)
        if m[1] == 1:
            darts.append(m[0])
    if not darts:
        raise StructureError("face has no positively traversed dart")
    return min(darts)


def specified_walk(g: EmbeddedGraph, which: int = 0) -> FaceWalk:
    """The walk of a specified face, starting at its anchor."""
    if which >= len(g.specified):
        raise OperationError("graph has no specified face with that index")
    anchor = g.specified[which]
    if anchor[0] not in g.edges:
        raise StructureError("specified face anchor is stale")
    return _as_facewalk(g, _walk_from(g, (anchor, 1)))


def boundary_vertices(g: EmbeddedGraph) -> set[int]:
    out: set[int] = set()
    for i in range(len(g.specified)):
        out.update(specified_walk(g, i).tails)
    return out


def boundary_edges(g: EmbeddedGraph) -> set[int]:
    out: set[int] = set()
    for i in range(len(g.specified)):
        out.update(specified_walk(g, i).edge_ids())
    return out


def boundary_cycle(g: EmbeddedGraph, which: int = 0) -> list[int] | None:
    """Vertices of the specified face in walk order, or None if the walk
    repeats a vertex (so the boundary is not a cycle)."""
    walk = specified_walk(g, which)
    tails = list(walk.tails)
    if len(set(tails)) != len(tails) or len(tails) < 2:
        return None
    return tails


def euler_characteristic(g: EmbeddedGraph) -> int:
    """V - E + F for the traced embedding.  Errors on disconnected input."""
    if not g.rotation:
        raise OperationError("empty graph has no embedding")
    if not g.is_connected():
        raise DisconnectedError("euler characteristic needs a connected graph")
    return len(g.rotation) - len(g.edges) + len(trace_faces(g))


# ------------------------------------------------------------ cycle signs


def cycle_sign(g: EmbeddedGraph, cycle_edges) -> int:
    """Product of signs along a cycle; +1 means contractible.

    The edges must induce a single closed cycle (every touched vertex of
    degree exactly 2, connected); their order does not matter.
    """
    edges = list(cycle_edges)
    if not edges or len(set(edges)) != len(edges):
        raise OperationError("cycle must be a non-empty set of distinct edges")
    deg: dict[int, int] = {}
    for e in edges:
        if e not in g.edges:
            raise OperationError(f"unknown edge {e}")
        u, v = g.edges[e]
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    if any(c != 2 for c in deg.values()):
        raise OperationError("edges do not form a cycle")
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in deg}
    for e in edges:
        u, v = g.edges[e]
        adj[u].append((v, e))
        adj[v].append((u, e))
    start = min(deg)
    seen_e = set()
    cur = start
    prev_e = -1
    while True:
        nxt = [(y, e) for y, e in adj[cur] if e != prev_e and e not in seen_e]
        if not nxt:
            break
        cur, prev_e = nxt[0]
        seen_e.add(prev_e)
    if len(seen_e) != len(edges):
        raise OperationError("edges form more than one cycle")
    out = 1
    for e in edges:
        out *= g.sign[e]
    return out


def _balance_potentials(g: EmbeddedGraph, verts: set[int]) -> dict[int, int] | None:
    """Switching potentials making the induced subgraph all-positive, or
    None if some induced cycle has sign -1.  Requires induced connectivity
    per component; works component-wise."""
    pot: dict[int, int] = {}
    for root in sorted(verts):
        if root in pot:
            continue
        pot[root] = 1
        stack = [root]
        while stack:
            x = stack.pop()
            for d in g.rotation[x]:
                e = d[0]
                y = g.dart_head(d)
                if y not in verts:
                    continue
                if x == y:  # induced loop: a -1 loop is a negative cycle
                    if g.sign[e] == -1:
                        return None
                    continue
                want = pot[x] * g.sign[e]
                if y in pot:
                    if pot[y] != want:
                        return None
                else:
                    pot[y] = want
                    stack.append(y)
    return pot


def side_in_open_disk(g: EmbeddedGraph, side) -> bool:
    """True iff the subgraph induced by ``side`` fits in an open disk,
    i.e. every induced cycle is contractible."""
    verts = set(side)
    if not verts:
        raise OperationError("side must be non-empty")
    for v in verts:
        if v not in g.rotation:
            raise OperationError(f"unknown vertex {v}")
    seen = {min(verts)}
    stack = [min(verts)]
    while stack:
        x = stack.pop()
        for d in g.rotation[x]:
            y = g.dart_head(d)
            if y in verts and y not in seen:
                seen.add(y)
                stack.append(y)
    if seen != verts:
        raise DisconnectedError("side does not induce a connected subgraph")
    return _balance_potentials(g, verts) is not None


def is_contractible_chord(g: EmbeddedGraph, e: int) -> bool:
    """Whether chord ``e`` of the specified face closes a contractible cycle
    with the face boundary.  The boundary must be a cycle and ``e`` must
    join two of its vertices without lying on it."""
    if e not in g.edges:
        raise OperationError(f"unknown edge {e}")
    walk = specified_walk(g)
    cyc = boundary_cycle(g)
    if cyc is None:
        raise OperationError("specified face boundary is not a cycle")
    if e in walk.edge_ids():
        raise OperationError(f"edge {e} lies on the specified face boundary")
    u, v = g.edges[e]
    if u == v or u not in cyc or v not in cyc:
        raise OperationError(f"edge {e} is not a chord of the boundary")
    i, j = cyc.index(u), cyc.index(v)
    if i > j:
        i, j = j, i
    arc = 1
    for k in range(i, j):
        arc *= g.sign[walk.darts[k][0]]
    return arc * g.sign[e] == 1


# ------------------------------------------------------------- switching


def switch_vertex(g: EmbeddedGraph, v: int) -> EmbeddedGraph:
    """Reverse the local orientation at ``v``: flip the sign of every
    non-loop edge at ``v`` and reverse its rotation.  The embedding is
    unchanged; only its description moves."""
    if v not in g.rotation:
        raise OperationError(f"unknown vertex {v}")
    out = g.copy()
    for e, (a, b) in out.edges.items():
        if (a == v) != (b == v):
            out.sign[e] = -out.sign[e]
    out.rotation[v] = list(reversed(out.rotation[v]))
    return out


def _switch_inplace(g: EmbeddedGraph, v: int) -> None:
    for e, (a, b) in g.edges.items():
        if (a == v) != (b == v):
            g.sign[e] = -g.sign[e]
    g.rotation[v] = list(reversed(g.rotation[v]))


def _resign_all_positive(g: EmbeddedGraph, track: list[State]) -> None:
    """Switch vertices in place until every sign is +1.  ``track`` states
    are relabelled alongside (switching at a state's tail flips its
    orientation bit).  Raises if the graph is not balanced."""
    pot = _balance_potentials(g, set(g.rotation))
    if pot is None:
        raise StructureError("graph is not balanced; cannot re-sign to +1")
    flipped = {v for v, s in pot.items() if s == -1}
    for i, ((d, s)) in enumerate(track):
        if g.edges[d[0]][d[1]] in flipped:
            track[i] = (d, -s)
    for v in sorted(flipped):
        _switch_inplace(g, v)
    if any(s != 1 for s in g.sign.values()):
        raise StructureError("re-signing failed")


# ----------------------------------------------------- face-updating ops


def _reanchor(g: EmbeddedGraph, witnesses: list[State | None]) -> None:
    """Set g.specified from witness states, canonically, deduplicated."""
    faces = trace_faces(g)
    table = face_lookup(g, faces)
    anchors: list[Dart] = []
    for w in witnesses:
        if w is None:
            continue
        if w not in table:
            raise StructureError("face witness was lost by the operation")
        a = canonical_anchor(g, faces[table[w]])
        if a not in anchors:
            anchors.append(a)
    g.specified = anchors


def _witness_for_face(walk: FaceWalk, dead_edges: set[int]) -> State | None:
    for st in walk.states:
        if st[0][0] not in dead_edges:
            return st
    return None


def delete_edge(g: EmbeddedGraph, e: int) -> EmbeddedGraph:
    """Delete one edge.  If it lies on a specified face boundary the face
    absorbs its neighbour across ``e``; other faces are untouched.  Deleting
    a bridge raises DisconnectedError."""
    if e not in g.edges:
        raise OperationError(f"unknown edge {e}")
    witnesses = []
    for i in range(len(g.specified)):
        w = _witness_for_face(specified_walk(g, i), {e})
        if w is None:
            raise OperationError("specified face is bounded by that edge alone")
        witnesses.append(w)
    out = g.copy()
    u, v = out.edges.pop(e)
    del out.sign[e]
    out.rotation[u].remove((e, 0))
    out.rotation[v].remove((e, 1))
    out.darcs.pop(e, None)
    if not out.is_connected():
        raise DisconnectedError(f"deleting edge {e} disconnects the graph")
    _reanchor(out, witnesses)
    return out


def delete_vertex(g: EmbeddedGraph, v: int) -> EmbeddedGraph:
    """Delete a vertex with all incident edges.  A specified face whose
    boundary uses the vertex merges with every face at the vertex."""
    if v not in g.rotation:
        raise OperationError(f"unknown vertex {v}")
    dead = {d[0] for d in g.rotation[v]}
    witnesses: list[State | None] = []
    for i in range(len(g.specified)):
        witnesses.append(_witness_for_face(specified_walk(g, i), dead))
    if any(w is None for w in witnesses):
        # boundary entirely at v: fall back to any surviving side of a face
        # incident to v, which joins the same merged face
        repl = None
        faces = trace_faces(g)
        for f in faces:
            if v in f.tails:
                repl = _witness_for_face(f, dead)
                if repl is not None:
                    break
        witnesses = [repl if w is None else w for w in witnesses]
    out = g.copy()
    for e in dead:
        a, b = out.edges.pop(e)
        del out.sign[e]
        for end, x in ((0, a), (1, b)):
            if x != v:
                out.rotation[x].remove((e, end))
        out.darcs.pop(e, None)
    del out.rotation[v]
    out.labels.pop(v, None)
    if out.tvertex == v:
        out.tvertex = None
    if out.dvertex == v:
        out.dvertex = None
        out.darcs = {}
    if out.rotation and not out.is_connected():
        raise DisconnectedError(f"deleting vertex {v} disconnects the graph")
    _reanchor(out, [w for w in witnesses if w is not None] or [None])
    return out


def _contract_edge_inplace(g: EmbeddedGraph, e: int, track: list[State]) -> int:
    """Contract non-loop edge ``e``, merging the larger endpoint id into the
    smaller.  Returns the surviving vertex."""
    u, v = g.edges[e]
    keep, gone = (u, v) if u < v else (v, u)
    if g.sign[e] == -1:
        for i, (d, s) in enumerate(track):
            if g.edges[d[0]][d[1]] == gone:
                track[i] = (d, -s)
        _switch_inplace(g, gone)
    dk = (e, 0) if g.edges[e][0] == keep else (e, 1)
    dg = reversed_dart(dk)
    rk = g.rotation[keep]
    rg = g.rotation[gone]
    ik = rk.index(dk)
    ig = rg.index(dg)
    spliced = rg[ig + 1 :] + rg[:ig]
    g.rotation[keep] = rk[:ik] + spliced + rk[ik + 1 :]
    del g.rotation[gone]
    for d in spliced:
        eid, end = d
        a, b = g.edges[eid]
        g.edges[eid] = (keep, b) if end == 0 else (a, keep)
    del g.edges[e]
    del g.sign[e]
    g.labels.pop(gone, None)
    return keep


def _delete_loop_inplace(g: EmbeddedGraph, e: int) -> None:
    v = g.edges[e][0]
    g.rotation[v] = [d for d in g.rotation[v] if d[0] != e]
    del g.edges[e]
    del g.sign[e]


def _face_at_vertex_anchor(g: EmbeddedGraph, v: int) -> Dart:
    faces = trace_faces(g)
    best = None
    for f in faces:
        if v in f.tails:
            a = canonical_anchor(g, f)
            if best is None or a < best:
                best = a
    if best is None:
        raise StructureError("no face is incident to the merged vertex")
    return best


def contract_subgraph(
    g: EmbeddedGraph,
    side,
    new_face_anchor: Dart | None = None,
    face_policy: str | None = None,
) -> EmbeddedGraph:
    """Contract the connected subgraph induced by ``side`` to one vertex.

    Edges inside the side disappear (parallel ones become loops and are
    removed); the new vertex takes the next free id and inherits the cyclic
    order in which the remaining edges leave the contracted patch.  A
    specified face that loses only part of its boundary keeps its identity;
    if its entire boundary is swallowed the caller must choose a
    replacement, either via ``new_face_anchor`` or with
    ``face_policy="at-merged"`` (canonical face at the new vertex).
    """
    verts = set(side)
    if not verts or not verts <= set(g.rotation):
        raise OperationError("side must be a non-empty set of vertices")
    seen = {min(verts)}
    stack = [min(verts)]
    while stack:
        x = stack.pop()
        for d in g.rotation[x]:
            y = g.dart_head(d)
            if y in verts and y not in seen:
                seen.add(y)
                stack.append(y)
    if seen != verts:
        raise DisconnectedError("side does not induce a connected subgraph")
    if len(verts) == len(g.rotation):
        raise OperationError("cannot contract the whole graph")
    out = g.copy()
    if len(verts) == 1:
        return out
    internal = sorted(
        e for e, (a, b) in g.edges.items() if a in verts and b in verts
    )
    internal_set = set(internal)
    witnesses: list[State | None] = []
    swallowed = []
    for i in range(len(g.specified)):
        walk = specified_walk(g, i)
        w = _witness_for_face(walk, internal_set)
        witnesses.append(w)
        if w is None:
            swallowed.append(i)
    if swallowed and new_face_anchor is None and face_policy != "at-merged":
        raise OperationError(
            "contraction swallows the specified face; choose a replacement"
        )
    track: list[State] = [w for w in witnesses if w is not None]
    merged = None
    for e in internal:
        a, b = out.edges[e]
        if a == b:
            _delete_loop_inplace(out, e)
        else:
            merged = _contract_edge_inplace(out, e, track)
    if merged is None:
        raise OperationError("side has at least two vertices but no internal edge")
    # put tracked witnesses back in order
    it = iter(track)
    witnesses = [next(it) if w is not None else None for w in witnesses]
    fresh = g.next_vertex_id()
    out.rotation[fresh] = out.rotation.pop(merged)
    for d in out.rotation[fresh]:
        eid, end = d
        a, b = out.edges[eid]
        out.edges[eid] = (fresh, b) if end == 0 else (a, fresh)
    if out.tvertex in verts:
        out.tvertex = None
    if out.dvertex in verts:
        out.dvertex = None
        out.darcs = {}
    for v in verts:
        out.labels.pop(v, None)
    _reanchor(out, [w for w in witnesses if w is not None] or [None])
    for i in swallowed:
        anchor = new_face_anchor
        if anchor is None:
            anchor = _face_at_vertex_anchor(out, fresh)
        elif anchor[0] not in out.edges:
            raise OperationError("replacement face anchor is not a dart")
        if anchor not in out.specified:
            out.specified.insert(i, anchor)
    return out


def lift_pair(g: EmbeddedGraph, e1: int, e2: int, v: int) -> EmbeddedGraph:
    """Replace the path ``u - v - w`` (edges e1, e2 meeting at v) by a single
    new edge ``u w`` carrying the product of the two signs.  The new edge is
    embedded along the old path: it takes e1's slot at u and e2's slot at w.
    """
    for e in (e1, e2):
        if e not in g.edges:
            raise OperationError(f"unknown edge {e}")
        if g.is_loop(e):
            raise OperationError("cannot lift a loop")
    if e1 == e2:
        raise OperationError("lift needs two distinct edges")
    if v not in g.edges[e1] or v not in g.edges[e2]:
        raise OperationError(f"edges {e1} and {e2} do not meet at vertex {v}")
    a, b = g.edges[e1]
    u = b if a == v else a
    a, b = g.edges[e2]
    w = b if a == v else a
    if u == w:
        raise OperationError("lift would create a loop")
    dead = {e1, e2}
    witnesses = []
    for i in range(len(g.specified)):
        wit = _witness_for_face(specified_walk(g, i), dead)
        if wit is None:
            raise OperationError("specified face is bounded by the lifted pair")
        witnesses.append(wit)
    out = g.copy()
    new = out.next_edge_id()
    out.edges[new] = (u, w)
    out.sign[new] = out.sign[e1] * out.sign[e2]
    d1u = (e1, 0) if g.edges[e1][0] == u else (e1, 1)
    d2w = (e2, 0) if g.edges[e2][0] == w else (e2, 1)
    out.rotation[u][out.rotation[u].index(d1u)] = (new, 0)
    out.rotation[w][out.rotation[w].index(d2w)] = (new, 1)
    out.rotation[v] = [
        d for d in out.rotation[v] if d not in (reversed_dart(d1u), reversed_dart(d2w))
    ]
    for e in (e1, e2):
        del out.edges[e]
        del out.sign[e]
        out.darcs.pop(e, None)
    _reanchor(out, witnesses)
    return out


def planarize_along_chord(g: EmbeddedGraph, e: int) -> EmbeddedGraph:
    """Given a non-contractible chord ``uv`` of the specified face, return
    the graph minus ``u`` and ``v``, re-signed all-positive; the result is a
    plane embedding whose specified face is the one that absorbed the old
    specified face."""
    if is_contractible_chord(g, e):
        raise OperationError(f"chord {e} is contractible")
    u, v = g.edges[e]
    out = delete_vertex(g, u)
    out = delete_vertex(out, v)
    track: list[State] = [(a, 1) for a in out.specified]
    _resign_all_positive(out, track)
    _reanchor(out, list(track))
    if euler_characteristic(out) != 2:
        raise StructureError("planarization did not produce a plane embedding")
    return out


def _corner_gap(rot: list[Dart], arrive: Dart, depart: Dart) -> int:
    """Index of the slot between two cyclically adjacent darts: the cut
    position k such that the gap lies between rot[k-1] and rot[k]."""
    n = len(rot)
    i, j = rot.index(arrive), rot.index(depart)
    if (i + 1) % n == j:
        return j
    if (j + 1) % n == i:
        return i
    raise StructureError("face corner darts are not adjacent in the rotation")


def split_doubled_boundary_vertex(g: EmbeddedGraph, v: int) -> EmbeddedGraph:
    """A projective-plane instance whose specified face visits ``v`` twice
    is cut along the crosscap curve through the face and ``v``, then the two
    copies of ``v`` are re-identified in the plane.  The result is a plane
    embedding of the same graph with two specified faces meeting at ``v``.
    """
    if len(g.specified) != 1:
        raise OperationError("split needs exactly one specified face")
    walk = specified_walk(g)
    occ = [i for i, t in enumerate(walk.tails) if t == v]
    if len(occ) < 2:
        raise OperationError(f"vertex {v} does not repeat on the boundary")
    p1, p2 = occ[0], occ[1]
    n = walk.length
    out = g.copy()
    rot = out.rotation[v]
    gaps = []
    for p in (p1, p2):
        depart = walk.darts[p]
        arrive = reversed_dart(walk.darts[(p - 1) % n])
        gaps.append(_corner_gap(rot, arrive, depart))
    c1, c2 = gaps
    if c1 == c2:
        raise OperationError("boundary visits share a corner; cannot split")
    if c1 > c2:
        c1, c2 = c2, c1
    arc_a = rot[c1:c2]
    arc_b = rot[c2:] + rot[:c1]
    fresh = out.next_vertex_id()
    out.rotation[v] = arc_a
    out.rotation[fresh] = arc_b
    for d in arc_b:
        eid, end = d
        a, b = out.edges[eid]
        out.edges[eid] = (fresh, b) if end == 0 else (a, fresh)
    # witness into the cut-open face: the first boundary departure survives
    st0 = walk.states[p1] if walk.darts[p1] in arc_a else walk.states[p2]
    track: list[State] = [st0]
    try:
        chi = euler_characteristic(out)
    except DisconnectedError:
        chi = None
    if chi != 2:
        raise OperationError("boundary visits do not cut the crosscap")
    _resign_all_positive(out, track)
    faces = trace_faces(out)
    table = face_lookup(out, faces)
    shared = faces[table[track[0]]]
    pos = {t: i for i, t in enumerate(shared.tails)}
    if v not in pos or fresh not in pos:
        raise StructureError("cut-open face does not meet both vertex copies")

    def gap_of(walkf: FaceWalk, x: int) -> tuple[int, Dart]:
        i = walkf.tails.index(x)
        depart = walkf.darts[i]
        arrive = reversed_dart(walkf.darts[(i - 1) % walkf.length])
        return _corner_gap(out.rotation[x], arrive, depart), depart

    gv, dep_v = gap_of(shared, v)
    gw, dep_w = gap_of(shared, fresh)
    rv = out.rotation[v]
    rw = out.rotation[fresh]
    merged_rot = rv[gv:] + rv[:gv] + rw[gw:] + rw[:gw]
    del out.rotation[fresh]
    out.rotation[v] = merged_rot
    for eid, end in merged_rot:
        a, b = out.edges[eid]
        if end == 0 and a == fresh:
            out.edges[eid] = (v, b)
        elif end == 1 and b == fresh:
            out.edges[eid] = (a, v)
    if any(s != 1 for s in out.sign.values()) or euler_characteristic(out) != 2:
        raise StructureError("re-identification broke the plane embedding")
    faces = trace_faces(out)
    table = face_lookup(out, faces)
    anchors = []
    for dep in (dep_v, dep_w):
        dep = (dep[0], dep[1])
        st = (dep, 1)
        if st not in table:
            raise StructureError("lost a face after re-identification")
        a = canonical_anchor(out, faces[table[st]])
        if a not in anchors:
            anchors.append(a)
    if len(anchors) != 2:
        raise StructureError("split did not produce two distinct faces")
    out.specified = anchors
    return out
