"""Finite mixed planar graphs with explicit straight-line drawings.

A graph is a set of vertices with exact rational coordinates plus directed
and undirected probabilistic edges.  The combinatorial embedding is derived
from the coordinates: per-vertex counterclockwise angular order of edge ends
(the rotation system), faces by the standard rotation walk, and the outer
face by signed area.  Both orientations of one vertex pair share a single
drawn segment, so they form one *underlying* edge with two darts.

``normalize`` performs the reductions used before dual construction and path
resampling: collapse the source/sink sets to single apex vertices joined by
probability-1 edges, replace each undirected edge by two independent
directed edges of the same probability, and add a probability-0 reverse for
every one-way directed edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from .geometry import (
    Point,
    ccw_less,
    polygon_signed_area2,
    segments_conflict,
    to_fraction,
)


class GraphError(ValueError):
    """Invalid graph description or failed structural invariant."""


@dataclass(frozen=True)
class Vertex:
    id: int
    pos: Point


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int
    head: int
    oriented: bool
    p: Fraction


_ROLE_ALIASES = {
    "u": "u", "u-block": "u",
    "a": "a", "a-block": "a",
    "w": "w", "w-block": "w",
    "b": "b", "b-block": "b",
}


@dataclass(frozen=True)
class BoundaryCycle:
    """Face-bounding cycle in clockwise order with u/a/w/b role blocks."""

    order: tuple[int, ...]
    roles: tuple[str, ...]
    U: frozenset[int]
    W: frozenset[int]

    def __post_init__(self):
        if len(self.order) != len(self.roles):
            raise GraphError("cycle order and roles differ in length")
        if len(self.order) < 3:
            raise GraphError("boundary cycle needs at least 3 vertices")
        if len(set(self.order)) != len(self.order):
            raise GraphError("boundary cycle repeats a vertex")
        roles = tuple(_ROLE_ALIASES.get(r) for r in self.roles)
        if None in roles:
            raise GraphError(f"unknown role label in {self.roles}")
        object.__setattr__(self, "roles", roles)
        self._check_blocks()
        uset = self.block("u")
        wset = self.block("w")
        if not self.U or not self.U <= uset:
            raise GraphError("U must be a nonempty subset of the u-block")
        if not self.W or not self.W <= wset:
            raise GraphError("W must be a nonempty subset of the w-block")

    def _check_blocks(self):
        n = len(self.order)
        starts = [i for i in range(n)
                  if self.roles[i] == "u" and self.roles[(i - 1) % n] != "u"]
        if len(starts) != 1:
            raise GraphError("u-block must be a single contiguous cyclic block")
        seq = [self.roles[(starts[0] + i) % n] for i in range(n)]
        # Contiguous blocks in the fixed cyclic order u..a..w..b with a/b
        # possibly empty.
        want = "uawb"
        pos = 0
        for r in seq:
            while pos < 4 and r != want[pos]:
                pos += 1
            if pos == 4 or r != want[pos]:
                raise GraphError("roles must appear as contiguous blocks in cyclic order u, a, w, b")
        if "w" not in seq:
            raise GraphError("w-block may not be empty")

    def block(self, role: str) -> frozenset[int]:
        return frozenset(v for v, r in zip(self.order, self.roles) if r == role)

    def block_vertices(self, role: str) -> tuple[int, ...]:
        """Block members in clockwise order, unwrapped at the u-block start."""
        n = len(self.order)
        start = next(i for i in range(n)
                     if self.roles[i] == "u" and self.roles[(i - 1) % n] != "u")
        out = []
        for i in range(n):
            j = (start + i) % n
            if self.roles[j] == role:
                out.append(self.order[j])
        return tuple(out)

    def index_of(self, vid: int) -> int:
        try:
            return self.order.index(vid)
        except ValueError:
            raise GraphError(f"vertex {vid} not on the boundary cycle") from None

    def arc_pairs(self, x: int, y: int) -> list[tuple[int, int]]:
        """Consecutive vertex pairs on the clockwise arc from x to y."""
        i, j = self.index_of(x), self.index_of(y)
        n = len(self.order)
        pairs = []
        while i != j:
            k = (i + 1) % n
            pairs.append((self.order[i], self.order[k]))
            i = k
        return pairs


class MixedPlanarGraph:
    """Immutable mixed graph with a straight-line drawing.

    Rotation system and faces are computed lazily; they are validated (and
    the no-crossing invariant checked) when the graph is built with
    ``require_planar=True``.
    """

    def __init__(self, vertices, edges, *, require_planar=True, boundary=None):
        self.vertices: tuple[Vertex, ...] = tuple(vertices)
        self.edges: tuple[Edge, ...] = tuple(edges)
        self.planar_checked = bool(require_planar)
        self._rotation = None
        self._faces = None
        self._validate_basic()
        self._build_underlying()
        if require_planar:
            self._check_crossings()
            self.faces  # noqa: B018 -- forces face traversal + Euler check
        self.boundary: BoundaryCycle | None = None
        if boundary is not None:
            self.attach_boundary(boundary)

    # -- construction-time validation ------------------------------------

    def _validate_basic(self):
        ids = [v.id for v in self.vertices]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate vertex ids")
        if not self.vertices:
            raise GraphError("graph has no vertices")
        coords = {v.pos for v in self.vertices}
        if len(coords) != len(self.vertices):
            raise GraphError("two vertices share identical coordinates")
        self._vmap = {v.id: v for v in self.vertices}
        eids = [e.id for e in self.edges]
        if len(set(eids)) != len(eids):
            raise GraphError("duplicate edge ids")
        for e in self.edges:
            if e.tail == e.head:
                raise GraphError(f"edge {e.id} is a self-loop")
            if e.tail not in self._vmap or e.head not in self._vmap:
                raise GraphError(f"edge {e.id} references a missing vertex")
            if not (0 <= e.p <= 1):
                raise GraphError(f"edge {e.id} probability {e.p} outside [0, 1]")
            if not e.oriented and e.tail > e.head:
                raise GraphError(f"undirected edge {e.id} not in canonical endpoint order")

    def _build_underlying(self):
        # One underlying edge per drawn segment; (x, y) with x < y.
        pair_edges: dict[tuple[int, int], list[int]] = {}
        for i, e in enumerate(self.edges):
            key = (min(e.tail, e.head), max(e.tail, e.head))
            pair_edges.setdefault(key, []).append(i)
        for key, idxs in pair_edges.items():
            es = [self.edges[i] for i in idxs]
            if len(es) == 1:
                continue
            if (len(es) == 2 and all(e.oriented for e in es)
                    and es[0].tail == es[1].head and es[0].head == es[1].tail):
                continue
            raise GraphError(f"vertex pair {key} carries an unsupported edge multiset")
        self.underlying: tuple[tuple[int, int], ...] = tuple(sorted(pair_edges))
        self._underlying_index = {pair: u for u, pair in enumerate(self.underlying)}
        self.edges_of_underlying: tuple[tuple[int, ...], ...] = tuple(
            tuple(pair_edges[pair]) for pair in self.underlying)
        self.underlying_of_edge: tuple[int, ...] = tuple(
            self._underlying_index[(min(e.tail, e.head), max(e.tail, e.head))]
            for e in self.edges)
        out: dict[int, list[tuple[int, int]]] = {v.id: [] for v in self.vertices}
        inc: dict[int, list[tuple[int, int]]] = {v.id: [] for v in self.vertices}
        for i, e in enumerate(self.edges):
            out[e.tail].append((i, e.head))
            inc[e.head].append((i, e.tail))
            if not e.oriented:
                out[e.head].append((i, e.tail))
                inc[e.tail].append((i, e.head))
        self.out_edges: dict[int, tuple[tuple[int, int], ...]] = {
            v: tuple(lst) for v, lst in out.items()}
        self.in_edges: dict[int, tuple[tuple[int, int], ...]] = {
            v: tuple(lst) for v, lst in inc.items()}
        self._check_connected()

    def _check_connected(self):
        und: dict[int, set[int]] = {v.id: set() for v in self.vertices}
        for a, b in self.underlying:
            und[a].add(b)
            und[b].add(a)
        start = self.vertices[0].id
        seen = {start}
        stack = [start]
        while stack:
            for nb in und[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if len(seen) != len(self.vertices):
            raise GraphError("graph is not connected (orientations disregarded)")

    def _check_crossings(self):
        segs = [(self.pos(a), self.pos(b)) for a, b in self.underlying]
        n = len(segs)
        for i in range(n):
            for j in range(i + 1, n):
                if segments_conflict(segs[i][0], segs[i][1], segs[j][0], segs[j][1]):
                    raise GraphError(
                        f"drawn segments of underlying edges {self.underlying[i]} "
                        f"and {self.underlying[j]} cross")

    # -- basic accessors ---------------------------------------------------

    def vertex(self, vid: int) -> Vertex:
        return self._vmap[vid]

    def pos(self, vid: int) -> Point:
        return self._vmap[vid].pos

    @property
    def n_underlying(self) -> int:
        return len(self.underlying)

    # -- darts ---------------------------------------------------------------

    def dart_tail(self, d: int) -> int:
        a, b = self.underlying[d >> 1]
        return b if d & 1 else a

    def dart_head(self, d: int) -> int:
        a, b = self.underlying[d >> 1]
        return a if d & 1 else b

    @staticmethod
    def reverse(d: int) -> int:
        return d ^ 1

    def dart_of(self, tail: int, head: int) -> int:
        u = self._underlying_index.get((min(tail, head), max(tail, head)))
        if u is None:
            raise GraphError(f"no underlying edge between {tail} and {head}")
        return 2 * u + (1 if tail > head else 0)

    def edge_for_dart(self, d: int) -> int | None:
        """Directed edge usable along dart d (orientation respected)."""
        t, h = self.dart_tail(d), self.dart_head(d)
        for i in self.edges_of_underlying[d >> 1]:
            e = self.edges[i]
            if not e.oriented or (e.tail == t and e.head == h):
                return i
        return None

    def dart_of_edge(self, i: int) -> int:
        e = self.edges[i]
        return self.dart_of(e.tail, e.head)

    # -- rotation system and faces -------------------------------------------

    @property
    def rotation(self) -> dict[int, tuple[int, ...]]:
        """Per-vertex tuple of outgoing darts in counterclockwise angular order."""
        if self._rotation is None:
            rot = {}
            for v in self.vertices:
                darts = []
                for u, (a, b) in enumerate(self.underlying):
                    if a == v.id:
                        darts.append(2 * u)
                    elif b == v.id:
                        darts.append(2 * u + 1)

                def cmp(d1, d2, _v=v):
                    p1 = self.pos(self.dart_head(d1))
                    p2 = self.pos(self.dart_head(d2))
                    v1 = (p1[0] - _v.pos[0], p1[1] - _v.pos[1])
                    v2 = (p2[0] - _v.pos[0], p2[1] - _v.pos[1])
                    return -1 if ccw_less(v1, v2) else 1

                darts.sort(key=cmp_to_key(cmp))
                rot[v.id] = tuple(darts)
            self._rotation = rot
            self._rot_pos = {d: (v, i) for v, ds in rot.items() for i, d in enumerate(ds)}
        return self._rotation

    def ccw_next_dart(self, d: int) -> int:
        v, i = self._rot_pos[d]
        ds = self.rotation[v]
        return ds[(i + 1) % len(ds)]

    def cw_next_dart(self, d: int) -> int:
        v, i = self._rot_pos[d]
        ds = self.rotation[v]
        return ds[(i - 1) % len(ds)]

    def face_next_dart(self, d: int) -> int:
        """Next dart of the face lying to the left of d."""
        return self.cw_next_dart(self.reverse(d))

    @property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        """Face walks as dart cycles; bounded faces run counterclockwise."""
        if self._faces is None:
            self.rotation  # noqa: B018
            seen = set()
            faces = []
            for d0 in sorted(self._rot_pos):
                if d0 in seen:
                    continue
                walk = []
                d = d0
                while True:
                    walk.append(d)
                    seen.add(d)
                    d = self.face_next_dart(d)
                    if d == d0:
                        break
                    if d in seen:
                        raise GraphError("inconsistent face traversal (rotation-system bug)")
                faces.append(tuple(walk))
            V, E, F = len(self.vertices), len(self.underlying), len(faces)
            if V - E + F != 2:
                raise GraphError(
                    f"Euler formula violated: V={V}, E_und={E}, F={F}; "
                    "the drawing is not a planar embedding")
            self._faces = tuple(faces)
            self._face_of_dart = {d: f for f, walk in enumerate(faces) for d in walk}
            areas = [polygon_signed_area2([self.pos(self.dart_tail(d)) for d in walk])
                     for walk in faces]
            outer = min(range(F), key=lambda f: areas[f])
            if F > 1 and sum(1 for a in areas if a < 0) != 1:
                raise GraphError("outer face is not unique by signed area")
            self._outer_face = outer
        return self._faces

    @property
    def outer_face(self) -> int:
        self.faces  # noqa: B018
        return self._outer_face

    def face_of_dart(self, d: int) -> int:
        self.faces  # noqa: B018
        return self._face_of_dart[d]

    def bounded_faces(self) -> list[int]:
        return [f for f in range(len(self.faces)) if f != self.outer_face]

    # -- boundary cycle --------------------------------------------------------

    def attach_boundary(self, cycle: BoundaryCycle):
        """Validate that ``cycle`` bounds the outer face and attach it."""
        for vid in cycle.order:
            if vid not in self._vmap:
                raise GraphError(f"cycle vertex {vid} not in graph")
        n = len(cycle.order)
        for i in range(n):
            a, b = cycle.order[i], cycle.order[(i + 1) % n]
            if (min(a, b), max(a, b)) not in self._underlying_index:
                raise GraphError(f"cycle vertices {a}, {b} are consecutive but not adjacent")
        outer_walk = self.faces[self.outer_face]
        if len(outer_walk) != n:
            raise GraphError("cycle does not bound the outer face (length mismatch)")
        walk_vertices = [self.dart_tail(d) for d in outer_walk]
        try:
            k = walk_vertices.index(cycle.order[0])
        except ValueError:
            raise GraphError("cycle does not bound the outer face") from None
        rotated = walk_vertices[k:] + walk_vertices[:k]
        if tuple(rotated) != cycle.order:
            raise GraphError("cycle does not bound the outer face (order mismatch)")
        self.boundary = cycle

    # -- convenience ------------------------------------------------------------

    def edge_index_by_id(self, eid: int) -> int:
        for i, e in enumerate(self.edges):
            if e.id == eid:
                return i
        raise GraphError(f"no edge with id {eid}")

    def describe(self) -> dict:
        return {
            "vertices": len(self.vertices),
            "edges": len(self.edges),
            "underlying_edges": len(self.underlying),
            "faces": len(self.faces) if self.planar_checked else None,
        }


def build_graph(vertices, edges, cycle=None, *, require_planar=True) -> MixedPlanarGraph:
    """Build and validate a graph from plain records.

    ``vertices``: iterable of (id, x, y); ``edges``: iterable of
    (id, tail, head, oriented, p); ``cycle``: optional mapping with keys
    ``order`` (list of (vertex id, role)), ``U`` and ``W``.
    """
    vs = [Vertex(int(i), (to_fraction(x), to_fraction(y))) for i, x, y in vertices]
    es = []
    for eid, tail, head, oriented, p in edges:
        tail, head = int(tail), int(head)
        if not oriented and tail > head:
            tail, head = head, tail
        es.append(Edge(int(eid), tail, head, bool(oriented), to_fraction(p)))
    bc = None
    if cycle is not None:
        order = tuple(int(v) for v, _ in cycle["order"])
        roles = tuple(str(r) for _, r in cycle["order"])
        bc = BoundaryCycle(order, roles,
                           frozenset(int(v) for v in cycle["U"]),
                           frozenset(int(v) for v in cycle["W"]))
    return MixedPlanarGraph(vs, es, require_planar=require_planar, boundary=bc)


def rotation_system(g: MixedPlanarGraph) -> dict[int, tuple[int, ...]]:
    return g.rotation


def enumerate_faces(g: MixedPlanarGraph) -> tuple[tuple[tuple[int, ...], ...], int]:
    """All face walks (dart cycles) plus the index of the outer face."""
    return g.faces, g.outer_face


def _centroid(points: list[Point]) -> Point:
    n = len(points)
    sx = sum((p[0] for p in points), Fraction(0))
    sy = sum((p[1] for p in points), Fraction(0))
    return (sx / n, sy / n)


def _splice_apex(order, roles, members, role, apex_id):
    """Splice an apex vertex between the extreme ``members`` of one role block.

    Returns the new (order, roles) lists; block vertices strictly between the
    extremes leave the outer cycle (they become interior after the apex edges
    are drawn).
    """
    n = len(order)
    start = next(i for i in range(n)
                 if roles[i] == role and roles[(i - 1) % n] != role)
    order_r = order[start:] + order[:start]
    roles_r = roles[start:] + roles[:start]
    pos = [i for i, v in enumerate(order_r) if v in members]
    i0, i1 = min(pos), max(pos)
    new_order = order_r[:i0 + 1] + [apex_id] + order_r[i1:]
    new_roles = roles_r[:i0 + 1] + [role] + roles_r[i1:]
    return new_order, new_roles


def normalize(g: MixedPlanarGraph, cycle: BoundaryCycle | None = None) -> MixedPlanarGraph:
    """Reduce to an all-directed graph with singleton source and sink.

    Steps, each probability-preserving for connection events from U:
    (1) if |U| > 1 (resp. |W| > 1) add an apex vertex outside the cycle,
    joined to every member by probability-1 edges; (2) replace every
    undirected edge {x, y} of probability p by directed (x, y) and (y, x),
    each independently open with probability p; (3) add a probability-0
    reverse for every one-way directed edge.  The returned graph carries the
    updated boundary cycle with U = {u} and W = {w}.
    """
    if cycle is None:
        cycle = g.boundary
    if cycle is None:
        raise GraphError("normalize needs a boundary cycle")
    if g.boundary is not cycle:
        g.attach_boundary(cycle)

    verts = list(g.vertices)
    edges = list(g.edges)
    order = list(cycle.order)
    roles = list(cycle.roles)
    next_vid = max(v.id for v in verts) + 1
    next_eid = max((e.id for e in edges), default=-1) + 1
    U, W = set(cycle.U), set(cycle.W)

    for members, role in ((U, "u"), (W, "w")):
        if len(members) <= 1:
            continue
        centroid = _centroid([g.pos(v) for v in order])
        # clockwise extremes of `members` inside the (unwrapped) role block
        n = len(order)
        start = next(i for i in range(n)
                     if roles[i] == role and roles[(i - 1) % n] != role)
        blk = []
        for i in range(n):
            j = (start + i) % n
            if roles[j] == role and order[j] in members:
                blk.append(order[j])
        first, last = blk[0], blk[-1]
        m = ((g.pos(first)[0] + g.pos(last)[0]) / 2,
             (g.pos(first)[1] + g.pos(last)[1]) / 2)
        apex_pos = (2 * m[0] - centroid[0], 2 * m[1] - centroid[1])
        if any(v.pos == apex_pos for v in verts):
            raise GraphError("apex position collides with an existing vertex")
        apex = Vertex(next_vid, apex_pos)
        next_vid += 1
        verts.append(apex)
        for member in sorted(members):
            a, b = min(apex.id, member), max(apex.id, member)
            edges.append(Edge(next_eid, a, b, False, Fraction(1)))
            next_eid += 1
        order, roles = _splice_apex(order, roles, members, role, apex.id)
        if role == "u":
            U = {apex.id}
        else:
            W = {apex.id}

    directed: list[Edge] = []
    for e in edges:
        if e.oriented:
            directed.append(e)
        else:
            directed.append(Edge(e.id, e.tail, e.head, True, e.p))
            directed.append(Edge(next_eid, e.head, e.tail, True, e.p))
            next_eid += 1
    present = {(e.tail, e.head) for e in directed}
    for e in list(directed):
        if (e.head, e.tail) not in present:
            directed.append(Edge(next_eid, e.head, e.tail, True, Fraction(0)))
            present.add((e.head, e.tail))
            next_eid += 1

    new_cycle = BoundaryCycle(tuple(order), tuple(roles), frozenset(U), frozenset(W))
    try:
        return MixedPlanarGraph(verts, directed, require_planar=g.planar_checked,
                                boundary=new_cycle)
    except GraphError as exc:
        if "cross" in str(exc):
            raise GraphError(f"apex placement cannot avoid crossings: {exc}") from exc
        raise
