"""Percolation configurations, oriented reachability and extreme paths.

The leftmost (rightmost) open path is computed by a greedy wall-follower:
walk from u and at each vertex take the first open out-edge, scanning the
rotation order clockwise (counterclockwise) from just after the reversed
arrival dart, that still allows reaching w through open edges avoiding the
vertices already visited.  At u the scan starts from inside the outer-face
wedge.  The extremality of the result is pinned by exhaustive tests, not
assumed.

``partition_edges`` splits the edge set around a u-to-w path into the path
itself and the parts of the graph to its left and right, by classifying the
face corners at every path vertex and flood-filling the face adjacency away
from the path.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import GraphError, MixedPlanarGraph


@dataclass(frozen=True)
class Configuration:
    """Open/closed assignment to all edges, packed little-endian by edge index."""

    bits: int
    n_edges: int

    def is_open(self, i: int) -> int:
        return (self.bits >> i) & 1

    def to_hex(self) -> str:
        width = max(1, (self.n_edges + 3) // 4)
        return format(self.bits, f"0{width}x")

    @classmethod
    def from_hex(cls, text: str, n_edges: int) -> "Configuration":
        return cls(int(text, 16), n_edges)

    @classmethod
    def from_open(cls, open_indices, n_edges: int) -> "Configuration":
        bits = 0
        for i in open_indices:
            bits |= 1 << i
        return cls(bits, n_edges)


def all_open(g: MixedPlanarGraph) -> Configuration:
    return Configuration((1 << len(g.edges)) - 1, len(g.edges))


def all_closed(g: MixedPlanarGraph) -> Configuration:
    return Configuration(0, len(g.edges))


def sample_config(g: MixedPlanarGraph, stream) -> Configuration:
    """Draw each edge independently open with probability p_e.

    Consumes exactly one uniform per edge, in edge order, and compares it to
    the double rounding of p_e -- the same draw layout as the compiled batch
    kernels, so identical streams give identical configurations.
    """
    bits = 0
    for i, e in enumerate(g.edges):
        if stream.u01() < float(e.p):
            bits |= 1 << i
    return Configuration(bits, len(g.edges))


def reachable(g: MixedPlanarGraph, config: Configuration, sources) -> frozenset[int]:
    """Vertices reachable from ``sources`` along open edges, respecting orientation."""
    bits = config.bits
    seen = set()
    stack = []
    for s in sources:
        if s not in g.out_edges:
            raise GraphError(f"source vertex {s} not in graph")
        if s not in seen:
            seen.add(s)
            stack.append(s)
    while stack:
        v = stack.pop()
        for ei, head in g.out_edges[v]:
            if (bits >> ei) & 1 and head not in seen:
                seen.add(head)
                stack.append(head)
    return frozenset(seen)


def adjacency_arrays(g: MixedPlanarGraph):
    """CSR out-adjacency over contiguous vertex indexes, for the batch kernels.

    Returns (start, edge_index, head, id_to_index); undirected edges appear
    in both directions under one edge index, matching ``reachable``.
    """
    import numpy as np

    ids = sorted(v.id for v in g.vertices)
    id2i = {vid: i for i, vid in enumerate(ids)}
    start = np.zeros(len(ids) + 1, dtype=np.int64)
    eidx, heads = [], []
    for i, vid in enumerate(ids):
        for e, head in g.out_edges[vid]:
            eidx.append(e)
            heads.append(id2i[head])
        start[i + 1] = len(eidx)
    return (start, np.asarray(eidx, dtype=np.int32),
            np.asarray(heads, dtype=np.int32), id2i)


def coreachable(g: MixedPlanarGraph, config: Configuration, targets) -> frozenset[int]:
    """Vertices from which some target is reachable along open edges."""
    bits = config.bits
    seen = set(targets)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for ei, tail in g.in_edges[v]:
            if (bits >> ei) & 1 and tail not in seen:
                seen.add(tail)
                stack.append(tail)
    return frozenset(seen)


def in_gamma(g: MixedPlanarGraph, config: Configuration) -> bool:
    """Whether the configuration has an open path from u to w (boundary apexes)."""
    cycle = g.boundary
    if cycle is None or len(cycle.U) != 1 or len(cycle.W) != 1:
        raise GraphError("in_gamma needs a normalized graph with singleton U and W")
    (u,), (w,) = cycle.U, cycle.W
    return w in reachable(g, config, (u,))


@dataclass(frozen=True)
class Path:
    """Self-avoiding directed path: vertex ids and the edge indexes between them."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("path repeats a vertex")
        if len(self.edges) != len(self.vertices) - 1:
            raise GraphError("path edge/vertex counts mismatch")


@dataclass(frozen=True)
class PathPartition:
    on_path: frozenset[int]
    left: frozenset[int]
    right: frozenset[int]


def _require_all_directed(g: MixedPlanarGraph):
    if any(not e.oriented for e in g.edges):
        raise GraphError("operation requires a normalized (all-directed) graph")


def _outer_corner_dart(g: MixedPlanarGraph, v: int) -> int:
    """The unique dart at v whose corner wedge lies in the outer face."""
    outer = g.outer_face
    hits = [d for d in g.rotation[v] if g.face_of_dart(d) == outer]
    if len(hits) != 1:
        raise GraphError(f"vertex {v} does not meet the outer face in exactly one corner")
    return hits[0]


def _can_reach_avoiding(g: MixedPlanarGraph, bits: int, src: int, w: int, blocked) -> bool:
    if src == w:
        return True
    seen = {src}
    stack = [src]
    while stack:
        v = stack.pop()
        for ei, head in g.out_edges[v]:
            if (bits >> ei) & 1 and head not in seen and head not in blocked:
                if head == w:
                    return True
                seen.add(head)
                stack.append(head)
    return False


def extreme_path(g: MixedPlanarGraph, config: Configuration, u: int, w: int,
                 side: str) -> Path | None:
    """Leftmost or rightmost self-avoiding open path from u to w, or None."""
    if side not in ("left", "right"):
        raise GraphError(f"side must be 'left' or 'right', got {side!r}")
    _require_all_directed(g)
    if u == w:
        raise GraphError("extreme_path needs distinct endpoints")
    bits = config.bits
    step = g.cw_next_dart if side == "left" else g.ccw_next_dart
    visited = {u}
    verts = [u]
    edges: list[int] = []
    v = u
    arrival_reverse: int | None = None
    while v != w:
        if arrival_reverse is None:
            d0 = _outer_corner_dart(g, v)
            start = d0 if side == "left" else g.ccw_next_dart(d0)
        else:
            start = step(arrival_reverse)
        chosen = None
        d = start
        for _ in range(len(g.rotation[v])):
            ei = g.edge_for_dart(d)
            if ei is not None and (bits >> ei) & 1:
                head = g.dart_head(d)
                if head not in visited and _can_reach_avoiding(g, bits, head, w, visited):
                    chosen = (ei, head, d)
                    break
            d = step(d)
        if chosen is None:
            if v == u:
                return None
            raise GraphError("extreme-path walk got stuck; lookahead invariant broken")
        ei, head, d = chosen
        edges.append(ei)
        verts.append(head)
        visited.add(head)
        arrival_reverse = g.reverse(d)
        v = head
    return Path(tuple(verts), tuple(edges))


def partition_edges(g: MixedPlanarGraph, path: Path) -> PathPartition:
    """Split E(G) into the path's edges and the edges left/right of it.

    Both orientations of an underlying edge used by the path count as
    on-path.  Faces touching the path are classified by the corner wedges at
    each path vertex; the remaining faces inherit a side by flood fill across
    non-path edges, and every edge takes the side of its bounded face(s).
    """
    _require_all_directed(g)
    verts = path.vertices
    if len(verts) < 2:
        raise GraphError("partition needs a path with at least one edge")
    path_darts = [g.dart_of(a, b) for a, b in zip(verts, verts[1:])]
    for ei, d in zip(path.edges, path_darts):
        e = g.edges[ei]
        if (e.tail, e.head) != (g.dart_tail(d), g.dart_head(d)):
            raise GraphError("path edges do not match its vertex sequence")
    on_underlying = {d >> 1 for d in path_darts}
    outer = g.outer_face
    face_side: dict[int, str] = {}

    def mark(face: int, side: str):
        if face == outer:
            return  # a path edge along the boundary cycle; edges take sides from bounded faces
        old = face_side.get(face)
        if old is not None and old != side:
            raise GraphError("face classified on both sides of the path")
        face_side[face] = side

    # interior path vertices: wedges CCW from the out-dart to the reversed
    # in-dart are on the left of travel, the rest on the right
    for i in range(1, len(verts) - 1):
        r = g.reverse(path_darts[i - 1])
        o = path_darts[i]
        d = o
        while d != r:
            mark(g.face_of_dart(d), "L")
            d = g.ccw_next_dart(d)
        d = r
        while d != o:
            mark(g.face_of_dart(d), "R")
            d = g.ccw_next_dart(d)

    # endpoints: the outer-face wedge separates the two sides
    def classify_endpoint(vid: int, ref: int, first_phase: str, second_phase: str):
        d = ref
        phase = first_phase
        seen_outer = False
        for _ in range(len(g.rotation[vid])):
            f = g.face_of_dart(d)
            if f == outer:
                if seen_outer:
                    raise GraphError(f"endpoint {vid} meets the outer face twice")
                seen_outer = True
                phase = second_phase
            else:
                mark(f, phase)
            d = g.ccw_next_dart(d)
        if not seen_outer:
            raise GraphError(f"path endpoint {vid} is not on the outer boundary")

    classify_endpoint(verts[0], path_darts[0], "L", "R")
    classify_endpoint(verts[-1], g.reverse(path_darts[-1]), "R", "L")

    # flood fill across non-path underlying edges
    queue = list(face_side)
    while queue:
        f = queue.pop()
        side = face_side[f]
        for walk_dart in g.faces[f]:
            if (walk_dart >> 1) in on_underlying:
                continue
            nb = g.face_of_dart(g.reverse(walk_dart))
            if nb == outer:
                continue
            old = face_side.get(nb)
            if old is None:
                face_side[nb] = side
                queue.append(nb)
            elif old != side:
                raise GraphError("flood fill reached a face from both sides")

    on_path, left, right = set(), set(), set()
    for ue in range(g.n_underlying):
        eidxs = g.edges_of_underlying[ue]
        if ue in on_underlying:
            on_path.update(eidxs)
            continue
        labels = {face_side[f]
                  for f in (g.face_of_dart(2 * ue), g.face_of_dart(2 * ue + 1))
                  if f != outer and f in face_side}
        if len(labels) != 1:
            raise GraphError(f"underlying edge {g.underlying[ue]} has no unambiguous side")
        (left if labels == {"L"} else right).update(eidxs)
    return PathPartition(frozenset(on_path), frozenset(left), frozenset(right))


def is_more_leftish(g: MixedPlanarGraph, cfg_hat: Configuration,
                    cfg: Configuration) -> bool:
    """The 'more leftish than' partial order on configurations with u->w paths.

    Holds iff (a) the extreme paths of cfg_hat lie weakly left of those of
    cfg, and (b) cfg_hat dominates cfg left of its own leftmost path while
    cfg dominates cfg_hat right of its own rightmost path.
    """
    cycle = g.boundary
    if cycle is None or len(cycle.U) != 1 or len(cycle.W) != 1:
        raise GraphError("is_more_leftish needs a normalized graph with singleton U, W")
    (u,), (w,) = cycle.U, cycle.W
    paths = {}
    for name, c in (("hat", cfg_hat), ("base", cfg)):
        pl = extreme_path(g, c, u, w, "left")
        pr = extreme_path(g, c, u, w, "right")
        if pl is None or pr is None:
            raise GraphError(f"configuration {name} has no open u->w path")
        paths[name] = (pl, pr)
    part_l_hat = partition_edges(g, paths["hat"][0])
    part_l_base = partition_edges(g, paths["base"][0])
    part_r_hat = partition_edges(g, paths["hat"][1])
    part_r_base = partition_edges(g, paths["base"][1])
    if not part_l_hat.on_path <= (part_l_base.left | part_l_base.on_path):
        return False
    if not part_r_base.on_path <= (part_r_hat.right | part_r_hat.on_path):
        return False
    hb, bb = cfg_hat.bits, cfg.bits
    for e in part_l_hat.left:
        if (hb >> e) & 1 < (bb >> e) & 1:
            return False
    for e in part_r_base.right:
        if (hb >> e) & 1 > (bb >> e) & 1:
            return False
    return True
