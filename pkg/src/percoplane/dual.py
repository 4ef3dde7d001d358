"""The dual-like graph H: bounded-face vertices plus boundary vertices.

Every directed primal edge e gets exactly one dual edge e*, oriented to
cross e from its left side to its right side (sides as seen along e).  Where
a side of e is the outer face, its underlying edge must lie on the boundary
cycle and the side is represented by the boundary vertex s_e, shared by both
orientations of that underlying edge.

Three binary drawing conventions are left explicit because chirality
readings drift between sources: the crossing orientation, the reading
direction of the cycle, and which arc defines S_x.  The combination used
package-wide is pinned empirically (exhaustively over small graphs) and
frozen in ``dual_convention``; see scripts/pin_dual_convention.py.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import BoundaryCycle, GraphError, MixedPlanarGraph
from .percolation import Configuration


@dataclass(frozen=True)
class Convention:
    cross_left_to_right: bool = True
    read_clockwise: bool = True
    s_arc_from_u: bool = True

    def key(self) -> tuple[bool, bool, bool]:
        return (self.cross_left_to_right, self.read_clockwise, self.s_arc_from_u)


def pinned_convention() -> Convention:
    from . import dual_convention as dc

    return Convention(dc.CROSS_LEFT_TO_RIGHT, dc.READ_CLOCKWISE, dc.S_ARC_FROM_U)


@dataclass(frozen=True)
class DualVertex:
    kind: str  # 'face' for a bounded face, 'boundary' for an s_e vertex
    ref: int   # face index, or underlying-edge index for boundary vertices


class DualGraph:
    """Dual of a normalized graph; dual edge i couples with primal edge i."""

    def __init__(self, primal: MixedPlanarGraph, cycle: BoundaryCycle,
                 convention: Convention):
        if any(not e.oriented for e in primal.edges):
            raise GraphError("dual construction needs a normalized all-directed graph")
        self.primal = primal
        self.cycle = cycle
        self.convention = convention
        outer = primal.outer_face
        cycle_underlying = set()
        n = len(cycle.order)
        for i in range(n):
            a, b = cycle.order[i], cycle.order[(i + 1) % n]
            cycle_underlying.add(primal.dart_of(a, b) >> 1)

        vertices: list[DualVertex] = []
        face_vertex: dict[int, int] = {}
        for f in primal.bounded_faces():
            face_vertex[f] = len(vertices)
            vertices.append(DualVertex("face", f))
        boundary_vertex: dict[int, int] = {}
        for ue in sorted(cycle_underlying):
            boundary_vertex[ue] = len(vertices)
            vertices.append(DualVertex("boundary", ue))

        def side_vertex(face: int, ue: int) -> int:
            if face != outer:
                return face_vertex[face]
            if ue not in boundary_vertex:
                raise GraphError(
                    f"underlying edge {primal.underlying[ue]} borders the outer face "
                    "but is not on the boundary cycle")
            return boundary_vertex[ue]

        tails, heads = [], []
        for i in range(len(primal.edges)):
            d = primal.dart_of_edge(i)
            ue = d >> 1
            left = side_vertex(primal.face_of_dart(d), ue)
            right = side_vertex(primal.face_of_dart(primal.reverse(d)), ue)
            if convention.cross_left_to_right:
                tails.append(left)
                heads.append(right)
            else:
                tails.append(right)
                heads.append(left)

        self.vertices = tuple(vertices)
        self.tails = tuple(tails)
        self.heads = tuple(heads)
        self.boundary_vertex = boundary_vertex
        self.face_vertex = face_vertex
        out: dict[int, list[tuple[int, int]]] = {k: [] for k in range(len(vertices))}
        for i, (t, h) in enumerate(zip(tails, heads)):
            out[t].append((i, h))
        self.out = {k: tuple(v) for k, v in out.items()}

    @property
    def n_edges(self) -> int:
        return len(self.tails)

    def s_vertex(self, tail: int, head: int) -> int:
        """Boundary vertex s_e of the underlying cycle edge between two vertices."""
        ue = self.primal.dart_of(tail, head) >> 1
        try:
            return self.boundary_vertex[ue]
        except KeyError:
            raise GraphError(f"edge {tail},{head} is not on the boundary cycle") from None


def build_dual(g: MixedPlanarGraph, cycle: BoundaryCycle | None = None,
               convention: Convention | None = None) -> DualGraph:
    if cycle is None:
        cycle = g.boundary
    if cycle is None:
        raise GraphError("build_dual needs a boundary cycle")
    if g.boundary is not cycle:
        g.attach_boundary(cycle)
    return DualGraph(g, cycle, convention or pinned_convention())


def dual_positions(H: DualGraph):
    """Drawing positions: face centroids, s_e just outside its cycle edge."""
    g = H.primal
    pos = {}
    for dv_index, dv in enumerate(H.vertices):
        if dv.kind == "face":
            walk = g.faces[dv.ref]
            pts = [g.pos(g.dart_tail(d)) for d in walk]
            n = len(pts)
            pos[dv_index] = (sum(p[0] for p in pts) / n, sum(p[1] for p in pts) / n)
        else:
            a, b = g.underlying[dv.ref]
            # orient along the clockwise cycle; outward normal is +90 degrees
            cyc = H.cycle.order
            n_cyc = len(cyc)
            for i in range(n_cyc):
                if {cyc[i], cyc[(i + 1) % n_cyc]} == {a, b}:
                    a, b = cyc[i], cyc[(i + 1) % n_cyc]
                    break
            (ax, ay), (bx, by) = g.pos(a), g.pos(b)
            mx, my = (ax + bx) / 2, (ay + by) / 2
            dx, dy = bx - ax, by - ay
            pos[dv_index] = (mx - dy / 4, my + dx / 4)
    return pos


def dual_to_text(H: DualGraph) -> str:
    """Export H in the graph-spec format, with p(e*) = 1 - p(e).

    Boundary vertices are flagged with a ``kind`` field.  Duals of exotic
    graphs may place more than two edges on one vertex pair and then only
    round-trip as text, not through build_graph.
    """
    import yaml

    g = H.primal
    pos = dual_positions(H)

    def num(v):
        return int(v) if v.denominator == 1 else str(v)

    doc = {
        "vertices": [{"id": i, "x": num(pos[i][0]), "y": num(pos[i][1]),
                      "kind": dv.kind}
                     for i, dv in enumerate(H.vertices)],
        "edges": [{"id": i, "tail": H.tails[i], "head": H.heads[i],
                   "oriented": True, "p": num(1 - g.edges[i].p),
                   "primal_edge": g.edges[i].id}
                  for i in range(H.n_edges)],
    }
    return yaml.safe_dump(doc, sort_keys=False)


def boundary_sets(H: DualGraph, x: int) -> tuple[frozenset[int], frozenset[int]]:
    """(S_x, T_x): boundary vertices of the two boundary arcs split at u and x."""
    cycle = H.cycle
    (u,) = cycle.U if len(cycle.U) == 1 else (None,)
    if u is None:
        raise GraphError("boundary_sets needs singleton U (normalize first)")
    if x == u:
        raise GraphError("x may not equal u")
    cycle.index_of(x)
    conv = H.convention
    if conv.read_clockwise:
        arc_ux = cycle.arc_pairs(u, x)
        arc_xu = cycle.arc_pairs(x, u)
    else:
        arc_ux = cycle.arc_pairs(x, u)
        arc_xu = cycle.arc_pairs(u, x)
    s_ux = frozenset(H.s_vertex(a, b) for a, b in arc_ux)
    s_xu = frozenset(H.s_vertex(a, b) for a, b in arc_xu)
    if conv.s_arc_from_u:
        return s_ux, s_xu
    return s_xu, s_ux


def dual_config(H: DualGraph, config: Configuration) -> Configuration:
    """Coupled dual configuration: e* is open exactly when e is closed."""
    n = H.n_edges
    if config.n_edges != n:
        raise GraphError("configuration does not match the coupled primal graph")
    mask = (1 << n) - 1
    return Configuration(config.bits ^ mask, n)


def dual_reachable(H: DualGraph, dual_cfg: Configuration, sources) -> frozenset[int]:
    bits = dual_cfg.bits
    seen = set(sources)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for ei, head in H.out[v]:
            if (bits >> ei) & 1 and head not in seen:
                seen.add(head)
                stack.append(head)
    return frozenset(seen)


def check_duality(g: MixedPlanarGraph, H: DualGraph, config: Configuration,
                  x: int) -> str:
    """Compare {u -> x} in the primal with {S_x ->* T_x} in the coupled dual.

    Returns 'holds-as-stated' when the two events agree on this configuration
    and 'holds-complemented' when they disagree; aggregation over many
    configurations (see verify.duality_report) decides whether one relation
    holds uniformly or the convention fails.
    """
    from .percolation import reachable

    cycle = H.cycle
    (u,) = cycle.U
    primal_holds = x in reachable(g, config, (u,))
    S_x, T_x = boundary_sets(H, x)
    dual_holds = bool(dual_reachable(H, dual_config(H, config), S_x) & T_x)
    return "holds-as-stated" if primal_holds == dual_holds else "holds-complemented"


def duality_scan(g: MixedPlanarGraph, convention: Convention | None = None,
                 *, max_edges: int = 24) -> dict:
    """Exhaust {u -> x} vs {S_x ->* T_x} over all configurations and all x.

    The graph must be normalized with a boundary cycle.  Returns per-verdict
    counts and the uniform verdict ('fails' when the relation is not the
    same for every configuration and x).
    """
    from .percolation import reachable

    if g.boundary is None:
        raise GraphError("duality_scan needs a boundary cycle")
    (u,) = g.boundary.U
    m = len(g.edges)
    if m > max_edges:
        raise GraphError(f"enumeration guard: {m} edges > {max_edges}")
    H = build_dual(g, convention=convention)
    xs = [v for v in g.boundary.order if v != u]
    sets = {x: boundary_sets(H, x) for x in xs}
    counts = {"holds-as-stated": 0, "holds-complemented": 0}
    for bits in range(1 << m):
        cfg = Configuration(bits, m)
        reach = reachable(g, cfg, (u,))
        dcfg = dual_config(H, cfg)
        for x in xs:
            S_x, T_x = sets[x]
            dual_holds = bool(dual_reachable(H, dcfg, S_x) & T_x)
            if (x in reach) == dual_holds:
                counts["holds-as-stated"] += 1
            else:
                counts["holds-complemented"] += 1
    if counts["holds-as-stated"] and counts["holds-complemented"]:
        verdict = "fails"
    elif counts["holds-as-stated"]:
        verdict = "holds-as-stated"
    else:
        verdict = "holds-complemented"
    return {"configurations": 1 << m, "xs": len(xs), "counts": counts,
            "verdict": verdict}
