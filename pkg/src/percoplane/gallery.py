"""Standard small graphs with boundary cycles.

Used by the dual-convention pin, the CLI demos and the test suite.  All are
planar with explicit coordinates and carry a clockwise boundary cycle with
singleton-or-small U and W.
"""

from __future__ import annotations

from fractions import Fraction

from .graph import MixedPlanarGraph, build_graph


def square(p="1/2") -> MixedPlanarGraph:
    """Unit square u(0,1) a(1,1) w(1,0) b(0,0), undirected edges."""
    return build_graph(
        vertices=[(0, 0, 1), (1, 1, 1), (2, 1, 0), (3, 0, 0)],
        edges=[(0, 0, 1, False, p), (1, 1, 2, False, p),
               (2, 2, 3, False, p), (3, 0, 3, False, p)],
        cycle={"order": [(0, "u"), (1, "a"), (2, "w"), (3, "b")],
               "U": [0], "W": [2]},
    )


def diamond(p="1/2", extra_chord=False) -> MixedPlanarGraph:
    """Diamond u(0,0) a(1,1) w(2,0) b(1,-1) with directed edges toward w."""
    edges = [(0, 0, 1, True, p), (1, 1, 2, True, p),
             (2, 0, 3, True, p), (3, 3, 2, True, p)]
    if extra_chord:
        edges.append((4, 1, 3, False, p))
    return build_graph(
        vertices=[(0, 0, 0), (1, 1, 1), (2, 2, 0), (3, 1, -1)],
        edges=edges,
        cycle={"order": [(0, "u"), (1, "a"), (2, "w"), (3, "b")],
               "U": [0], "W": [2]},
    )


def theta(p="1/2") -> MixedPlanarGraph:
    """Diamond plus the horizontal chord: two bounded faces."""
    return build_graph(
        vertices=[(0, 0, 0), (1, 1, 1), (2, 2, 0), (3, 1, -1)],
        edges=[(0, 0, 1, False, p), (1, 1, 2, False, p),
               (2, 0, 3, False, p), (3, 2, 3, False, p),
               (4, 0, 2, False, p)],
        cycle={"order": [(0, "u"), (1, "a"), (2, "w"), (3, "b")],
               "U": [0], "W": [2]},
    )


def domino(p="1/2") -> MixedPlanarGraph:
    """2x1 grid; ids: 0(0,0) 1(1,0) 2(2,0) 3(0,1) 4(1,1) 5(2,1)."""
    return build_graph(
        vertices=[(0, 0, 0), (1, 1, 0), (2, 2, 0),
                  (3, 0, 1), (4, 1, 1), (5, 2, 1)],
        edges=[(0, 0, 1, False, p), (1, 1, 2, False, p),
               (2, 3, 4, False, p), (3, 4, 5, False, p),
               (4, 0, 3, False, p), (5, 1, 4, False, p),
               (6, 2, 5, False, p)],
        cycle={"order": [(0, "u"), (3, "a"), (4, "a"), (5, "w"),
                         (2, "b"), (1, "b")],
               "U": [0], "W": [5]},
    )


def grid3(p="1/2") -> MixedPlanarGraph:
    """3x3 vertex grid, ids row-major from (0,0); boundary cycle clockwise."""
    vertices = [(3 * r + c, c, r) for r in range(3) for c in range(3)]
    edges = []
    eid = 0
    for r in range(3):
        for c in range(3):
            v = 3 * r + c
            if c < 2:
                edges.append((eid, v, v + 1, False, p))
                eid += 1
            if r < 2:
                edges.append((eid, v, v + 3, False, p))
                eid += 1
    cycle = {"order": [(0, "u"), (3, "a"), (6, "a"), (7, "a"),
                       (8, "w"), (5, "b"), (2, "b"), (1, "b")],
             "U": [0], "W": [8]}
    return build_graph(vertices, edges, cycle)


def pentagon_spoke(p="1/2") -> MixedPlanarGraph:
    """Pentagon with a near-center vertex joined to two rim vertices."""
    return build_graph(
        vertices=[(0, 0, 2), (1, 2, 1), (2, 2, -1), (3, 0, -2), (4, -2, 0),
                  (5, Fraction(1, 2), 0)],
        edges=[(0, 0, 1, False, p), (1, 1, 2, False, p), (2, 2, 3, False, p),
               (3, 3, 4, False, p), (4, 0, 4, False, p),
               (5, 0, 5, False, p), (6, 3, 5, False, p)],
        cycle={"order": [(0, "u"), (1, "a"), (2, "w"), (3, "b"), (4, "b")],
               "U": [0], "W": [2]},
    )


def random_mixed_graph(stream, n_vertices=6, n_edges=10,
                       ps=("1/4", "1/2", "3/4")) -> MixedPlanarGraph:
    """Random connected mixed graph (oriented and non-oriented edges mixed).

    Produced for reachability-only checks: coordinates sit on a moment curve
    and planarity is not validated.  A random spanning tree guarantees
    connectivity; extra edges avoid duplicating a vertex pair.
    """
    ps = [Fraction(p) for p in ps]
    vertices = [(i, i, i * i) for i in range(n_vertices)]
    pairs = set()
    edges = []

    def add_edge(a, b):
        if stream.bernoulli(Fraction(1, 2)):
            a, b = b, a
        oriented = bool(stream.bernoulli(Fraction(1, 2)))
        p = ps[stream.randrange(len(ps))]
        edges.append((len(edges), a, b, oriented, p))
        pairs.add((min(a, b), max(a, b)))

    for i in range(1, n_vertices):
        add_edge(stream.randrange(i), i)
    attempts = 0
    while len(edges) < n_edges and attempts < 200:
        attempts += 1
        a = stream.randrange(n_vertices)
        b = stream.randrange(n_vertices)
        if a == b or (min(a, b), max(a, b)) in pairs:
            continue
        add_edge(a, b)
    return build_graph(vertices, edges, require_planar=False)


def random_disjoint_sets(stream, n_vertices, max_size=2):
    """Random disjoint nonempty S, T drawn from vertex ids 0..n-1."""
    while True:
        S = {stream.randrange(n_vertices) for _ in range(1 + stream.randrange(max_size))}
        T = {stream.randrange(n_vertices) for _ in range(1 + stream.randrange(max_size))}
        T -= S
        if S and T:
            return frozenset(S), frozenset(T)


BUILDERS = {
    "square": square,
    "diamond": diamond,
    "diamond_chord": lambda: diamond(extra_chord=True),
    "theta": theta,
    "domino": domino,
    "pentagon_spoke": pentagon_spoke,
}

# Graphs the dual convention is pinned on (acceptance: >= 5 distinct graphs,
# <= 12 underlying edges each, exhausted over all configurations).
PIN_GRAPH_NAMES = ("square", "diamond", "diamond_chord", "theta", "domino",
                   "pentagon_spoke")
