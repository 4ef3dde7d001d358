from fractions import Fraction

import pytest

from percoplane.graph import BoundaryCycle, GraphError, build_graph, enumerate_faces, normalize
from percoplane.percolation import Configuration, reachable

from conftest import make_diamond, make_domino, make_grid3, make_square, make_theta


def connection_prob(g, S, T):
    """Exact P(S -> T): sum of configuration weights (test oracle)."""
    m = len(g.edges)
    active = [i for i, e in enumerate(g.edges) if 0 < e.p < 1]
    base = 0
    for i, e in enumerate(g.edges):
        if e.p == 1:
            base |= 1 << i
    total = Fraction(0)
    T = set(T)
    for k in range(1 << len(active)):
        bits = base
        weight = Fraction(1)
        for j, i in enumerate(active):
            if (k >> j) & 1:
                bits |= 1 << i
                weight *= g.edges[i].p
            else:
                weight *= 1 - g.edges[i].p
        if T & reachable(g, Configuration(bits, m), S):
            total += weight
    return total


def test_square_builds_with_one_bounded_face():
    g = make_square()
    faces, outer = enumerate_faces(g)
    assert len(faces) == 2
    assert len(g.bounded_faces()) == 1
    assert len(g.vertices) - g.n_underlying + len(faces) == 2


def test_square_with_both_diagonals_crosses():
    with pytest.raises(GraphError, match="cross"):
        build_graph(
            vertices=[(0, 0, 1), (1, 1, 1), (2, 1, 0), (3, 0, 0)],
            edges=[(0, 0, 1, False, "1/2"), (1, 1, 2, False, "1/2"),
                   (2, 2, 3, False, "1/2"), (3, 0, 3, False, "1/2"),
                   (4, 0, 2, False, "1/2"), (5, 1, 3, False, "1/2")],
        )


def test_collinear_overlap_rejected():
    with pytest.raises(GraphError, match="cross"):
        build_graph(
            vertices=[(0, 0, 0), (1, 1, 0), (2, 2, 0)],
            edges=[(0, 0, 1, False, "1/2"), (1, 0, 2, False, "1/2")],
        )


def test_validation_errors():
    with pytest.raises(GraphError, match="duplicate vertex"):
        build_graph([(0, 0, 0), (0, 1, 1)], [(0, 0, 0, False, 1)])
    with pytest.raises(GraphError, match="probability"):
        build_graph([(0, 0, 0), (1, 1, 0)], [(0, 0, 1, False, "3/2")])
    with pytest.raises(GraphError, match="not connected"):
        build_graph([(0, 0, 0), (1, 1, 0), (2, 5, 5), (3, 6, 5)],
                    [(0, 0, 1, False, 1), (1, 2, 3, False, 1)])
    with pytest.raises(GraphError, match="share identical"):
        build_graph([(0, 0, 0), (1, 0, 0)], [(0, 0, 1, False, 1)])


def test_rotation_square_corner():
    g = make_square()
    order = g.rotation[0]  # u(0,1): edge to a is at angle 0, edge to b at 270
    heads = [g.dart_head(d) for d in order]
    assert heads == [1, 3]


def test_rotation_grid_center_is_ccw_enws():
    g = make_grid3()
    heads = [g.dart_head(d) for d in g.rotation[4]]  # center vertex (1,1)
    k = heads.index(5)  # east neighbor
    assert heads[k:] + heads[:k] == [5, 7, 3, 1]  # E, N, W, S


def test_rotation_degree_one_singleton():
    g = build_graph([(0, 0, 0), (1, 1, 0)], [(0, 0, 1, False, 1)])
    assert len(g.rotation[0]) == 1


def test_theta_three_faces():
    g = make_theta()
    faces, outer = enumerate_faces(g)
    assert len(faces) == 3
    assert len(g.bounded_faces()) == 2


def test_interior_edge_of_theta_separates_two_bounded_faces():
    g = make_theta()
    d = g.dart_of(0, 2)
    f1, f2 = g.face_of_dart(d), g.face_of_dart(g.reverse(d))
    assert f1 != f2
    assert g.outer_face not in (f1, f2)


def test_boundary_cycle_must_bound_outer_face():
    g = make_theta()
    with pytest.raises(GraphError, match="outer face"):
        g.attach_boundary(BoundaryCycle((0, 1, 2), ("u", "a", "w"),
                                        frozenset([0]), frozenset([2])))


def test_boundary_roles_must_be_blocks():
    with pytest.raises(GraphError, match="contiguous"):
        BoundaryCycle((0, 1, 2, 3), ("u", "w", "a", "b"),
                      frozenset([0]), frozenset([1]))


def test_normalize_splits_undirected_edges():
    g = build_graph(
        vertices=[(0, 0, 0), (1, 1, 0), (2, 1, 1)],
        edges=[(0, 0, 1, False, "3/10"), (1, 1, 2, True, "7/10"),
               (2, 0, 2, False, "1/2")],
        cycle={"order": [(0, "u"), (2, "a"), (1, "w")], "U": [0], "W": [1]},
    )
    ng = normalize(g)
    directed = {(e.tail, e.head): e.p for e in ng.edges}
    assert directed[(0, 1)] == Fraction(3, 10)
    assert directed[(1, 0)] == Fraction(3, 10)
    assert directed[(1, 2)] == Fraction(7, 10)
    assert directed[(2, 1)] == Fraction(0)  # added reverse
    assert all(e.oriented for e in ng.edges)
    # every directed edge now has its reverse
    assert set(directed) == {(t, h) for h, t in directed}


def test_normalize_idempotent(zoo_graph):
    n1 = normalize(zoo_graph)
    n2 = normalize(n1)
    assert [(e.id, e.tail, e.head, e.p) for e in n1.edges] == \
           [(e.id, e.tail, e.head, e.p) for e in n2.edges]
    assert [(v.id, v.pos) for v in n1.vertices] == [(v.id, v.pos) for v in n2.vertices]
    assert n1.boundary == n2.boundary


def test_normalize_preserves_connection_law(zoo_graph):
    g = zoo_graph
    ng = normalize(g)
    (u,), (w,) = ng.boundary.U, ng.boundary.W
    for S, T in [(g.boundary.U, g.boundary.W),
                 (g.boundary.U, g.boundary.block("a")),
                 (g.boundary.U, g.boundary.block("b"))]:
        if not S or not T:
            continue
        assert connection_prob(g, S, T) == connection_prob(ng, S, T)
    assert connection_prob(g, g.boundary.U, g.boundary.W) == \
        connection_prob(ng, {u}, {w})


def test_normalize_apex_collapses_multi_vertex_source():
    g = build_graph(
        vertices=[(0, 0, 0), (1, 1, 0), (2, 2, 0),
                  (3, 0, 1), (4, 1, 1), (5, 2, 1)],
        edges=[(0, 0, 1, False, "1/2"), (1, 1, 2, False, "1/2"),
               (2, 3, 4, False, "1/2"), (3, 4, 5, False, "1/2"),
               (4, 0, 3, False, "1/2"), (5, 1, 4, False, "1/2"),
               (6, 2, 5, False, "1/2")],
        cycle={"order": [(0, "u"), (3, "u"), (4, "a"), (5, "w"),
                         (2, "b"), (1, "b")],
               "U": [0, 3], "W": [5]},
    )
    before = connection_prob(g, {0, 3}, {5})
    ng = normalize(g)
    (u,), (w,) = ng.boundary.U, ng.boundary.W
    assert u not in {v.id for v in g.vertices}
    spokes = [e for e in ng.edges if u in (e.tail, e.head)]
    assert {e.p for e in spokes} == {Fraction(1)}
    assert {e.tail for e in spokes} | {e.head for e in spokes} == {u, 0, 3}
    assert connection_prob(ng, {u}, {w}) == before
    assert ng.boundary.order[ng.boundary.order.index(0) - len(ng.boundary.order) + 1] in (u, 3)


def test_normalize_keeps_coordinates(zoo_graph):
    g = zoo_graph
    ng = normalize(g)
    for v in g.vertices:
        assert ng.vertex(v.id).pos == v.pos


def test_domino_euler():
    g = make_domino()
    faces, _ = enumerate_faces(g)
    assert len(g.vertices) - g.n_underlying + len(faces) == 2
    assert len(g.bounded_faces()) == 2


def test_diamond_connection_probability_oracle():
    g = make_diamond()
    assert connection_prob(g, {0}, {2}) == Fraction(7, 16)
