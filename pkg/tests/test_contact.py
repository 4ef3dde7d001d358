import math
from fractions import Fraction

import pytest

from percoplane.contact import (
    ContactError,
    ContactParams,
    DiscreteDiagram,
    build_discrete,
    discrete_indicator,
    estimate_joint,
    evolve_state,
    simulate_graphical,
)
from percoplane.graphspec import graph_from_text, graph_to_text
from percoplane.percolation import Configuration, all_open
from percoplane.rng import Stream


def oracle_infected(gr, params, eta0_sites, t):
    """Infected set at time t by explicit allowable-path DFS (test oracle).

    Splits each site's timeline at its event times, then searches the
    space-time diagram: upward moves may not cross a recovery mark, arrow
    moves respect the arrow's direction and instant.
    """
    n = params.n_sites
    arrows = []  # (time, src_index, dst_index)
    for s in range(n):
        arrows.extend((tt, s, s + 1) for tt in gr.arrows_right[s] if tt <= t)
        arrows.extend((tt, s, s - 1) for tt in gr.arrows_left[s] if tt <= t)
    arrows = [(tt, a, b) for tt, a, b in arrows if 0 <= b < n]
    marks = {s: [tt for tt in gr.marks[s] if tt <= t] for s in range(n)}
    all_times = [tt for s in range(n) for tt in marks[s]] + [tt for tt, _, _ in arrows]
    assert len(set(all_times)) == len(all_times), "oracle requires distinct event times"

    cuts = {s: sorted(set(marks[s])
                      | {tt for tt, a, _ in arrows if a == s}
                      | {tt for tt, _, b in arrows if b == s})
            for s in range(n)}
    bounds = {s: [0.0] + cuts[s] + [t] for s in range(n)}

    def interval_ending(s, tt):
        return bounds[s].index(tt) - 1

    def interval_starting(s, tt):
        return bounds[s].index(tt)

    adj = {}
    for s in range(n):
        mark_set = set(marks[s])
        for k in range(len(bounds[s]) - 1):
            adj.setdefault((s, k), [])
            upper = bounds[s][k + 1]
            if k + 2 < len(bounds[s]) + 1 and k + 1 < len(bounds[s]) - 1:
                if upper not in mark_set:
                    adj[(s, k)].append((s, k + 1))
    for tt, a, b in arrows:
        adj.setdefault((a, interval_ending(a, tt)), []).append((b, interval_starting(b, tt)))

    start = [(params.site_index(x), 0) for x in eta0_sites]
    seen = set(start)
    stack = list(start)
    while stack:
        node = stack.pop()
        for nxt in adj.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    out = set()
    for x in params.sites():
        s = params.site_index(x)
        if (s, len(bounds[s]) - 2) in seen:
            out.add(x)
    return frozenset(out)


def test_no_recovery_marks_when_delta_zero():
    params = ContactParams(lam=1, delta=0, radius=2)
    gr = simulate_graphical(params, 4.0, Stream(3, 0))
    assert all(not m for m in gr.marks)


def test_arrow_counts_match_poisson_mean():
    params = ContactParams(lam=2, delta=1, radius=1)
    reps = 10_000
    total = 0
    for j in range(reps):
        gr = simulate_graphical(params, 5.0, Stream(11, j))
        total += len(gr.arrows_right[1])  # arrows 0 -> 1 live on site index 1? no: site order
    mean = total / reps
    se = math.sqrt(10.0 / reps)
    assert abs(mean - 10.0) < 3 * se


def test_evolve_state_trivial_cases():
    params = ContactParams(lam=1, delta=1, radius=1)
    gr = simulate_graphical(ContactParams(lam=0, delta=0, radius=1), 2.0, Stream(1, 1))
    assert evolve_state(gr, params, [0], 2.0) == {0}
    # one recovery mark, no arrows into the site
    from percoplane.contact import GraphicalRep
    gr = GraphicalRep(2.0, ((), (0.7,), ()), ((), (), ()), ((), (), ()))
    assert evolve_state(gr, params, [0], 2.0) == frozenset()
    assert evolve_state(gr, params, [0], 0.5) == {0}


def test_evolve_state_crafted_arrow_then_mark():
    # site 0 infects site 1 at 0.4; site 1 recovers at 1.1; site -1 untouched
    params = ContactParams(lam=1, delta=1, radius=1)
    from percoplane.contact import GraphicalRep
    gr = GraphicalRep(2.0,
                      marks=((), (), (1.1,)),
                      arrows_right=((), (0.4,), ()),
                      arrows_left=((), (), ()))
    assert evolve_state(gr, params, [0], 0.3) == {0}
    assert evolve_state(gr, params, [0], 0.5) == {0, 1}
    assert evolve_state(gr, params, [0], 1.5) == {0}
    assert oracle_infected(gr, params, [0], 0.5) == {0, 1}
    assert oracle_infected(gr, params, [0], 1.5) == {0}


@pytest.mark.parametrize("trial_block", range(4))
def test_evolve_state_matches_allowable_path_oracle(trial_block):
    done = 0
    j = 250 * trial_block
    while done < 250:
        j += 1
        picker = Stream(9000, j)
        radius = 1 + picker.randrange(2)  # 3 or 5 sites
        lam = 0.3 + picker.u01()
        delta = 0.3 + picker.u01()
        params = ContactParams(lam=lam, delta=delta, radius=radius)
        t_max = 1.5
        gr = simulate_graphical(params, t_max, Stream(9001, j))
        n_events = sum(len(x) for fam in (gr.marks, gr.arrows_right, gr.arrows_left)
                       for x in fam)
        if n_events > 10:
            continue
        eta0 = [x for x in params.sites() if picker.bernoulli(0.5)]
        for t in (0.5, 1.0, 1.5):
            got = evolve_state(gr, params, eta0, t)
            want = oracle_infected(gr, params, eta0, t)
            assert got == want, (j, t, eta0)
        done += 1


def test_evolve_monotone_in_initial_condition():
    params = ContactParams(lam=1.3, delta=0.8, radius=2)
    for j in range(200):
        gr = simulate_graphical(params, 2.0, Stream(414, j))
        picker = Stream(515, j)
        small = {x for x in params.sites() if picker.bernoulli(0.3)}
        large = small | {x for x in params.sites() if picker.bernoulli(0.5)}
        assert evolve_state(gr, params, small, 2.0) <= evolve_state(gr, params, large, 2.0)


# -- discretization -------------------------------------------------------------

def test_discrete_probabilities_and_t_hat():
    params = ContactParams(lam=2, delta=1, radius=10)
    d = build_discrete(params, n=2, N=10, t=1)
    by_family = {}
    for fam, e in zip(d.families, d.graph.edges):
        by_family.setdefault(fam, set()).add(e.p)
    assert by_family["up"] == {Fraction(9, 10)}
    assert by_family["right"] == by_family["left"] == {Fraction(1, 5)}
    d2 = build_discrete(params, n=1, N=10, t="1.05")
    assert d2.t_hat == Fraction(11, 10)
    assert d2.levels == 11


def test_discrete_rejects_too_coarse_resolution():
    with pytest.raises(ContactError, match="probability"):
        build_discrete(ContactParams(lam=2, delta=1, radius=3), n=1, N=1, t=1)


def test_degenerate_resolution_still_valid():
    # lam = delta = 1, N = 1: probabilities land exactly on {0, 1}
    d = build_discrete(ContactParams(lam=1, delta=1, radius=3), n=1, N=1, t=1)
    assert {e.p for f, e in zip(d.families, d.graph.edges) if f == "up"} == {Fraction(0)}
    assert {e.p for f, e in zip(d.families, d.graph.edges) if f != "up"} == {Fraction(1)}


def test_discrete_diagram_structure():
    d = build_discrete(ContactParams(lam=1, delta=1, radius=3), n=2, N=2, t=1)
    g = d.graph
    faces, outer = g.faces, g.outer_face
    assert len(g.vertices) - g.n_underlying + len(faces) == 2
    cycle = g.boundary
    assert cycle is not None
    assert cycle.block("w") == {d.top_vertex(0)}
    assert cycle.block("a") == {d.top_vertex(-1), d.top_vertex(-2)}
    assert cycle.block("b") == {d.top_vertex(1), d.top_vertex(2)}
    assert set(d.initial_vertices) <= cycle.block("u")
    assert len(d.graph.edges) == len(d.families)


def test_discrete_diagram_mirror_swaps_sides():
    d = build_discrete(ContactParams(lam=1, delta=1, radius=3), n=2, N=2, t=1,
                       mirror=True)
    cycle = d.graph.boundary
    assert cycle.block("b") == {d.top_vertex(-1), d.top_vertex(-2)}
    assert cycle.block("a") == {d.top_vertex(1), d.top_vertex(2)}


def test_discrete_indicator_uses_reachability():
    d = build_discrete(ContactParams(lam=1, delta=1, radius=2), n=1, N=2, t=1)
    g = d.graph
    assert discrete_indicator(d, all_open(g), 0) == 1
    assert discrete_indicator(d, Configuration(0, len(g.edges)), 0) == 0


def test_discrete_export_round_trip():
    d = build_discrete(ContactParams(lam=2, delta=1, radius=2), n=1, N=4, t="1/2")
    text = graph_to_text(d.graph)
    g2 = graph_from_text(text, require_planar=False)
    assert [(e.tail, e.head, e.p) for e in g2.edges] == \
        [(e.tail, e.head, e.p) for e in d.graph.edges]
    assert g2.boundary == d.graph.boundary


# -- estimators ------------------------------------------------------------------

def test_estimate_joint_frozen_dynamics():
    params = ContactParams(lam=0, delta=0, radius=2)
    ej = estimate_joint(params, [-1, 0, 1], t=3.0, reps=500, master=5)
    p, _ = ej.probability((1, 1, 1))
    assert p == 1.0


def test_estimate_joint_pure_death():
    params = ContactParams(lam=0, delta=1, radius=0)
    ej = estimate_joint(params, [0], t=1.0, reps=60_000, master=6, eta0=[0])
    p, se = ej.probability((1,))
    assert abs(p - math.exp(-1)) < 3 * se


def test_estimate_joint_discrete_vs_continuous_gap_shrinks():
    params = ContactParams(lam=2, delta=1, radius=4)
    reps = 40_000
    pc, se_c = estimate_joint(params, [0], t=1.0, reps=reps, master=808).probability((1,))
    gaps = []
    for N in (4, 16):
        d = build_discrete(params, n=4, N=N, t=1)
        pN, se_N = estimate_joint(d, [0], t=None, reps=reps, master=808).probability((1,))
        gaps.append(abs(pN - pc))
    slack = 4 * math.sqrt(se_c ** 2 + se_N ** 2)
    assert gaps[1] < gaps[0] + slack


def test_estimate_joint_guards():
    params = ContactParams(lam=1, delta=1, radius=2)
    with pytest.raises(ContactError, match="target"):
        estimate_joint(params, [5], t=1.0, reps=10, master=1)
    with pytest.raises(ContactError, match="reps"):
        estimate_joint(params, [0], t=1.0, reps=0, master=1)
    d = build_discrete(params, n=2, N=2, t=1)
    with pytest.raises(ContactError, match="horizon"):
        estimate_joint(d, [0], t=2.0, reps=10, master=1)
