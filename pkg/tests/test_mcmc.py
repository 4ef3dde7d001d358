from fractions import Fraction

import pytest

from percoplane.graph import build_graph, normalize
from percoplane.mcmc import (
    AuxBlock,
    ChainError,
    aux_flip_trials,
    build_tables,
    chain_states,
    comparable_pairs,
    exact_kernel,
    init_chain,
    kernel_applied,
    kernel_diagnostics,
    order_preservation_trials,
    run_chain,
    run_chain_fast,
    stationary_mu,
    step,
    substep,
)
from percoplane.percolation import Configuration, all_closed, all_open, reachable
from percoplane.rng import DOMAIN_CHAIN, Stream

from conftest import make_diamond


@pytest.fixture
def gd():
    return normalize(make_diamond())


@pytest.fixture
def g5():
    return normalize(make_diamond(extra_chord=True))


def edge_index(g, tail, head):
    for i, e in enumerate(g.edges):
        if (e.tail, e.head) == (tail, head):
            return i
    raise AssertionError


def test_init_chain_accepts_gamma_members_only(gd):
    assert init_chain(gd, 0, 2, all_open(gd)).step_count == 0
    with pytest.raises(ChainError):
        init_chain(gd, 0, 2, all_closed(gd))
    m = len(gd.edges)
    for bits in range(1 << m):
        cfg = Configuration(bits, m)
        if 2 in reachable(gd, cfg, (0,)):
            init_chain(gd, 0, 2, cfg)


def test_substep_identity_when_aux_matches(gd):
    cfg = all_open(gd)
    aux = AuxBlock(cfg.bits, cfg.bits, len(gd.edges))
    assert substep(gd, cfg, aux, "right", 0, 2) == cfg
    assert substep(gd, cfg, aux, "left", 0, 2) == cfg


def test_substep_right_resamples_bottom_of_diamond(gd):
    # leftmost path of the all-open diamond is the top; r = 0 closes the bottom
    cfg = all_open(gd)
    out = substep(gd, cfg, AuxBlock(0, 0, len(gd.edges)), "right", 0, 2)
    top = {edge_index(gd, 0, 1), edge_index(gd, 1, 2),
           edge_index(gd, 1, 0), edge_index(gd, 2, 1)}
    for i in range(len(gd.edges)):
        assert out.is_open(i) == (i in top)


def test_substep_preserves_gamma_exhaustively(gd):
    m = len(gd.edges)
    tables = build_tables(gd)
    active = [i for i, e in enumerate(gd.edges) if 0 < e.p < 1]
    for bits in chain_states(gd, tables):
        for k in range(1 << len(active)):
            aux_bits = 0
            for j, i in enumerate(active):
                if (k >> j) & 1:
                    aux_bits |= 1 << i
            for side in ("right", "left"):
                aux = AuxBlock(aux_bits, aux_bits, m)
                out = substep(gd, Configuration(bits, m), aux, side, 0, 2)
                assert 2 in reachable(gd, out, (0,))


def test_single_edge_chain_never_moves():
    g = build_graph(
        vertices=[(0, 0, 0), (1, 1, 0)],
        edges=[(0, 0, 1, True, "1/2"), (1, 1, 0, True, 0)],
    )
    cfg = Configuration.from_open([0], 2)
    st = init_chain(g, 0, 1, cfg)
    stream = Stream(5, 0)
    for _ in range(25):
        st = step(st, stream)
        assert st.current == cfg


def test_single_edge_exact_kernel_is_identity():
    g = build_graph(
        vertices=[(0, 0, 0), (1, 1, 0)],
        edges=[(0, 0, 1, True, "1/2"), (1, 1, 0, True, 0)],
    )
    full, sub_r, sub_l, _ = exact_kernel(g, 0, 1)
    assert full == {0b01: {0b01: Fraction(1)}}
    assert sub_r == sub_l == full


def test_step_deterministic_given_seed(gd):
    runs = []
    for _ in range(2):
        st = init_chain(gd, 0, 2, all_open(gd))
        stream = Stream(77, 3)
        runs.append([step_out.current.bits
                     for step_out in iter_steps(st, stream, 40)])
    assert runs[0] == runs[1]


def iter_steps(st, stream, n):
    for _ in range(n):
        st = step(st, stream)
        yield st


def test_run_chain_stream_contract(gd):
    st = init_chain(gd, 0, 2, all_open(gd))
    assert list(run_chain(st, 5, 5, 1, Stream(1, 0))) == []
    st = init_chain(gd, 0, 2, all_open(gd))
    out = list(run_chain(st, 30, 10, 1, Stream(1, 0)))
    assert len(out) == 20
    st = init_chain(gd, 0, 2, all_open(gd))
    out = list(run_chain(st, 30, 10, 4, Stream(1, 0)))
    assert [n for n, _, _ in out] == [11, 15, 19, 23, 27]


def test_run_chain_indicator_matches_exact_mu(gd):
    mu = stationary_mu(gd)
    exact = sum(float(p) for bits, p in mu.items()
                if 1 in reachable(gd, Configuration(bits, len(gd.edges)), (0,)))
    st = init_chain(gd, 0, 2, all_open(gd))
    samples = list(run_chain(st, 12000, 2000, 1, Stream(421, 9)))
    freq = sum(eta[1] for _, _, eta in samples) / len(samples)
    se = (exact * (1 - exact) / len(samples)) ** 0.5
    assert abs(freq - exact) < 5 * se  # correlated samples: generous slack


def test_exact_stationarity_diamond_and_five_edge(gd, g5):
    for g in (gd, g5):
        full, sub_r, sub_l, _ = exact_kernel(g)
        mu = stationary_mu(g)
        assert kernel_applied(mu, sub_r) == mu
        assert kernel_applied(mu, sub_l) == mu
        assert kernel_applied(mu, full) == mu
        for row in full.values():
            assert sum(row.values()) == 1
        diag = kernel_diagnostics(full)
        assert diag["irreducible"] and diag["aperiodic"]


def test_diamond_mu_is_uniform_over_seven_states(gd):
    mu = stationary_mu(gd)
    assert len(mu) == 7
    assert set(mu.values()) == {Fraction(1, 7)}


def test_fast_chain_matches_python_steps(gd):
    tables = build_tables(gd)
    alpha = all_open(gd)
    visits, final = run_chain_fast(tables, alpha, 150, 0, master=2024)
    st = init_chain(gd, 0, 2, alpha)
    stream = Stream(2024, (DOMAIN_CHAIN << 32) | 0)
    for _ in range(150):
        st = step(st, stream)
    assert st.current == final
    assert visits.sum() == 150


def test_fast_chain_empirical_tv(gd):
    tables = build_tables(gd)
    mu = stationary_mu(gd)
    visits, _ = run_chain_fast(tables, all_open(gd), 100_000, 0, master=31337)
    emp = visits / visits.sum()
    tv = 0.5 * float(sum(abs(emp[b] - float(p)) for b, p in mu.items()))
    tv += 0.5 * float(sum(emp[b] for b in range(len(emp)) if b not in mu))
    assert tv < 0.02


def test_order_preservation_and_flips(gd, g5):
    for g in (gd, g5):
        tables = build_tables(g)
        assert comparable_pairs(g, tables)
        rep = order_preservation_trials(g, tables, 400, 50, master=99)
        assert rep["violations"] == 0
        rep = aux_flip_trials(g, tables, 300, 50, master=99)
        assert rep["violations"] == 0
        assert rep["flips"] > 50
