#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

The two backends are draw-for-draw identical (asserted here on the benchmark
inputs), so the comparison is purely about speed.  Workloads are scaled-down
versions of the acceptance runs; per-replica/step costs extrapolate
linearly.
"""

import time

import numpy as np

from percoplane import rng
from percoplane.contact import ContactParams, build_discrete, contact_channels
from percoplane.graph import normalize
from percoplane.gallery import diamond
from percoplane.kernels import backends
from percoplane.mcmc import build_tables
from percoplane.percolation import adjacency_arrays


def time_call(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_contact(mods, reps):
    params = ContactParams(lam=2, delta=1, radius=20)
    cum, srcs, dsts, total = contact_channels(params)
    eta = np.ones(params.n_sites, dtype=np.uint8)
    targets = np.asarray([params.site_index(0)], dtype=np.int32)
    args = (cum, srcs, dsts, total, eta, 2.0, reps, 42,
            (rng.DOMAIN_CONTACT << 32), targets)
    return {name: time_call(mod.contact_final_masks, *args)
            for name, mod in mods}


def bench_reach(mods, reps):
    d = build_discrete(ContactParams(lam=2, delta=1, radius=6), n=6, N=10, t=1)
    start, eidx, heads, id2i = adjacency_arrays(d.graph)
    probs = np.asarray([float(e.p) for e in d.graph.edges])
    srcs = np.asarray([id2i[v] for v in d.initial_vertices], dtype=np.int32)
    tgt = np.asarray([id2i[d.top_vertex(0)]], dtype=np.int32)
    args = (start, eidx, heads, probs, srcs, tgt, reps, 42,
            (rng.DOMAIN_EDGE_SAMPLE << 32))
    return {name: time_call(mod.sample_reach_masks, *args)
            for name, mod in mods}


def bench_chain(mods, steps):
    g = normalize(diamond(extra_chord=True))
    tables = build_tables(g)
    probs = np.asarray([float(e.p) for e in g.edges])
    alpha = max(tables.gamma())
    args = (tables.resample_right, tables.resample_left, probs, alpha,
            steps, 0, 42, (rng.DOMAIN_CHAIN << 32))
    return {name: time_call(mod.chain_visit_counts, *args)
            for name, mod in mods}


def report(title, unit_count, results):
    print(f"\n{title}")
    pure_t = results["pure"][0]
    for name in ("pure", "compiled"):
        if name not in results:
            continue
        t, _ = results[name]
        rate = unit_count / t
        speedup = pure_t / t
        print(f"  {name:9s} {t * 1e3:10.1f} ms   {rate:12.3g} /s   x{speedup:.1f}")
    outs = [v[1] for v in results.values()]
    if len(outs) == 2:
        a, b = outs
        if isinstance(a, tuple):
            same = all(np.array_equal(x, y) if isinstance(x, np.ndarray) else x == y
                       for x, y in zip(a, b))
        else:
            same = np.array_equal(a, b)
        print(f"  backends agree bit-for-bit: {same}")
        assert same


def main():
    mods = backends()
    names = [n for n, _ in mods]
    print(f"available backends: {names}")
    if "compiled" not in names:
        print("compiled backend missing; building it makes the acceptance "
              "suite run within its budgets")

    reps = 2000
    report(f"contact-process sweep ({reps} replicas, 41 sites, t=2)",
           reps, bench_contact(mods, reps))

    reps = 1000
    report(f"configuration sampling + reachability ({reps} replicas, "
           "13x11 diagram)", reps, bench_reach(mods, reps))

    steps = 200_000
    report(f"resampling chain ({steps} steps, 10-edge graph)",
           steps, bench_chain(mods, steps))


if __name__ == "__main__":
    main()
