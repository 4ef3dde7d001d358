"""Pure-Python kernel backend.

Mirrors the compiled kernels draw for draw: random numbers come from the
same counter streams, so outputs are bit-identical to the Cython backend for
equal seeds.  Uniform blocks are generated with numpy; the per-event state
sweeps stay interpreted, which is what the compiled backend accelerates.
"""

from __future__ import annotations

import numpy as np

from .. import rng


def contact_final_masks(cum_prob, chan_src, chan_dst, total_rate, eta0,
                        t, reps, master, sid0, targets):
    """Final infection masks of ``targets`` for each replica.

    Each replica draws a Poisson number of events for the window, then
    applies uniformly-typed graphical-representation events in time order:
    a channel with dst == src is a recovery mark, any other channel is an
    infection arrow.
    """
    cum_prob = np.asarray(cum_prob, dtype=np.float64)
    chan_src = np.asarray(chan_src, dtype=np.int32)
    chan_dst = np.asarray(chan_dst, dtype=np.int32)
    eta0 = np.asarray(eta0, dtype=np.uint8)
    targets = np.asarray(targets, dtype=np.int32)
    mean = float(total_rate) * float(t)
    out = np.zeros(reps, dtype=np.uint64)
    for j in range(reps):
        seed = rng.stream_seed(master, sid0 + j)
        n_events, used = rng.poisson_draw(seed, 0, mean)
        state = eta0.copy()
        if n_events:
            us = rng.u01_block(seed, used, n_events)
            chans = np.searchsorted(cum_prob, us, side="right")
            srcs = chan_src[chans]
            dsts = chan_dst[chans]
            for src, dst in zip(srcs.tolist(), dsts.tolist()):
                if dst == src:
                    state[src] = 0
                elif state[src]:
                    state[dst] = 1
        mask = 0
        for b, site in enumerate(targets.tolist()):
            if state[site]:
                mask |= 1 << b
        out[j] = mask
    return out


def sample_reach_masks(adj_start, adj_edge, adj_head, edge_p, sources,
                       targets, reps, master, sid0):
    """Reachability masks of ``targets`` from ``sources`` over sampled configs.

    Replica j opens edge e iff draw e of its stream is below p_e (one uniform
    per edge, in edge order), then runs a directed search from the sources.
    """
    adj_start = np.asarray(adj_start, dtype=np.int64)
    adj_edge = np.asarray(adj_edge, dtype=np.int32)
    adj_head = np.asarray(adj_head, dtype=np.int32)
    edge_p = np.asarray(edge_p, dtype=np.float64)
    sources = list(np.asarray(sources, dtype=np.int32))
    targets = np.asarray(targets, dtype=np.int32)
    n_vertices = len(adj_start) - 1
    n_edges = len(edge_p)
    out = np.zeros(reps, dtype=np.uint64)
    for j in range(reps):
        seed = rng.stream_seed(master, sid0 + j)
        open_edges = rng.u01_block(seed, 0, n_edges) < edge_p
        seen = np.zeros(n_vertices, dtype=bool)
        stack = []
        for s in sources:
            if not seen[s]:
                seen[s] = True
                stack.append(int(s))
        while stack:
            v = stack.pop()
            for k in range(adj_start[v], adj_start[v + 1]):
                if open_edges[adj_edge[k]]:
                    h = adj_head[k]
                    if not seen[h]:
                        seen[h] = True
                        stack.append(int(h))
        mask = 0
        for b, v in enumerate(targets.tolist()):
            if seen[v]:
                mask |= 1 << b
        out[j] = mask
    return out


def chain_visit_counts(mask_r, mask_l, edge_p, c0, steps, burn_in, master, sid):
    """Run the two-substep resampling chain via per-config resample masks.

    Aux bits for step n live at counters [n*2E, (n+1)*2E): first the r block
    then the l block, one threshold comparison per edge, frozen edges
    included.  Returns (visit counts over configs for n > burn_in, final
    config).
    """
    mask_r = np.asarray(mask_r, dtype=np.uint64)
    mask_l = np.asarray(mask_l, dtype=np.uint64)
    edge_p = np.asarray(edge_p, dtype=np.float64)
    n_edges = len(edge_p)
    visits = np.zeros(len(mask_r), dtype=np.uint64)
    seed = rng.stream_seed(master, sid)
    c = int(c0)
    mr = mask_r.tolist()
    ml = mask_l.tolist()
    chunk = 1 << 14
    n = 0
    while n < steps:
        m = min(chunk, steps - n)
        us = rng.u01_block(seed, n * 2 * n_edges, m * 2 * n_edges)
        bits = (us.reshape(m, 2, n_edges) < edge_p).astype(np.uint64)
        packed = bits @ (np.uint64(1) << np.arange(n_edges, dtype=np.uint64))
        rbits = packed[:, 0].tolist()
        lbits = packed[:, 1].tolist()
        for i in range(m):
            n += 1
            mask = mr[c]
            c = (c & ~mask) | (rbits[i] & mask)
            mask = ml[c]
            c = (c & ~mask) | (lbits[i] & mask)
            if n > burn_in:
                visits[c] += 1
    return visits, c
