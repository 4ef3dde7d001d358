"""The conditioned resampling chain on the u-to-w connected configurations.

State space: configurations with an open u->w path.  One step resamples, in
substep (i), every edge strictly right of the current leftmost open path
from fresh independent Bernoulli(p_e) variables r, then in substep (ii)
every edge strictly left of the rightmost open path of the intermediate
configuration from fresh l variables.  The guiding path is never resampled,
so the chain stays in its state space; its stationary law is the product
measure conditioned on {u -> w}, which ``exact_kernel`` verifies in exact
rationals on small instances.

Aux-draw schedule: step n consumes counters [(n-1)*2E, n*2E) of the chain
stream, the r block before the l block, one threshold comparison per edge
including frozen ones.  Trajectories therefore do not depend on how many
edges actually get resampled, and the compiled kernel reproduces them bit
for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import rng
from .graph import MixedPlanarGraph
from .percolation import Configuration, extreme_path, partition_edges, reachable


class ChainError(ValueError):
    pass


@dataclass(frozen=True)
class AuxBlock:
    """One step's auxiliary bits, packed by edge index."""

    r_bits: int
    l_bits: int
    n_edges: int


@dataclass(frozen=True)
class ChainState:
    graph: MixedPlanarGraph
    u: int
    w: int
    current: Configuration
    step_count: int = 0


def _endpoints(g: MixedPlanarGraph, u: int | None = None,
               w: int | None = None) -> tuple[int, int]:
    cycle = g.boundary
    if cycle is not None and len(cycle.U) == 1 and len(cycle.W) == 1:
        (cu,), (cw,) = cycle.U, cycle.W
        if (u is not None and u != cu) or (w is not None and w != cw):
            raise ChainError("u/w must match the boundary cycle apexes")
        return cu, cw
    if u is None or w is None:
        raise ChainError("graph has no singleton boundary apexes; pass u and w")
    return u, w


def init_chain(g: MixedPlanarGraph, u: int, w: int,
               alpha: Configuration) -> ChainState:
    if w not in reachable(g, alpha, (u,)):
        raise ChainError("initial configuration has no open u->w path")
    return ChainState(g, u, w, alpha, 0)


def draw_aux(g: MixedPlanarGraph, stream) -> AuxBlock:
    """Full aux block: E r-draws then E l-draws, one per edge in index order."""
    r_bits = 0
    l_bits = 0
    m = len(g.edges)
    for i in range(m):
        if stream.u01() < float(g.edges[i].p):
            r_bits |= 1 << i
    for i in range(m):
        if stream.u01() < float(g.edges[i].p):
            l_bits |= 1 << i
    return AuxBlock(r_bits, l_bits, m)


def substep(g: MixedPlanarGraph, config: Configuration, aux: AuxBlock,
            side: str, u: int, w: int) -> Configuration:
    """Resample right of the leftmost path (side='right') or the mirror."""
    if side == "right":
        path = extreme_path(g, config, u, w, "left")
        bits_src = aux.r_bits
    elif side == "left":
        path = extreme_path(g, config, u, w, "right")
        bits_src = aux.l_bits
    else:
        raise ChainError(f"side must be 'left' or 'right', got {side!r}")
    if path is None:
        raise ChainError("configuration left the state space (no open u->w path)")
    part = partition_edges(g, path)
    mask = 0
    for e in (part.right if side == "right" else part.left):
        mask |= 1 << e
    return Configuration((config.bits & ~mask) | (bits_src & mask), config.n_edges)


def step(state: ChainState, stream) -> ChainState:
    aux = draw_aux(state.graph, stream)
    mid = substep(state.graph, state.current, aux, "right", state.u, state.w)
    new = substep(state.graph, mid, aux, "left", state.u, state.w)
    return replace(state, current=new, step_count=state.step_count + 1)


def run_chain(state: ChainState, steps: int, burn_in: int, thin: int, stream,
              indicator_vertices=None):
    """Yield (step, Configuration, eta) for every thin-th post-burn-in state.

    eta maps each indicator vertex to I{u -> x}; defaults to the boundary
    a-block, w and b-block vertices.
    """
    if not (steps >= burn_in >= 0) or thin < 1:
        raise ChainError("need steps >= burn_in >= 0 and thin >= 1")
    if indicator_vertices is None:
        cycle = state.graph.boundary
        indicator_vertices = (cycle.block_vertices("a") + cycle.block_vertices("w")
                              + cycle.block_vertices("b"))
    for n in range(1, steps + 1):
        state = step(state, stream)
        if n > burn_in and (n - burn_in - 1) % thin == 0:
            reach = reachable(state.graph, state.current, (state.u,))
            eta = {x: int(x in reach) for x in indicator_vertices}
            yield n, state.current, eta


def default_burn_in(g: MixedPlanarGraph) -> int:
    return 10 * len(g.edges)


# -- precomputed tables for small graphs --------------------------------------

TABLE_EDGE_LIMIT = 20


@dataclass(frozen=True)
class ChainTables:
    """Per-configuration masks for table-driven stepping and order checks.

    Arrays are indexed by configuration bits; entries are only meaningful
    for members of the state space (``in_space``).
    """

    graph: MixedPlanarGraph
    u: int
    w: int
    n_edges: int
    in_space: np.ndarray     # bool
    resample_right: np.ndarray  # E_R(leftmost path), the substep (i) mask
    resample_left: np.ndarray   # E_L(rightmost path), the substep (ii) mask
    on_leftmost: np.ndarray
    left_of_leftmost: np.ndarray
    on_rightmost: np.ndarray
    right_of_rightmost: np.ndarray

    def gamma(self):
        return [int(c) for c in np.flatnonzero(self.in_space)]

    def step_bits(self, bits: int, r_bits: int, l_bits: int) -> int:
        mask = int(self.resample_right[bits])
        bits = (bits & ~mask) | (r_bits & mask)
        mask = int(self.resample_left[bits])
        return (bits & ~mask) | (l_bits & mask)

    def more_leftish(self, hat: int, base: int) -> bool:
        on_l_hat = int(self.on_leftmost[hat])
        allowed = int(self.left_of_leftmost[base]) | int(self.on_leftmost[base])
        if on_l_hat & ~allowed:
            return False
        on_r_base = int(self.on_rightmost[base])
        allowed = int(self.right_of_rightmost[hat]) | int(self.on_rightmost[hat])
        if on_r_base & ~allowed:
            return False
        if base & int(self.left_of_leftmost[hat]) & ~hat:
            return False
        if hat & int(self.right_of_rightmost[base]) & ~base:
            return False
        return True


def _edge_mask(edges) -> int:
    mask = 0
    for e in edges:
        mask |= 1 << e
    return mask


def build_tables(g: MixedPlanarGraph, u: int | None = None,
                 w: int | None = None) -> ChainTables:
    u, w = _endpoints(g, u, w)
    m = len(g.edges)
    if m > TABLE_EDGE_LIMIT:
        raise ChainError(f"table construction guard: {m} edges > {TABLE_EDGE_LIMIT}")
    size = 1 << m
    in_space = np.zeros(size, dtype=bool)
    arrays = {name: np.zeros(size, dtype=np.uint64)
              for name in ("resample_right", "resample_left", "on_leftmost",
                           "left_of_leftmost", "on_rightmost", "right_of_rightmost")}
    for bits in range(size):
        cfg = Configuration(bits, m)
        pl = extreme_path(g, cfg, u, w, "left")
        if pl is None:
            continue
        pr = extreme_path(g, cfg, u, w, "right")
        part_l = partition_edges(g, pl)
        part_r = partition_edges(g, pr)
        in_space[bits] = True
        arrays["resample_right"][bits] = _edge_mask(part_l.right)
        arrays["resample_left"][bits] = _edge_mask(part_r.left)
        arrays["on_leftmost"][bits] = _edge_mask(part_l.on_path)
        arrays["left_of_leftmost"][bits] = _edge_mask(part_l.left)
        arrays["on_rightmost"][bits] = _edge_mask(part_r.on_path)
        arrays["right_of_rightmost"][bits] = _edge_mask(part_r.right)
    return ChainTables(g, u, w, m, in_space, **arrays)


def run_chain_fast(tables: ChainTables, alpha: Configuration, steps: int,
                   burn_in: int, master: int, stream_index: int = 0):
    """Visit counts over configurations via the kernel backend."""
    from . import kernels

    if not tables.in_space[alpha.bits]:
        raise ChainError("initial configuration has no open u->w path")
    g = tables.graph
    probs = np.asarray([float(e.p) for e in g.edges])
    sid = (rng.DOMAIN_CHAIN << 32) | stream_index
    visits, final = kernels.chain_visit_counts(
        tables.resample_right, tables.resample_left, probs, alpha.bits,
        steps, burn_in, master, sid)
    return visits, Configuration(final, tables.n_edges)


# -- monotonicity diagnostics ---------------------------------------------------

def aux_sequence(g: MixedPlanarGraph, master: int, sid: int,
                 steps: int) -> list[tuple[int, int]]:
    """(r_bits, l_bits) per step, drawn exactly like the chain stream."""
    probs = np.asarray([float(e.p) for e in g.edges])
    m = len(probs)
    seed = rng.stream_seed(master, sid)
    us = rng.u01_block(seed, 0, steps * 2 * m)
    bits = (us.reshape(steps, 2, m) < probs).astype(np.uint64)
    packed = bits @ (np.uint64(1) << np.arange(m, dtype=np.uint64))
    return [(int(r), int(l)) for r, l in packed.tolist()]


def comparable_pairs(g: MixedPlanarGraph, tables: ChainTables) -> list[tuple[int, int]]:
    """Strictly ordered (more-leftish, less-leftish) state pairs of the chain."""
    states = chain_states(g, tables)
    return [(h, b) for h in states for b in states
            if h != b and tables.more_leftish(h, b)]


def order_preservation_trials(g: MixedPlanarGraph, tables: ChainTables,
                              n_trials: int, steps: int, master: int) -> dict:
    """Coupled trajectories with shared aux: count more-leftish violations."""
    pairs = comparable_pairs(g, tables)
    if not pairs:
        raise ChainError("no comparable state pairs to couple")
    picker = rng.Stream(master, (rng.DOMAIN_MISC << 32) | 1)
    violations = 0
    checks = 0
    for trial in range(n_trials):
        hat, base = pairs[picker.randrange(len(pairs))]
        for r_bits, l_bits in aux_sequence(g, master, (rng.DOMAIN_CHAIN << 32) | trial, steps):
            hat = tables.step_bits(hat, r_bits, l_bits)
            base = tables.step_bits(base, r_bits, l_bits)
            checks += 1
            if not tables.more_leftish(hat, base):
                violations += 1
    return {"trials": n_trials, "steps": steps, "checks": checks,
            "violations": violations}


def aux_flip_trials(g: MixedPlanarGraph, tables: ChainTables, n_trials: int,
                    steps: int, master: int) -> dict:
    """Single aux-bit flips: l 0->1 or r 1->0 must push the chain leftish.

    Reruns each trajectory with one flipped aux bit and checks that the
    perturbed run is more leftish (or equal) at every step from the flip on,
    and that the u->x indicators move monotonely on the a- and b-blocks.
    """
    cycle = g.boundary
    (u,) = cycle.U
    a_block = cycle.block_vertices("a")
    b_block = cycle.block_vertices("b")
    active = [i for i, e in enumerate(g.edges) if 0 < e.p < 1]
    states = chain_states(g, tables)
    reach_cache = {bits: reachable(g, Configuration(bits, len(g.edges)), (u,))
                   for bits in range(1 << len(g.edges)) if tables.in_space[bits]}
    picker = rng.Stream(master, (rng.DOMAIN_MISC << 32) | 2)
    violations = 0
    flips_done = 0
    for trial in range(n_trials):
        start = states[picker.randrange(len(states))]
        aux = aux_sequence(g, master, (rng.DOMAIN_CHAIN << 32) | (trial + n_trials), steps)
        k = picker.randrange(steps)
        e = active[picker.randrange(len(active))]
        flip_l = bool(picker.bernoulli(0.5))
        r_bits, l_bits = aux[k]
        if flip_l:
            if (l_bits >> e) & 1:
                continue  # the flip 0 -> 1 is not available here
            aux_mod = aux[:k] + [(r_bits, l_bits | (1 << e))] + aux[k + 1:]
        else:
            if not (r_bits >> e) & 1:
                continue
            aux_mod = aux[:k] + [(r_bits & ~(1 << e), l_bits)] + aux[k + 1:]
        flips_done += 1
        plain = mod = start
        for n in range(steps):
            plain = tables.step_bits(plain, *aux[n])
            mod = tables.step_bits(mod, *aux_mod[n])
            if n < k:
                if plain != mod:
                    violations += 1
                continue
            if not tables.more_leftish(mod, plain):
                violations += 1
            rp, rm = reach_cache[plain], reach_cache[mod]
            if any((x in rm) < (x in rp) for x in a_block):
                violations += 1
            if any((x in rm) > (x in rp) for x in b_block):
                violations += 1
    return {"trials": n_trials, "flips": flips_done, "steps": steps,
            "violations": violations}


# -- exact kernel ---------------------------------------------------------------

KERNEL_WORK_LIMIT = 1 << 24


def stationary_mu(g: MixedPlanarGraph, u: int | None = None,
                  w: int | None = None) -> dict[int, Fraction]:
    """The product measure conditioned on {u -> w}, as exact rationals."""
    u, w = _endpoints(g, u, w)
    m = len(g.edges)
    active = [i for i, e in enumerate(g.edges) if 0 < e.p < 1]
    base = 0
    for i, e in enumerate(g.edges):
        if e.p == 1:
            base |= 1 << i
    weights: dict[int, Fraction] = {}
    total = Fraction(0)
    for k in range(1 << len(active)):
        bits = base
        wt = Fraction(1)
        for j, i in enumerate(active):
            if (k >> j) & 1:
                bits |= 1 << i
                wt *= g.edges[i].p
            else:
                wt *= 1 - g.edges[i].p
        if w in reachable(g, Configuration(bits, m), (u,)):
            weights[bits] = wt
            total += wt
    if total == 0:
        raise ChainError("the state space is empty: P(u -> w) = 0")
    return {bits: wt / total for bits, wt in weights.items()}


def frozen_masks(g: MixedPlanarGraph) -> tuple[int, int]:
    """(always-closed, always-open) edge masks for p = 0 and p = 1 edges."""
    p0 = p1 = 0
    for i, e in enumerate(g.edges):
        if e.p == 0:
            p0 |= 1 << i
        elif e.p == 1:
            p1 |= 1 << i
    return p0, p1


def chain_states(g: MixedPlanarGraph, tables: ChainTables) -> list[int]:
    """State space of the chain: u->w connected and frozen-edge consistent."""
    p0, p1 = frozen_masks(g)
    return [bits for bits in tables.gamma()
            if not (bits & p0) and (bits & p1) == p1]


def _substep_kernel(g, tables, side) -> dict[int, dict[int, Fraction]]:
    masks = tables.resample_right if side == "right" else tables.resample_left
    m = tables.n_edges
    kernel: dict[int, dict[int, Fraction]] = {}
    work = 0
    for bits in chain_states(g, tables):
        mask = int(masks[bits])
        free = [i for i in range(m) if (mask >> i) & 1 and 0 < g.edges[i].p < 1]
        forced = 0
        for i in range(m):
            if (mask >> i) & 1 and g.edges[i].p == 1:
                forced |= 1 << i
        work += 1 << len(free)
        if work > KERNEL_WORK_LIMIT:
            raise ChainError("exact-kernel size guard exceeded")
        row: dict[int, Fraction] = {}
        stripped = bits & ~mask
        for k in range(1 << len(free)):
            wt = Fraction(1)
            nxt = stripped | forced
            for j, i in enumerate(free):
                if (k >> j) & 1:
                    nxt |= 1 << i
                    wt *= g.edges[i].p
                else:
                    wt *= 1 - g.edges[i].p
            row[nxt] = row.get(nxt, Fraction(0)) + wt
        kernel[bits] = row
    return kernel


def exact_kernel(g: MixedPlanarGraph, u: int | None = None, w: int | None = None):
    """Exact one-step kernel plus the two substep kernels, as nested dicts.

    Rows are over the state space; entries are rational probabilities that
    sum to one per row.
    """
    gu, gw = _endpoints(g, u, w)
    tables = build_tables(g, gu, gw)
    sub_right = _substep_kernel(g, tables, "right")
    sub_left = _substep_kernel(g, tables, "left")
    full: dict[int, dict[int, Fraction]] = {}
    for bits, row1 in sub_right.items():
        acc: dict[int, Fraction] = {}
        for mid, p1 in row1.items():
            for nxt, p2 in sub_left[mid].items():
                acc[nxt] = acc.get(nxt, Fraction(0)) + p1 * p2
        full[bits] = acc
    return full, sub_right, sub_left, tables


def kernel_applied(mu: dict[int, Fraction],
                   kernel: dict[int, dict[int, Fraction]]) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for bits, p in mu.items():
        for nxt, q in kernel[bits].items():
            out[nxt] = out.get(nxt, Fraction(0)) + p * q
    return {k: v for k, v in out.items() if v != 0}


def kernel_diagnostics(kernel: dict[int, dict[int, Fraction]]) -> dict:
    """Row sums, strong connectivity and positive-diagonal (aperiodicity) checks."""
    states = sorted(kernel)
    rows_ok = all(sum(row.values()) == 1 for row in kernel.values())
    diag_positive = all(kernel[s].get(s, Fraction(0)) > 0 for s in states)

    def explore(adj):
        seen = {states[0]}
        stack = [states[0]]
        while stack:
            v = stack.pop()
            for nb in adj[v]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return seen

    fwd = {s: [t for t, p in kernel[s].items() if p > 0] for s in states}
    bwd = {s: [] for s in states}
    for s, row in kernel.items():
        for t, p in row.items():
            if p > 0:
                bwd[t].append(s)
    irreducible = (len(explore(fwd)) == len(states) and
                   len(explore(bwd)) == len(states))
    return {"rows_sum_to_one": rows_ok, "aperiodic": diag_positive,
            "irreducible": irreducible, "states": len(states)}
