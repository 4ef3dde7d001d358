"""Contact process on a finite site window: graphical representation and
space-time discretization.

The continuous-time process lives on sites -L..L with recovery marks at rate
delta_x and infection arrows between neighbours at rates lambda(x, y)
(y infects x).  ``simulate_graphical``/``evolve_state`` realize the
space-time diagram literally; the batch estimators instead push replicas
through the kernel backends, which generate the same diagram event by event
in time order.

``build_discrete`` produces the percolation graph on vertices (x, k/N):
each vertex starts oriented edges to (x+1, k/N), (x-1, k/N) and
(x, (k+1)/N), open with probabilities lambda(x+1,x)/N, lambda(x-1,x)/N and
1 - delta_x/N.  The diagram is a MixedPlanarGraph with the rectangle
perimeter as boundary cycle, so every other module consumes it unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import rng
from .geometry import to_fraction
from .graph import MixedPlanarGraph, build_graph
from .percolation import Configuration, reachable


class ContactError(ValueError):
    pass


def _rate_fn(value, arity):
    if callable(value):
        return value
    r = float(value)
    if arity == 1:
        return lambda x: r
    return lambda x, y: r


@dataclass
class ContactParams:
    """Rates on the window [-radius, radius]; arrows leaving the window are dropped."""

    lam: object
    delta: object
    radius: int

    rec: list = field(init=False)
    to_right: list = field(init=False)  # rate of arrows x -> x+1, i.e. lambda(x+1, x)
    to_left: list = field(init=False)   # rate of arrows x -> x-1, i.e. lambda(x-1, x)
    bound: float = field(init=False)

    def __post_init__(self):
        if self.radius < 0:
            raise ContactError("window radius must be nonnegative")
        lam = _rate_fn(self.lam, 2)
        delta = _rate_fn(self.delta, 1)
        sites = self.sites()
        self.rec = [float(delta(x)) for x in sites]
        self.to_right = [float(lam(x + 1, x)) if x < self.radius else 0.0
                         for x in sites]
        self.to_left = [float(lam(x - 1, x)) if x > -self.radius else 0.0
                        for x in sites]
        rates = self.rec + self.to_right + self.to_left
        if any(r < 0 or not math.isfinite(r) for r in rates):
            raise ContactError("rates must be finite and nonnegative")
        self.bound = max(rates, default=0.0)

    def sites(self) -> list[int]:
        return list(range(-self.radius, self.radius + 1))

    @property
    def n_sites(self) -> int:
        return 2 * self.radius + 1

    def site_index(self, x: int) -> int:
        if abs(x) > self.radius:
            raise ContactError(f"site {x} outside the window")
        return x + self.radius


@dataclass(frozen=True)
class GraphicalRep:
    """Sorted event times per site: recovery marks and outgoing arrows."""

    t_max: float
    marks: tuple[tuple[float, ...], ...]
    arrows_right: tuple[tuple[float, ...], ...]
    arrows_left: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        for fam in (self.marks, self.arrows_right, self.arrows_left):
            for times in fam:
                assert all(0 < b - a for a, b in zip(times, times[1:])), \
                    "event lists must be strictly increasing"
                assert all(0 <= s <= self.t_max for s in times)


def _poisson_times(stream, rate: float, t_max: float) -> tuple[float, ...]:
    if rate <= 0:
        return ()
    out = []
    t = stream.exponential(rate)
    while t <= t_max:
        out.append(t)
        t += stream.exponential(rate)
    return tuple(out)


def simulate_graphical(params: ContactParams, t_max: float, stream) -> GraphicalRep:
    """Independent Poisson event lists for every site; reproducible per stream.

    Draw order is fixed (per site: marks, right arrows, left arrows) so one
    (seed, stream) pair identifies the realization.
    """
    if t_max <= 0:
        raise ContactError("t_max must be positive")
    marks, rights, lefts = [], [], []
    for s in range(params.n_sites):
        marks.append(_poisson_times(stream, params.rec[s], t_max))
        rights.append(_poisson_times(stream, params.to_right[s], t_max))
        lefts.append(_poisson_times(stream, params.to_left[s], t_max))
    return GraphicalRep(t_max, tuple(marks), tuple(rights), tuple(lefts))


def resolve_eta0(params_or_diagram, eta0) -> frozenset[int]:
    radius = params_or_diagram.radius
    if eta0 == "all" or eta0 is None:
        return frozenset(range(-radius, radius + 1))
    sites = frozenset(int(x) for x in eta0)
    for x in sites:
        if abs(x) > radius:
            raise ContactError(f"initially infected site {x} outside window")
    return sites


def evolve_state(gr: GraphicalRep, params: ContactParams, eta0,
                 t: float) -> frozenset[int]:
    """Infected sites at time t via a forward event sweep.

    Equivalent to the allowable-path definition (a mark heals its site, an
    arrow infects its head if the tail is infected); the equivalence against
    a path-search oracle is asserted in the tests.
    """
    if t > gr.t_max:
        raise ContactError("query time exceeds the simulated horizon")
    infected = resolve_eta0(params, eta0)
    state = bytearray(params.n_sites)
    for x in infected:
        state[params.site_index(x)] = 1
    events = []
    for s in range(params.n_sites):
        events.extend((tt, s, s) for tt in gr.marks[s])
        events.extend((tt, s, s + 1) for tt in gr.arrows_right[s])
        events.extend((tt, s, s - 1) for tt in gr.arrows_left[s])
    events.sort()
    for tt, src, dst in events:
        if tt > t:
            break
        if dst == src:
            state[src] = 0
        elif 0 <= dst < params.n_sites and state[src]:
            state[dst] = 1
    return frozenset(x for x in params.sites() if state[params.site_index(x)])


# -- discrete space-time diagram ------------------------------------------------

@dataclass(frozen=True)
class DiscreteDiagram:
    """Percolation graph on the window [-n, n] x {0, 1/N, ..., t_hat}."""

    graph: MixedPlanarGraph
    radius: int
    resolution: int
    t: Fraction
    t_hat: Fraction
    levels: int
    families: tuple[str, ...]      # per edge index: 'right' | 'left' | 'up'
    initial_sites: frozenset[int]
    mirror: bool

    def vertex_id(self, x: int, k: int) -> int:
        if abs(x) > self.radius or not 0 <= k <= self.levels:
            raise ContactError(f"({x}, {k}/{self.resolution}) outside the diagram")
        column = -x if self.mirror else x  # mirrored diagrams draw site x at -x
        return k * (2 * self.radius + 1) + (column + self.radius)

    def top_vertex(self, x: int) -> int:
        return self.vertex_id(x, self.levels)

    @property
    def initial_vertices(self) -> tuple[int, ...]:
        return tuple(self.vertex_id(x, 0) for x in sorted(self.initial_sites))


def build_discrete(params: ContactParams, n: int, N: int, t,
                   eta0="all", mirror: bool = False) -> DiscreteDiagram:
    """Discretize: three oriented edge families with the stated probabilities.

    Requires every edge probability in [0, 1], i.e. N at least the maximum
    rate.  t_hat is the smallest multiple of 1/N that is >= t; U collects the
    initially infected sites of the bottom row.
    """
    if n < 1:
        raise ContactError("diagram needs window radius n >= 1")
    if N < 1:
        raise ContactError("time resolution N must be a positive integer")
    lam = _rate_fn(params.lam, 2)
    delta = _rate_fn(params.delta, 1)
    t = to_fraction(t)
    if t <= 0:
        raise ContactError("t must be positive")
    tN = t * N
    levels = -(-tN.numerator // tN.denominator)  # ceil
    t_hat = Fraction(levels, N)
    width = 2 * n + 1
    sign = -1 if mirror else 1  # mirror reflects the drawing, site x at column -x

    def vid(x, k):
        return k * width + (sign * x + n)

    def prob(value, what):
        p = to_fraction(value)
        if not 0 <= p <= 1:
            raise ContactError(
                f"{what} probability {p} outside [0, 1]; increase N above the maximum rate")
        return p

    vertices = []
    for k in range(levels + 1):
        for x in range(-n, n + 1):
            vertices.append((vid(x, k), sign * x, Fraction(k, N)))
    edges = []
    families = []
    for k in range(levels + 1):
        for x in range(-n, n + 1):
            if x < n:
                edges.append((len(edges), vid(x, k), vid(x + 1, k), True,
                              prob(to_fraction(lam(x + 1, x)) / N, "infection")))
                families.append("right")
            if x > -n:
                edges.append((len(edges), vid(x, k), vid(x - 1, k), True,
                              prob(to_fraction(lam(x - 1, x)) / N, "infection")))
                families.append("left")
            if k < levels:
                edges.append((len(edges), vid(x, k), vid(x, k + 1), True,
                              prob(1 - to_fraction(delta(x)) / N, "survival")))
                families.append("up")

    # clockwise perimeter over geometric columns c (site sign*c): bottom row
    # right-to-left, left column up, top row left-to-right around the target
    # at column 0, right column down
    order, roles = [], []
    for c in range(n, -n - 1, -1):
        order.append(vid(sign * c, 0))
        roles.append("u")
    for k in range(1, levels):
        order.append(vid(sign * -n, k))
        roles.append("u")
    for c in range(-n, n + 1):
        order.append(vid(sign * c, levels))
        roles.append("w" if c == 0 else ("a" if c < 0 else "b"))
    for k in range(levels - 1, 0, -1):
        order.append(vid(sign * n, k))
        roles.append("u")

    infected = resolve_eta0_window(n, eta0)
    if not infected:
        raise ContactError("no initially infected site inside the window")
    cycle = {"order": list(zip(order, roles)),
             "U": [vid(x, 0) for x in sorted(infected)],
             "W": [vid(0, levels)]}
    graph = build_graph(vertices, edges, cycle, require_planar=False)
    return DiscreteDiagram(graph, n, N, t, t_hat, levels, tuple(families),
                           infected, mirror)


def resolve_eta0_window(radius: int, eta0) -> frozenset[int]:
    if eta0 == "all" or eta0 is None:
        return frozenset(range(-radius, radius + 1))
    sites = frozenset(int(x) for x in eta0)
    return frozenset(x for x in sites if abs(x) <= radius)


def discrete_indicator(diagram: DiscreteDiagram, config: Configuration,
                       x: int) -> int:
    """Connection indicator {U -> (x, t_hat)} via the percolation reachability."""
    reach = reachable(diagram.graph, config, diagram.initial_vertices)
    return int(diagram.top_vertex(x) in reach)


# -- batch estimation -----------------------------------------------------------

def contact_channels(params: ContactParams):
    """Cumulative channel table for the event-stream simulators."""
    srcs, dsts, rates = [], [], []
    for s in range(params.n_sites):
        if params.rec[s] > 0:
            srcs.append(s)
            dsts.append(s)
            rates.append(params.rec[s])
        if params.to_right[s] > 0:
            srcs.append(s)
            dsts.append(s + 1)
            rates.append(params.to_right[s])
        if params.to_left[s] > 0:
            srcs.append(s)
            dsts.append(s - 1)
            rates.append(params.to_left[s])
    total = float(sum(rates))
    if total <= 0:
        cum = np.ones(1)
        return (cum, np.zeros(1, dtype=np.int32), np.zeros(1, dtype=np.int32), 0.0)
    cum = np.cumsum(np.asarray(rates, dtype=np.float64)) / total
    cum[-1] = 1.0  # guard against rounding drift at the top
    return (cum, np.asarray(srcs, dtype=np.int32),
            np.asarray(dsts, dtype=np.int32), total)


@dataclass(frozen=True)
class EmpiricalJoint:
    """Empirical joint law of binary site variables with binomial errors."""

    targets: tuple[int, ...]
    counts: dict[tuple[int, ...], int]
    reps: int

    def probability(self, outcome: tuple[int, ...]) -> tuple[float, float]:
        p = self.counts.get(outcome, 0) / self.reps
        return p, math.sqrt(p * (1 - p) / self.reps)

    def event(self, predicate) -> tuple[float, float]:
        hits = sum(c for o, c in self.counts.items() if predicate(o))
        p = hits / self.reps
        return p, math.sqrt(p * (1 - p) / self.reps)

    def rows(self):
        for outcome in sorted(self.counts):
            p, se = self.probability(outcome)
            yield outcome, self.counts[outcome], p, se


def _masks_to_joint(masks, targets) -> EmpiricalJoint:
    k = len(targets)
    counts: dict[tuple[int, ...], int] = {}
    values, freq = np.unique(np.asarray(masks, dtype=np.uint64), return_counts=True)
    for v, c in zip(values.tolist(), freq.tolist()):
        outcome = tuple((int(v) >> b) & 1 for b in range(k))
        counts[outcome] = counts.get(outcome, 0) + int(c)
    return EmpiricalJoint(tuple(targets), counts, len(masks))


def simulate_contact_masks(params: ContactParams, eta0, t: float, reps: int,
                           master: int, targets, *, stream_index: int = 0):
    """Per-replica bitmasks of the final infection state on ``targets``."""
    from . import kernels

    cum, srcs, dsts, total = contact_channels(params)
    eta = np.zeros(params.n_sites, dtype=np.uint8)
    for x in resolve_eta0(params, eta0):
        eta[params.site_index(x)] = 1
    tgt = np.asarray([params.site_index(x) for x in targets], dtype=np.int32)
    sid0 = (rng.DOMAIN_CONTACT << 32) | stream_index
    return kernels.contact_final_masks(cum, srcs, dsts, total, eta, float(t),
                                       reps, master, sid0, tgt)


def sample_discrete_masks(diagram: DiscreteDiagram, reps: int, master: int,
                          targets, *, stream_index: int = 0):
    """Per-replica bitmasks of {U -> (x, t_hat)} for x in ``targets``."""
    from . import kernels
    from .percolation import adjacency_arrays

    g = diagram.graph
    start, eidx, heads, id2i = adjacency_arrays(g)
    probs = np.asarray([float(e.p) for e in g.edges])
    srcs = np.asarray([id2i[v] for v in diagram.initial_vertices], dtype=np.int32)
    tgt = np.asarray([id2i[diagram.top_vertex(x)] for x in targets], dtype=np.int32)
    sid0 = (rng.DOMAIN_EDGE_SAMPLE << 32) | stream_index
    return kernels.sample_reach_masks(start, eidx, heads, probs, srcs, tgt,
                                      reps, master, sid0)


def estimate_joint(source, targets, t, reps: int, master: int,
                   eta0="all", *, stream_index: int = 0) -> EmpiricalJoint:
    """Empirical joint distribution of the infection indicators on ``targets``.

    Continuous sources (ContactParams) simulate the graphical representation
    to time t; discrete sources (DiscreteDiagram) sample configurations and
    use oriented reachability to the top row.
    """
    targets = tuple(int(x) for x in targets)
    if not 1 <= len(targets) <= 12:
        raise ContactError("between 1 and 12 target sites are supported")
    if reps < 1:
        raise ContactError("reps must be >= 1")
    if isinstance(source, DiscreteDiagram):
        if t is not None and to_fraction(t) != source.t:
            raise ContactError("query time differs from the diagram's horizon")
        for x in targets:
            if abs(x) > source.radius:
                raise ContactError(f"target site {x} outside the diagram window")
        if eta0 not in ("all", None) and resolve_eta0_window(source.radius, eta0) != source.initial_sites:
            raise ContactError("diagram was built with a different initial condition")
        masks = sample_discrete_masks(source, reps, master, targets,
                                      stream_index=stream_index)
    elif isinstance(source, ContactParams):
        for x in targets:
            if abs(x) > source.radius:
                raise ContactError(f"target site {x} outside the window")
        masks = simulate_contact_masks(source, eta0, float(t), reps, master,
                                       targets, stream_index=stream_index)
    else:
        raise ContactError(f"unsupported source {type(source).__name__}")
    return _masks_to_joint(masks, targets)
