"""Exact enumeration oracle and positive-association verification.

``enumerate_measure`` sums over all configurations in integer arithmetic
(numerators over one common denominator), so conditional joint laws and the
covariance checks built on them are exact: a Theorem-3/4 suite failure means
a real bug, not rounding.

Positive association of a joint law is checked against *all* pairs of
monotone Boolean functions on variable subsets up to a size cap (Dedekind
growth makes caps above 4 infeasible: 2, 3, 6, 20, 168 functions for
arities 0..4, then 7581).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .graph import MixedPlanarGraph
from .percolation import Configuration, coreachable, reachable


class VerifyError(ValueError):
    pass


class ConditioningNullError(VerifyError):
    """The conditioning event has probability zero; no conditional law exists."""


MAX_VARIABLES = 12
MAX_ACTIVE_EDGES = 24
MAX_ARITY = 4


@dataclass(frozen=True)
class OutcomeTable:
    """Exact joint weights of labelled binary variables.

    ``int_weights``/``total`` are integers over one common denominator, so
    the covariance checks downstream stay in integer arithmetic.
    """

    labels: tuple[str, ...]
    int_weights: dict[tuple[int, ...], int]
    total: int

    def __post_init__(self):
        if self.total <= 0 or any(w < 0 for w in self.int_weights.values()):
            raise VerifyError("weights must be nonnegative with positive total")
        if sum(self.int_weights.values()) != self.total:
            raise VerifyError("weights do not sum to the stated total")

    @property
    def weights(self) -> dict[tuple[int, ...], Fraction]:
        return {o: Fraction(w, self.total) for o, w in self.int_weights.items()}

    def probability(self, outcome: tuple[int, ...]) -> Fraction:
        return Fraction(self.int_weights.get(outcome, 0), self.total)

    def event(self, predicate) -> Fraction:
        num = sum(w for o, w in self.int_weights.items() if predicate(o))
        return Fraction(num, self.total)

    def marginal_ints(self, idxs: tuple[int, ...]) -> list[int]:
        """Integer weights of the sub-collection, indexed by packed outcome."""
        out = [0] * (1 << len(idxs))
        for o, wt in self.int_weights.items():
            key = 0
            for b, i in enumerate(idxs):
                key |= o[i] << b
            out[key] += wt
        return out


@dataclass(frozen=True)
class JointDistribution(OutcomeTable):
    """OutcomeTable capped at 12 variables: the exact verification oracle type."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.labels) > MAX_VARIABLES:
            raise VerifyError(f"more than {MAX_VARIABLES} variables")


class ConfigContext:
    """Per-configuration lazy cache of reachability sets."""

    __slots__ = ("g", "config", "_reach", "_coreach")

    def __init__(self, g: MixedPlanarGraph, config: Configuration):
        self.g = g
        self.config = config
        self._reach = {}
        self._coreach = {}

    def reach(self, sources: frozenset) -> frozenset:
        got = self._reach.get(sources)
        if got is None:
            got = self._reach[sources] = reachable(self.g, self.config, sources)
        return got

    def coreach(self, targets: frozenset) -> frozenset:
        got = self._coreach.get(targets)
        if got is None:
            got = self._coreach[targets] = coreachable(self.g, self.config, targets)
        return got


def enumerate_outcomes(g: MixedPlanarGraph, condition, variables,
                       *, max_active: int = MAX_ACTIVE_EDGES) -> OutcomeTable:
    """Exact conditional joint weights of binary statistics (no variable cap).

    ``variables`` is a list of (label, function) pairs where the function
    maps a ConfigContext to 0/1; ``condition`` is a ConfigContext predicate
    or None for the unconditional law.  Sums over all configurations with
    nonzero weight (edges with p in {0,1} are frozen, not enumerated).
    """
    labels = tuple(label for label, _ in variables)
    funcs = [f for _, f in variables]
    m = len(g.edges)
    active = [i for i, e in enumerate(g.edges) if 0 < e.p < 1]
    if len(active) > max_active:
        raise VerifyError(
            f"enumeration guard: {len(active)} non-frozen edges > {max_active}")
    base = 0
    for i, e in enumerate(g.edges):
        if e.p == 1:
            base |= 1 << i
    # integer weights: for active edge with p = a/b, open contributes a and
    # closed contributes b - a, over the common denominator prod(b)
    opens = []
    closeds = []
    for i in active:
        p = g.edges[i].p
        opens.append(p.numerator)
        closeds.append(p.denominator - p.numerator)
    n_active = len(active)
    weights: dict[tuple[int, ...], int] = {}
    total = 0
    for k in range(1 << n_active):
        bits = base
        wt = 1
        for j in range(n_active):
            if (k >> j) & 1:
                bits |= 1 << active[j]
                wt *= opens[j]
            else:
                wt *= closeds[j]
        ctx = ConfigContext(g, Configuration(bits, m))
        if condition is not None and not condition(ctx):
            continue
        outcome = tuple(int(bool(f(ctx))) for f in funcs)
        weights[outcome] = weights.get(outcome, 0) + wt
        total += wt
    if total == 0:
        raise ConditioningNullError("conditioning event has probability zero")
    return OutcomeTable(labels, weights, total)


def enumerate_measure(g: MixedPlanarGraph, condition, variables,
                      *, max_active: int = MAX_ACTIVE_EDGES) -> JointDistribution:
    """Exact conditional joint law of at most 12 binary statistics."""
    table = enumerate_outcomes(g, condition, variables, max_active=max_active)
    return JointDistribution(table.labels, table.int_weights, table.total)


_MONOTONE_CACHE: dict[int, tuple[int, ...]] = {}


def monotone_functions(k: int) -> tuple[int, ...]:
    """All monotone Boolean functions of arity k, as 2^k-bit truth tables."""
    if not 0 <= k <= MAX_ARITY:
        raise VerifyError(f"arity must be in 0..{MAX_ARITY}")
    if k not in _MONOTONE_CACHE:
        n_inputs = 1 << k
        tables = []
        for tt in range(1 << n_inputs):
            ok = True
            for v in range(n_inputs):
                if not (tt >> v) & 1:
                    continue
                for i in range(k):
                    if not (v >> i) & 1 and not (tt >> (v | (1 << i))) & 1:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                tables.append(tt)
        _MONOTONE_CACHE[k] = tuple(tables)
    return _MONOTONE_CACHE[k]


@dataclass(frozen=True)
class AssociationReport:
    minimum: Fraction
    argmin: str
    pairs_tested: int
    subsets_tested: int
    verdict: bool

    def summary(self) -> str:
        state = "pass" if self.verdict else "VIOLATION"
        return (f"{state}: min covariance {self.minimum} over "
                f"{self.pairs_tested} monotone pairs on {self.subsets_tested} subsets "
                f"(argmin {self.argmin})")


def check_positive_association(dist: OutcomeTable,
                               k_max: int = 3) -> AssociationReport:
    """Minimum covariance over all ordered pairs of monotone functions.

    Exact: covariances are integers over total**2.  Also asserts the
    increasing/decreasing complement identity Cov(f, 1-g) = -Cov(f, g) on
    one pair per subset.
    """
    if k_max > MAX_ARITY:
        raise VerifyError(f"subset-size cap above {MAX_ARITY} is infeasible")
    n = len(dist.labels)
    S = dist.total
    best_num = None
    best_desc = ""
    pairs = 0
    subsets = 0
    for k in range(1, min(k_max, n) + 1):
        tables = monotone_functions(k)
        n_outcomes = 1 << k
        for idxs in combinations(range(n), k):
            subsets += 1
            w = dist.marginal_ints(idxs)
            sums = []
            for tt in tables:
                s = 0
                for v in range(n_outcomes):
                    if (tt >> v) & 1:
                        s += w[v]
                sums.append(s)
            inter_cache = {}
            for a in range(len(tables)):
                fa = tables[a]
                for b in range(a, len(tables)):
                    fb = tables[b]
                    key = fa & fb
                    s_ab = inter_cache.get(key)
                    if s_ab is None:
                        s_ab = 0
                        for v in range(n_outcomes):
                            if (key >> v) & 1:
                                s_ab += w[v]
                        inter_cache[key] = s_ab
                    cov_num = S * s_ab - sums[a] * sums[b]
                    pairs += 2 if a != b else 1
                    if best_num is None or cov_num < best_num:
                        best_num = cov_num
                        best_desc = (f"subset {tuple(dist.labels[i] for i in idxs)}, "
                                     f"f={fa:0{n_outcomes}b}, g={fb:0{n_outcomes}b}")
            # complement identity spot check on the last pair
            s_f_not_g = sums[a] - inter_cache[fa & fb]
            assert S * s_f_not_g - sums[a] * (S - sums[b]) == -(S * inter_cache[fa & fb] - sums[a] * sums[b])
    if best_num is None:
        return AssociationReport(Fraction(0), "no variable subsets", 0, 0, True)
    return AssociationReport(Fraction(best_num, S * S), best_desc, pairs, subsets,
                             best_num >= 0)


# -- theorem harnesses ---------------------------------------------------------

def _edge_statistic(g, i, kind, S, T):
    e = g.edges[i]

    if kind == "X":
        def stat(ctx):
            if not ctx.config.is_open(i):
                return 0
            srcs = ctx.reach(S)
            return int(e.tail in srcs or (not e.oriented and e.head in srcs))
    else:
        def stat(ctx):  # the statistic is 1 - Y_e
            if not ctx.config.is_open(i):
                return 1
            tgts = ctx.coreach(T)
            return int(not (e.head in tgts or (not e.oriented and e.tail in tgts)))
    return stat


def verify_theorem3(g: MixedPlanarGraph, S, T, edges=None,
                    k_max: int = 3) -> AssociationReport:
    """Exact positive-association check of {X_e} + {1-Y_e} given {S -/-> T}.

    X_e indicates that e lies on an open path beginning in S (e open with
    its entry endpoint reachable from S), Y_e that e lies on an open path
    ending in T.  Planarity is not required.
    """
    S = frozenset(S)
    T = frozenset(T)
    if not S or not T or S & T:
        raise VerifyError("S and T must be nonempty and disjoint")
    if edges is None:
        edges = range(len(g.edges))
    variables = []
    for i in edges:
        variables.append((f"X[{g.edges[i].id}]", _edge_statistic(g, i, "X", S, T)))
        variables.append((f"notY[{g.edges[i].id}]", _edge_statistic(g, i, "Y", S, T)))

    def no_connection(ctx):
        return not (ctx.reach(S) & T)

    dist = enumerate_outcomes(g, no_connection, variables)
    return check_positive_association(dist, k_max)


def theorem4_statistics(g: MixedPlanarGraph, cycle=None):
    """(condition, variables) for the boundary-cycle indicator collection."""
    cycle = cycle or g.boundary
    if cycle is None:
        raise VerifyError("theorem-4 statistics need a boundary cycle")
    U = frozenset(cycle.U)
    W = frozenset(cycle.W)

    def connected(ctx):
        return bool(ctx.reach(U) & W)

    variables = []
    for x in cycle.block_vertices("a"):
        def stat(ctx, x=x):
            return int(x in ctx.reach(U))
        variables.append((f"to[{x}]", stat))
    for x in cycle.block_vertices("b"):
        def stat(ctx, x=x):
            return int(x not in ctx.reach(U))
        variables.append((f"not_to[{x}]", stat))
    return connected, variables


def verify_theorem4(g: MixedPlanarGraph, cycle=None,
                    k_max: int = 3) -> AssociationReport:
    """Exact check: given {U -> W}, the a/b indicator collection is associated."""
    connected, variables = theorem4_statistics(g, cycle)
    dist = enumerate_outcomes(g, connected, variables)
    return check_positive_association(dist, k_max)


# -- conditional healthy-blocks inequality -------------------------------------

@dataclass(frozen=True)
class InequalityReport:
    lhs: float
    rhs: float
    se: float
    verdict: bool
    exact: bool
    detail: dict

    def summary(self) -> str:
        state = "pass" if self.verdict else "VIOLATION"
        mode = "exact" if self.exact else "monte-carlo"
        return (f"{state} ({mode}): LHS={self.lhs!r} RHS={self.rhs!r} "
                f"SE={self.se!r}")


def conjecture1_exact(diagram, n: int, m: int) -> InequalityReport:
    """Exact Eq.-(1) check on one discrete diagram, conditioned on eta(0)=1.

    LHS = P(left n sites and right m sites all healthy | origin infected) and
    RHS is the product of the two one-sided probabilities, in exact rationals.
    """
    g = diagram.graph
    top = diagram.top_vertex
    U = frozenset(diagram.initial_vertices)
    if n > diagram.radius or m > diagram.radius:
        raise VerifyError("diagram window smaller than the requested blocks")

    def origin_infected(ctx):
        return top(0) in ctx.reach(U)

    variables = []
    for x in list(range(-n, 0)) + list(range(1, m + 1)):
        def stat(ctx, x=x):
            return int(top(x) in ctx.reach(U))
        variables.append((f"eta[{x}]", stat))
    dist = enumerate_outcomes(g, origin_infected, variables)
    left_idx = [i for i, lbl in enumerate(dist.labels) if int(lbl[4:-1]) < 0]
    right_idx = [i for i, lbl in enumerate(dist.labels) if int(lbl[4:-1]) > 0]
    p_both = dist.event(lambda o: not any(o[i] for i in left_idx + right_idx))
    p_left = dist.event(lambda o: not any(o[i] for i in left_idx))
    p_right = dist.event(lambda o: not any(o[i] for i in right_idx))
    rhs = p_left * p_right
    return InequalityReport(float(p_both), float(rhs), 0.0, p_both <= rhs, True,
                            {"lhs_exact": p_both, "rhs_exact": rhs,
                             "p_left": p_left, "p_right": p_right})


def conjecture1_montecarlo(masks, n: int, m: int,
                           layout_n: int | None = None) -> InequalityReport:
    """Healthy-blocks inequality verdict from simulation masks (origin bit first).

    ``masks`` packs the final states with bit 0 = site 0, bits 1..layout_n =
    sites -1..-layout_n, then sites 1, 2, ... upward; ``layout_n`` defaults
    to n, and n <= layout_n lets one simulation serve several block sizes.
    The verdict allows LHS <= RHS + 3*SE where SE pools the binomial errors
    of both sides.
    """
    if layout_n is None:
        layout_n = n
    if n > layout_n:
        raise VerifyError("mask layout holds fewer negative sites than n")
    left_mask = ((1 << n) - 1) << 1
    right_mask = ((1 << m) - 1) << (1 + layout_n)
    n_cond = n_a = n_b = n_ab = 0
    for v in masks:
        v = int(v)
        if not v & 1:
            continue
        n_cond += 1
        a = not (v & left_mask)
        b = not (v & right_mask)
        n_a += a
        n_b += b
        n_ab += a and b
    if n_cond == 0:
        raise ConditioningNullError("conditioning event eta_t(0)=1 never observed")
    p_a = n_a / n_cond
    p_b = n_b / n_cond
    lhs = n_ab / n_cond
    rhs = p_a * p_b
    se_lhs = math.sqrt(lhs * (1 - lhs) / n_cond)
    se_rhs = math.sqrt((p_a * p_a * p_b * (1 - p_b) + p_b * p_b * p_a * (1 - p_a))
                       / n_cond)
    se = math.sqrt(se_lhs ** 2 + se_rhs ** 2)
    return InequalityReport(lhs, rhs, se, lhs <= rhs + 3 * se, False,
                            {"n_conditioned": n_cond, "p_left": p_a, "p_right": p_b,
                             "se_lhs": se_lhs, "se_rhs": se_rhs})
