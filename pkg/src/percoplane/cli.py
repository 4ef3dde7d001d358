"""Command-line entry point.

One binary, subcommand style; all randomness flows from one explicit master
seed through documented counter streams, so identical arguments and seed
give byte-identical reports.  Exit codes: 0 = pass, 1 = verification
failure, 2 = usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys

from . import dual_convention, rng
from .contact import ContactError, ContactParams, build_discrete, estimate_joint
from .dual import build_dual, dual_to_text, duality_scan, pinned_convention
from .graph import GraphError, normalize
from .graphspec import graph_from_file, graph_to_text
from .mcmc import ChainError, default_burn_in, init_chain, run_chain
from .percolation import all_open
from .verify import (
    ConditioningNullError,
    VerifyError,
    conjecture1_exact,
    conjecture1_montecarlo,
    enumerate_measure,
    verify_theorem3,
    verify_theorem4,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class Report:
    """Deterministic key-value report plus optional CSV tables."""

    def __init__(self, command: str, args: argparse.Namespace):
        self.lines: list[tuple[str, object]] = [("command", command)]
        for key in sorted(vars(args)):
            if key in ("func", "out"):
                continue
            self.lines.append((f"arg.{key}", getattr(args, key)))
        self.tables: dict[str, tuple[list[str], list[list]]] = {}

    def add(self, key: str, value):
        self.lines.append((key, value))

    def table(self, name: str, header: list[str], rows: list[list]):
        self.tables[name] = (header, rows)

    def text(self) -> str:
        return "".join(f"{k}: {v}\n" for k, v in self.lines)

    def emit(self, out_dir: str | None):
        sys.stdout.write(self.text())
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
            with open(os.path.join(out_dir, "report.txt"), "w", encoding="utf-8") as fh:
                fh.write(self.text())
            for name, (header, rows) in self.tables.items():
                with open(os.path.join(out_dir, f"{name}.csv"), "w", encoding="utf-8",
                          newline="") as fh:
                    writer = csv.writer(fh)
                    writer.writerow(header)
                    writer.writerows(rows)
        else:
            for name, (header, rows) in self.tables.items():
                sys.stdout.write(f"[{name}]\n")
                buf = io.StringIO()
                writer = csv.writer(buf)
                writer.writerow(header)
                writer.writerows(rows)
                sys.stdout.write(buf.getvalue())


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def cmd_enumerate(args) -> int:
    g = graph_from_file(args.spec, require_planar=not args.no_planar)
    report = Report("enumerate", args)
    report.add("vertices", len(g.vertices))
    report.add("edges", len(g.edges))
    report.add("underlying_edges", g.n_underlying)
    if g.planar_checked:
        report.add("faces", len(g.faces))
        report.add("euler_check", "ok")
    rows = []
    if g.boundary is not None:
        U = g.boundary.U
        dist = enumerate_measure(
            g, None, [("hit", lambda ctx: int(bool(ctx.reach(frozenset(U))
                                                   & g.boundary.W)))])
        p_uw = dist.probability((1,))
        report.add("P(U->W)", p_uw)
        for x in g.boundary.order:
            d = enumerate_measure(
                g, None, [("hit", lambda ctx, x=x: int(x in ctx.reach(frozenset(U))))])
            rows.append([x, str(d.probability((1,)))])
        report.table("connection", ["vertex", "P(U->x)"], rows)
    report.emit(args.out)
    return EXIT_PASS


def cmd_dual(args) -> int:
    g = normalize(graph_from_file(args.spec))
    H = build_dual(g)
    report = Report("dual", args)
    report.add("convention.cross_left_to_right", H.convention.cross_left_to_right)
    report.add("convention.read_clockwise", H.convention.read_clockwise)
    report.add("convention.s_arc_from_u", H.convention.s_arc_from_u)
    report.add("dual_vertices", len(H.vertices))
    report.add("dual_edges", H.n_edges)
    report.add("boundary_vertices",
               sum(1 for v in H.vertices if v.kind == "boundary"))
    report.emit(args.out)
    if args.out:
        with open(os.path.join(args.out, "dual.graph"), "w", encoding="utf-8") as fh:
            fh.write(dual_to_text(H))
        with open(os.path.join(args.out, "normalized.graph"), "w", encoding="utf-8") as fh:
            fh.write(graph_to_text(g))
    else:
        sys.stdout.write(dual_to_text(H))
    return EXIT_PASS


def cmd_sample_mcmc(args) -> int:
    g = normalize(graph_from_file(args.spec))
    (u,), (w,) = g.boundary.U, g.boundary.W
    burn_in = min(default_burn_in(g), args.steps // 2) if args.burn_in is None \
        else args.burn_in
    state = init_chain(g, u, w, all_open(g))
    stream = rng.Stream(args.seed, (rng.DOMAIN_CHAIN << 32) | 0)
    indicator_vertices = (g.boundary.block_vertices("a")
                          + g.boundary.block_vertices("w")
                          + g.boundary.block_vertices("b"))
    rows = []
    for n, cfg, eta in run_chain(state, args.steps, burn_in, args.thin, stream,
                                 indicator_vertices):
        rows.append([n, cfg.to_hex()] + [eta[x] for x in indicator_vertices])
    report = Report("sample-mcmc", args)
    report.add("burn_in_used", burn_in)
    report.add("u", u)
    report.add("w", w)
    report.add("samples", len(rows))
    report.table("samples", ["step", "config_hex"]
                 + [f"eta[{x}]" for x in indicator_vertices], rows)
    report.emit(args.out)
    return EXIT_PASS


def cmd_simulate_contact(args) -> int:
    params = ContactParams(lam=args.lam, delta=args.delta, radius=args.window)
    targets = _int_list(args.targets)
    eta0 = "all" if args.eta0 == "all" else _int_list(args.eta0)
    if args.N is None:
        joint = estimate_joint(params, targets, args.t, args.reps, args.seed,
                               eta0=eta0)
        source = "continuous"
    else:
        diagram = build_discrete(params, n=args.window, N=args.N, t=args.t,
                                 eta0=eta0)
        joint = estimate_joint(diagram, targets, None, args.reps, args.seed,
                               eta0=eta0)
        source = f"discrete(N={args.N})"
    report = Report("simulate-contact", args)
    report.add("source", source)
    rows = [["".join(map(str, outcome)), count, f"{p:.6g}", f"{se:.3g}"]
            for outcome, count, p, se in joint.rows()]
    report.add("outcomes", len(rows))
    report.table("joint", ["outcome", "count", "probability", "stderr"], rows)
    report.emit(args.out)
    return EXIT_PASS


def cmd_verify_theorem3(args) -> int:
    g = graph_from_file(args.spec, require_planar=False)
    edges = _int_list(args.edges) if args.edges else None
    if edges is not None:
        edges = [g.edge_index_by_id(eid) for eid in edges]
    rep = verify_theorem3(g, _int_list(args.S), _int_list(args.T), edges,
                          k_max=args.kmax)
    report = Report("verify-theorem3", args)
    report.add("pairs_tested", rep.pairs_tested)
    report.add("subsets_tested", rep.subsets_tested)
    report.add("min_covariance", rep.minimum)
    report.add("argmin", rep.argmin)
    report.add("verdict", "pass" if rep.verdict else "fail")
    report.emit(args.out)
    return EXIT_PASS if rep.verdict else EXIT_FAIL


def cmd_verify_theorem4(args) -> int:
    g = graph_from_file(args.spec)
    rep = verify_theorem4(g, k_max=args.kmax)
    report = Report("verify-theorem4", args)
    report.add("pairs_tested", rep.pairs_tested)
    report.add("subsets_tested", rep.subsets_tested)
    report.add("min_covariance", rep.minimum)
    report.add("argmin", rep.argmin)
    report.add("verdict", "pass" if rep.verdict else "fail")
    report.emit(args.out)
    return EXIT_PASS if rep.verdict else EXIT_FAIL


def cmd_verify_conjecture1(args) -> int:
    report = Report("verify-conjecture1", args)
    if args.mode == "exact-discrete":
        if args.N is None:
            raise VerifyError("exact-discrete mode needs --N")
        window = args.window or max(args.n, args.m)
        params = ContactParams(lam=args.lam, delta=args.delta, radius=window)
        diagram = build_discrete(params, n=window, N=args.N, t=args.t)
        rep = conjecture1_exact(diagram, args.n, args.m)
        report.add("lhs", rep.detail["lhs_exact"])
        report.add("rhs", rep.detail["rhs_exact"])
        report.add("se", 0)
    else:
        window = args.window or 50
        params = ContactParams(lam=args.lam, delta=args.delta, radius=window)
        targets = [0] + [-x for x in range(1, args.n + 1)] \
            + list(range(1, args.m + 1))
        from .contact import simulate_contact_masks

        masks = simulate_contact_masks(params, "all", args.t, args.reps,
                                       args.seed, targets)
        rep = conjecture1_montecarlo(masks, args.n, args.m)
        report.add("lhs", repr(rep.lhs))
        report.add("rhs", repr(rep.rhs))
        report.add("se", repr(rep.se))
        report.add("n_conditioned", rep.detail["n_conditioned"])
    report.add("verdict", "pass" if rep.verdict else "fail")
    report.table("inequality",
                 ["mode", "lambda", "delta", "t", "n", "m", "lhs", "rhs", "se", "verdict"],
                 [[args.mode, args.lam, args.delta, args.t, args.n, args.m,
                   repr(rep.lhs), repr(rep.rhs), repr(rep.se),
                   "pass" if rep.verdict else "fail"]])
    report.emit(args.out)
    return EXIT_PASS if rep.verdict else EXIT_FAIL


def cmd_verify_duality(args) -> int:
    g = normalize(graph_from_file(args.spec))
    scan = duality_scan(g, pinned_convention())
    report = Report("verify-duality", args)
    conv = pinned_convention()
    report.add("convention.cross_left_to_right", conv.cross_left_to_right)
    report.add("convention.read_clockwise", conv.read_clockwise)
    report.add("convention.s_arc_from_u", conv.s_arc_from_u)
    report.add("pinned_verdict", dual_convention.REALIZED_VERDICT)
    report.add("configurations", scan["configurations"])
    report.add("boundary_vertices_tested", scan["xs"])
    report.add("count.holds_as_stated", scan["counts"]["holds-as-stated"])
    report.add("count.holds_complemented", scan["counts"]["holds-complemented"])
    report.add("verdict", scan["verdict"])
    report.emit(args.out)
    consistent = scan["verdict"] == dual_convention.REALIZED_VERDICT
    return EXIT_PASS if consistent else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="percoplane",
        description="Percolation on planar mixed graphs: duality, conditioned "
                    "resampling chains, contact-process discretization and "
                    "positive-association verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", help="directory for report.txt and CSV tables")

    p = sub.add_parser("enumerate", help="validate a graph spec and enumerate exactly")
    p.add_argument("--spec", required=True)
    p.add_argument("--no-planar", action="store_true",
                   help="skip the straight-line crossing check")
    add_out(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("dual", help="normalize a graph and construct its dual")
    p.add_argument("--spec", required=True)
    add_out(p)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("sample-mcmc", help="run the conditioned resampling chain")
    p.add_argument("--spec", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--thin", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)
    add_out(p)
    p.set_defaults(func=cmd_sample_mcmc)

    p = sub.add_parser("simulate-contact", help="estimate joint infection laws")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--targets", default="0")
    p.add_argument("--eta0", default="all")
    p.add_argument("--N", type=int, default=None,
                   help="discretize with this time resolution instead of "
                        "simulating in continuous time")
    add_out(p)
    p.set_defaults(func=cmd_simulate_contact)

    v = sub.add_parser("verify", help="run a verification suite")
    vsub = v.add_subparsers(dest="suite", required=True)

    p = vsub.add_parser("theorem3", help="exact conditional association, mixed graphs")
    p.add_argument("--spec", required=True)
    p.add_argument("--S", required=True, help="source vertex ids, e.g. '0,1'")
    p.add_argument("--T", required=True, help="target vertex ids")
    p.add_argument("--edges", default=None, help="edge ids for the X/Y statistics")
    p.add_argument("--kmax", type=int, default=3)
    add_out(p)
    p.set_defaults(func=cmd_verify_theorem3)

    p = vsub.add_parser("theorem4", help="exact boundary-cycle association")
    p.add_argument("--spec", required=True)
    p.add_argument("--kmax", type=int, default=3)
    add_out(p)
    p.set_defaults(func=cmd_verify_theorem4)

    p = vsub.add_parser("conjecture1", help="the conditional healthy-blocks inequality")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--reps", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["monte-carlo", "exact-discrete"],
                   default="monte-carlo")
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--window", type=int, default=None)
    add_out(p)
    p.set_defaults(func=cmd_verify_conjecture1)

    p = vsub.add_parser("duality", help="exhaustive primal/dual relation scan")
    p.add_argument("--spec", required=True)
    add_out(p)
    p.set_defaults(func=cmd_verify_duality)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (GraphError, ContactError, VerifyError, ChainError, ConditioningNullError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
