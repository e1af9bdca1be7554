"""Command-line entry point.

Subcommands: gen, descend, phase, twisted, classify, check. Data goes to
stdout (or ``--out``), diagnostics and the reproducibility header to
stderr. Exit codes: 0 success, 1 validation error, 2 numerical error.
"""

from __future__ import annotations

import argparse
import sys

from . import certify, graphs, harness, spectral
from .descent import DescentConfig, descend, random_init
from .energy import load_phases, save_phases
from .errors import NumericalError, ParseError

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2

GRAPH_TYPES = ("path", "cycle", "complete", "wsg", "bipartite-wsg", "er")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; 2 is reserved for numerical errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _grid(text: str) -> tuple[float, float, float]:
    try:
        lo, hi, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:step, got {text!r}") from None
    return lo, hi, step


def _add_descent_flags(p: argparse.ArgumentParser) -> None:
    d = DescentConfig()
    p.add_argument("--step", type=float, default=d.step, help="Euler step size")
    p.add_argument("--max-iters", type=int, default=d.max_iters, help="iteration cap")
    p.add_argument("--grad-tol", type=float, default=d.grad_tol, help="stop when ||grad|| <= this")
    p.add_argument("--align-tol", type=float, default=d.align_tol,
                   help="Global iff |r|/n >= 1 - align_tol")


def _config(args, trace_every: int = 0) -> DescentConfig:
    return DescentConfig(
        step=args.step,
        max_iters=args.max_iters,
        grad_tol=args.grad_tol,
        align_tol=args.align_tol,
        trace_every=trace_every,
    )


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = _Parser(prog="synclandscape", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate a graph edge list", formatter_class=fmt)
    gen.add_argument("--type", choices=GRAPH_TYPES, required=True, help="graph family")
    gen.add_argument("--n", type=int, required=True, help="vertex count (ring size for bipartite-wsg)")
    gen.add_argument("--k", type=int, default=1, help="neighbours per side for wsg types")
    gen.add_argument("--p", type=float, default=0.5, help="edge probability for er")
    gen.add_argument("--seed", type=int, default=0, help="seed for er")
    gen.add_argument("--out", default="-", help="output path, '-' for stdout")

    desc = sub.add_parser("descend", help="run gradient descent, emit the trace", formatter_class=fmt)
    desc.add_argument("--graph", required=True, help="edge-list file")
    desc.add_argument("--theta", default=None, help="initial phases file (default: random)")
    desc.add_argument("--seed", type=int, default=0, help="seed for random initialization")
    desc.add_argument("--trace-every", type=int, default=10, help="trace row interval")
    desc.add_argument("--final-out", default=None, help="write final phases here")
    desc.add_argument("--out", default="-", help="trace output path, '-' for stdout")
    _add_descent_flags(desc)

    ph = sub.add_parser("phase", help="Monte-Carlo phase-transition sweep", formatter_class=fmt)
    ph.add_argument("--n-min", type=int, default=5, help="smallest n")
    ph.add_argument("--n-max", type=int, default=100, help="largest n")
    ph.add_argument("--n-step", type=int, default=5, help="n increment")
    grid = ph.add_mutually_exclusive_group()
    grid.add_argument("--p-grid", type=_grid, default=None,
                      help="absolute p grid lo:hi:step (default 0:1:0.02)")
    grid.add_argument("--c-grid", type=_grid, default=None,
                      help="p = c*log(n)/n with c on grid lo:hi:step")
    ph.add_argument("--trials", type=int, default=50, help="instances per cell")
    ph.add_argument("--seed", type=int, default=0, help="base seed")
    ph.add_argument("--threads", type=int, default=1, help="worker processes")
    ph.add_argument("--fixed-graph", action="store_true",
                    help="reuse one graph per cell, vary only the initialization")
    ph.add_argument("--out", default="-", help="table output path, '-' for stdout")
    _add_descent_flags(ph)

    tw = sub.add_parser("twisted", help="twisted-state lambda2 curve for rings", formatter_class=fmt)
    tw.add_argument("--n", type=int, required=True, help="ring size")
    tw.add_argument("--k-min", type=int, default=1, help="smallest k")
    tw.add_argument("--k-max", type=int, default=None, help="largest k (default floor((n-1)/2))")
    tw.add_argument("--out", default="-", help="output path, '-' for stdout")

    cl = sub.add_parser("classify", help="classify a critical point", formatter_class=fmt)
    cl.add_argument("--graph", required=True, help="edge-list file")
    cl.add_argument("--theta", required=True, help="phases file")
    cl.add_argument("--grad-tol", type=float, default=1e-7, help="criticality tolerance")
    cl.add_argument("--eig-tol", type=float, default=1e-8, help="eigenvalue tolerance")

    ck = sub.add_parser("check", help="evaluate certificates", formatter_class=fmt)
    ck.add_argument("--graph", required=True, help="edge-list file")
    ck.add_argument("--theta", default=None, help="phases file (enables proposition, residual)")
    ck.add_argument("--p", type=float, default=None,
                    help="edge probability (enables deviation bound and RIP probe)")
    ck.add_argument("--gamma", type=float, default=1.0, help="gamma in the Bernstein radius")
    ck.add_argument("--delta", type=float, default=0.2, help="RIP tolerance")
    ck.add_argument("--samples", type=int, default=1000, help="RIP probe samples")
    ck.add_argument("--seed", type=int, default=0, help="RIP probe seed")
    return parser


def _header(args) -> None:
    params = {k: v for k, v in sorted(vars(args).items())}
    print("# synclandscape " + " ".join(f"{k}={v}" for k, v in params.items()), file=sys.stderr)


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _make_graph(args) -> graphs.WeightedGraph:
    t = args.type
    if t == "path":
        return graphs.gen_path(args.n)
    if t == "cycle":
        return graphs.gen_cycle(args.n)
    if t == "complete":
        return graphs.gen_complete(args.n)
    if t == "wsg":
        return graphs.gen_wsg(args.n, args.k)
    if t == "bipartite-wsg":
        return graphs.gen_bipartite_wsg(args.n, args.k)
    return graphs.gen_er(args.n, args.p, args.seed)


def cmd_gen(args) -> int:
    _emit(graphs.format_edge_list(_make_graph(args)), args.out)
    return EXIT_OK


def cmd_descend(args) -> int:
    g = graphs.load_edge_list(args.graph)
    init = load_phases(args.theta) if args.theta else random_init(g.n, args.seed)
    outcome, trace = descend(g, init, _config(args, trace_every=max(args.trace_every, 1)))
    _emit(trace.to_csv(), args.out)
    if args.final_out:
        save_phases(outcome.final_theta, args.final_out)
    print(
        f"# stopped_by={outcome.stopped_by.value} iterations={outcome.iterations} "
        f"classification={outcome.classification.value} energy={outcome.final_energy!r}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_phase(args) -> int:
    if args.n_step < 1 or args.n_min < 2 or args.n_max < args.n_min:
        raise ValueError("need 2 <= n-min <= n-max and n-step >= 1")
    n_values = tuple(range(args.n_min, args.n_max + 1, args.n_step))
    if args.c_grid is not None:
        rule, values = harness.PRule.LOG_SCALED, harness.frange(*args.c_grid)
    else:
        rule, values = harness.PRule.ABSOLUTE, harness.frange(*(args.p_grid or (0.0, 1.0, 0.02)))
    spec = harness.GridSpec(
        n_values=n_values,
        p_rule=rule,
        values=tuple(values),
        trials=args.trials,
        base_seed=args.seed,
        config=_config(args),
        fixed_graph=args.fixed_graph,
    )
    cells = harness.run_grid(spec, workers=args.threads)
    if args.out == "-":
        sys.stdout.write(harness.TABLE_HEADER + "\n")
        sys.stdout.write("".join(c.row() + "\n" for c in cells))
    else:
        harness.write_phase_table(cells, args.out)
        harness.write_reference_curves(n_values, args.out + ".curves")
    return EXIT_OK


def cmd_twisted(args) -> int:
    k_max = args.k_max if args.k_max is not None else (args.n - 1) // 2
    rows = spectral.wsg_lambda2_curve(args.n, args.k_min, k_max)
    text = "k,mu,lambda2_min\n" + "".join(f"{k},{mu!r},{lam!r}\n" for k, mu, lam in rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    g = graphs.load_edge_list(args.graph)
    theta = load_phases(args.theta)
    report = spectral.classify_critical(g, theta, grad_tol=args.grad_tol, eig_tol=args.eig_tol)
    sys.stdout.write("\n".join(report.lines()) + "\n")
    return EXIT_OK


def cmd_check(args) -> int:
    g = graphs.load_edge_list(args.graph)
    certs = [certify.check_theorem1(g)]
    if args.theta:
        theta = load_phases(args.theta)
        certs.append(certify.check_proposition(g, theta))
        residual = certify.first_order_residual(g, theta)
        certs.append(certify.Certificate("first_order_residual", True, {"grad_inf_norm": residual}))
    if args.p is not None:
        certs.append(certify.deviation_bound(g, args.p, args.gamma))
        certs.append(certify.rip_probe(g, args.p, args.delta, args.samples, args.seed))
    lines = [line for c in certs for line in c.lines()]
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "descend": cmd_descend,
    "phase": cmd_phase,
    "twisted": cmd_twisted,
    "classify": cmd_classify,
    "check": cmd_check,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _header(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
