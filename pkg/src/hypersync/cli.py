"""Command-line entry point.

Exit codes: 0 success (a diverging simulation still exits 0), 1 usage error,
2 input parse/validation error, 3 runtime failure.
"""
from __future__ import annotations

import argparse
import csv
import sys
from typing import Sequence

import numpy as np

from . import analysis, presets
from .dynamics import MapSpec, NonFinite, eval_fraction, simulate_continuous, simulate_discrete
from .formats import ParseError, RunConfig, export_trajectory_csv, random_initial_state, read_edge_list
from .hypergraph import HypergraphError, is_connected
from .operators import build_Bm, build_C, build_Lw, clique_laplacian
from .spectra import NoConvergence, SpectrumError, eig_sym, nonzero_extremes, operator_norm

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_RUNTIME = 0, 1, 2, 3

CRITERIA = (
    "global-discrete",
    "global-discrete-feqg",
    "eigenvalue-interval",
    "coupling-interval",
    "lyapunov-discrete",
    "continuous-local",
    "continuous-global",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _number(text: str) -> float:
    try:
        return eval_fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _load_graph(args):
    if not args.edges:
        raise UsageError("--edges FILE is required")
    parsed = read_edge_list(args.edges)
    return parsed.hypergraph, parsed.dropped_singletons


def _operator(G, name: str, m: int | None = None) -> np.ndarray:
    if name == "lw":
        return build_Lw(G)
    if name == "c":
        return build_C(G)
    if name == "clique":
        return clique_laplacian(G)
    if name == "bm":
        return build_Bm(G, m if m is not None else G.rank)
    raise UsageError(f"unknown operator {name!r}")


def _emit(lines, out=None) -> None:
    out = out or sys.stdout
    for line in lines:
        print(line, file=out)


def cmd_build_matrix(args) -> int:
    G, dropped = _load_graph(args)
    M = _operator(G, args.operator, args.m)
    fh = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        for row in M:
            w.writerow([repr(float(v)) for v in row])
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


def cmd_spectrum(args) -> int:
    G, dropped = _load_graph(args)
    M = args.shift * np.eye(G.n_vertices) + args.scale * _operator(G, args.operator, args.m)
    spec = eig_sym(M)
    lines = [f"n={G.n_vertices}", f"dropped_singletons={dropped}", f"operator_norm={operator_norm(spec)!r}"]
    lines += [f"eigenvalue.{i}={float(v)!r}" for i, v in enumerate(spec.eigenvalues)]
    if args.vectors:
        lines += [
            f"eigenvector.{i}=" + " ".join(repr(float(x)) for x in spec.eigenvectors[:, i])
            for i in range(len(spec))
        ]
    _emit(lines)
    return EXIT_OK


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    for key in ("eps", "f", "g", "k", "dt", "t_max", "max_steps", "seed", "sample_every", "operator", "edges"):
        v = getattr(args, key, None)
        if v is not None:
            setattr(cfg, key, v)
    if args.continuous:
        cfg.mode = "continuous"
    elif args.discrete:
        cfg.mode = "discrete"
    if args.out:
        cfg.output = args.out
    return cfg


def cmd_simulate(args) -> int:
    cfg = _config_from_args(args)
    args.edges = cfg.edges
    G, dropped = _load_graph(args)
    M = _operator(G, cfg.operator)
    f, g = MapSpec.parse(cfg.f), MapSpec.parse(cfg.g)
    x0 = random_initial_state(G.n_vertices, cfg.k, cfg.seed, cfg.x0_low, cfg.x0_high)
    if cfg.mode == "continuous":
        traj = simulate_continuous(x0, f, g, M, cfg.dt, cfg.t_max, cfg.conv_tol, cfg.div_tol, cfg.sample_every)
    else:
        traj = simulate_discrete(
            x0, f, g, float(cfg.eps), M, cfg.max_steps, cfg.conv_tol, cfg.div_tol, cfg.sample_every
        )
    if cfg.output:
        export_trajectory_csv(traj, cfg.output)
    _emit([
        f"mode={cfg.mode}",
        f"n={G.n_vertices}",
        f"termination={traj.termination}",
        f"steps={traj.steps}",
        f"final_sync_error={traj.final_sync_error!r}",
    ] + ([f"csv={cfg.output}"] if cfg.output else []))
    return EXIT_OK


def _graph_spectrum(args):
    G, _ = _load_graph(args)
    Lw = build_Lw(G)
    return G, Lw, eig_sym(Lw)


def cmd_check(args) -> int:
    crit = args.criterion
    f = MapSpec.parse(args.f) if args.f else None
    g = MapSpec.parse(args.g) if args.g else None
    if crit == "global-discrete":
        if args.lw_norm is not None:
            norm = args.lw_norm
        else:
            norm = operator_norm(_graph_spectrum(args)[2])
        k_f = args.k_f if args.k_f is not None else (f.lipschitz_constant() if f else None)
        k_g = args.k_g if args.k_g is not None else (g.lipschitz_constant() if g else None)
        if k_f is None or k_g is None or args.eps is None:
            raise UsageError("global-discrete needs --eps and --k-f/--f and --k-g/--g")
        report = analysis.global_discrete(k_f, k_g, args.eps, norm)
    elif crit == "global-discrete-feqg":
        _, Lw, _ = _graph_spectrum(args)
        k_f = args.k_f if args.k_f is not None else (f.lipschitz_constant() if f else None)
        if k_f is None or args.eps is None:
            raise UsageError("global-discrete-feqg needs --eps and --k-f or --f")
        report = analysis.global_discrete_feqg(k_f, args.eps, Lw)
    elif crit in ("eigenvalue-interval", "coupling-interval"):
        _, _, spec = _graph_spectrum(args)
        if args.sigma is None:
            if f is None:
                raise UsageError(f"{crit} needs --sigma or --f (to estimate sigma)")
            args.sigma = analysis.sigma_estimate(args.s0, f, g)
        if crit == "eigenvalue-interval":
            if args.eps is None:
                raise UsageError("eigenvalue-interval needs --eps")
            report = analysis.eigenvalue_interval_check(args.sigma, args.eps, spec)
        else:
            lo_abs, hi_abs = nonzero_extremes(spec)
            iv = analysis.coupling_interval(args.sigma, lo_abs, hi_abs)
            ok = not iv.empty and iv.hi > 0
            if args.eps is not None:
                ok = ok and args.eps in iv
            margins = [iv.hi - iv.lo]
            if args.eps is not None:
                margins += [args.eps - iv.lo, iv.hi - args.eps]
            report = analysis.CriterionReport(
                "coupling-interval",
                analysis.GUARANTEED if ok else analysis.NOT_GUARANTEED,
                min(margins),
                {"sigma": args.sigma},
                {"eps_lo": iv.lo, "eps_hi": iv.hi, "empty": iv.empty},
            )
    elif crit == "lyapunov-discrete":
        _, _, spec = _graph_spectrum(args)
        if f is None or args.eps is None:
            raise UsageError("lyapunov-discrete needs --f, --eps (and optionally --g)")
        g = g or f
        s = np.atleast_1d(args.s0)
        report = analysis.lyapunov_discrete_check(g.jacobian(s), f.jacobian(s), args.eps, spec)
    elif crit == "continuous-local":
        _, _, spec = _graph_spectrum(args)
        if f is None or g is None or args.b is None:
            raise UsageError("continuous-local needs --f, --g and --b")
        s = np.atleast_1d(args.s0)
        report = analysis.continuous_local_check(f.jacobian(s), g.jacobian(s), spec, args.b)
    else:
        _, Lw, _ = _graph_spectrum(args)
        if f is None:
            raise UsageError("continuous-global needs --f")
        report = analysis.continuous_global_check(f, Lw)
    _emit(report.lines())
    return EXIT_OK


def cmd_bounds(args) -> int:
    G, _ = _load_graph(args)
    if not is_connected(G):
        raise HypergraphError("bounds need a connected hypergraph")
    spec = analysis.laplacian_spectrum(G)
    d = analysis.diameter_bound(G, spec)
    lines = [f"diameter.bound={d.bound!r}", f"diameter.actual={int(d.actual)}", f"diameter.holds={str(d.holds).lower()}"]
    if G.is_uniform():
        b = analysis.uniform_upper_bound_bm(G, spec)
        lines += [f"bm.bound={b.bound!r}", f"bm.lambda_max={b.actual!r}", f"bm.holds={str(b.holds).lower()}"]
        if args.sigma is not None:
            w = analysis.structural_coupling_window(G, args.sigma)
            lines += [f"window.lo={w.interval.lo!r}", f"window.hi={w.interval.hi!r}", f"window.empty={str(w.empty).lower()}"]
    else:
        lines.append("bm.skipped=not_uniform")
    _emit(lines)
    return EXIT_OK


def cmd_preset(args) -> int:
    _emit(presets.PRESETS[args.name](seed=args.seed, out_dir=args.out_dir))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hypersync", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def graph_args(sp):
        sp.add_argument("--edges", help="edge-list file")
        sp.add_argument("--operator", choices=("lw", "c", "bm", "clique"), default=None)
        sp.add_argument("--m", type=int, help="edge size for --operator bm")

    sp = sub.add_parser("build-matrix", help="write an operator as CSV")
    graph_args(sp)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_build_matrix, operator="lw")

    sp = sub.add_parser("spectrum", help="eigenvalues of shift*I + scale*operator")
    graph_args(sp)
    sp.add_argument("--shift", type=_number, default=0.0)
    sp.add_argument("--scale", type=_number, default=1.0)
    sp.add_argument("--vectors", action="store_true")
    sp.set_defaults(func=cmd_spectrum, operator="lw")

    sp = sub.add_parser("simulate", help="run the coupled dynamics")
    graph_args(sp)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--discrete", action="store_true")
    mode.add_argument("--continuous", action="store_true")
    sp.add_argument("--config", help="RunConfig key=value file")
    sp.add_argument("--eps", type=_number)
    sp.add_argument("--f")
    sp.add_argument("--g")
    sp.add_argument("--k", type=int)
    sp.add_argument("--dt", type=_number)
    sp.add_argument("--t-max", dest="t_max", type=_number)
    sp.add_argument("--max-steps", dest="max_steps", type=int)
    sp.add_argument("--sample-every", dest="sample_every", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out", help="trajectory CSV path")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("check", help="evaluate a synchronization criterion")
    sp.add_argument("--criterion", choices=CRITERIA, required=True)
    sp.add_argument("--edges")
    sp.add_argument("--eps", type=_number)
    sp.add_argument("--f")
    sp.add_argument("--g")
    sp.add_argument("--k-f", dest="k_f", type=_number)
    sp.add_argument("--k-g", dest="k_g", type=_number)
    sp.add_argument("--lw-norm", dest="lw_norm", type=_number)
    sp.add_argument("--sigma", type=_number)
    sp.add_argument("--s0", type=_number, default=0.1, help="synchronized state for Jacobians")
    sp.add_argument("--b", type=_number)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("bounds", help="structural spectral bounds")
    sp.add_argument("--edges")
    sp.add_argument("--sigma", type=_number)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("preset", help="reproduce a named scenario")
    sp.add_argument("name", choices=sorted(presets.PRESETS))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out-dir")
    sp.set_defaults(func=cmd_preset)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("a subcommand is required")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, HypergraphError, OSError, analysis.NotUniform) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NoConvergence, NonFinite, SpectrumError, ArithmeticError, ValueError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
