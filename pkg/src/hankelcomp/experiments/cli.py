"""Command-line interface: ``hankelcomp <subcommand> [flags]``.

Exit codes: 0 success, 1 usage or parse error, 2 iteration limit reached by a
single-solve command, 3 missing input file or dataset.
"""

from __future__ import annotations

import argparse
import pathlib
import sys
import warnings

import numpy as np

from ..core import HankelShape
from ..errors import DatasetMissingError, HankelError
from ..solver import SolverConfig, Status
from ..theory import PROBE_CONFIG, optimal_window
from ..weights import parse_weight_spec
from . import harness
from .data import ingest_csv
from .output import render

EXIT_OK, EXIT_USAGE, EXIT_ITERATION_LIMIT, EXIT_MISSING = 0, 1, 2, 3

SIMULATE_CONFIG = SolverConfig()


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_grid(text, integer=False):
    """``a,b,c`` or ``start:stop:step`` (stop inclusive)."""
    conv = int if integer else float
    try:
        if ":" in text:
            parts = [float(x) for x in text.split(":")]
            if len(parts) == 2:
                parts.append(1.0)
            start, stop, step = parts
            if step <= 0:
                raise ValueError
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            vals = [start + i * step for i in range(count)]
            return tuple(conv(round(v, 12)) for v in vals)
        return tuple(conv(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; use a,b,c or start:stop:step") from None


def _int_grid(text):
    return parse_grid(text, integer=True)


def _common(p, window_default=None, missing_default=0):
    io = p.add_argument_group("input/output")
    io.add_argument("--input", metavar="PATH")
    io.add_argument("--output", metavar="PATH", help="write here instead of stdout")
    io.add_argument("--format", choices=("csv", "json"), default="csv")
    shape = p.add_argument_group("structure")
    win = shape.add_mutually_exclusive_group()
    win.add_argument("--window", type=int, metavar="L", default=window_default)
    win.add_argument("--auto-window", action="store_true", help="most square window for n + m")
    shape.add_argument("--missing", type=int, metavar="m", default=missing_default)
    w = p.add_argument_group("weights and budget")
    w.add_argument("--weights", choices=("trapezoid", "uniform", "exp"), default="uniform")
    w.add_argument("--alpha", type=float, default=0.05, metavar="A")
    budget = w.add_mutually_exclusive_group()
    budget.add_argument("--tau", type=float, metavar="T")
    budget.add_argument("--calibrate-rank", type=int, metavar="R")
    s = p.add_argument_group("solver and randomness")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-iter", type=int, metavar="N")
    s.add_argument("--tol-abs", type=float, metavar="X")
    s.add_argument("--tol-rel", type=float, metavar="Y")
    s.add_argument("--jobs", type=int, default=1, help="worker processes for grid experiments")


def build_parser():
    parser = _Parser(prog="hankelcomp", description="Hankel nuclear-norm completion for forecasting")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("forecast", help="complete m values after a series")
    _common(p)
    p.add_argument("--holdout", action="store_true", help="treat the last m input values as unseen truth")

    p = sub.add_parser("approximate", help="low-rank approximation without forecast (m = 0)")
    _common(p)

    p = sub.add_parser("calibrate", help="budgets tau for each weighting scheme and rank")
    _common(p)
    p.add_argument("--ranks", type=_int_grid, default=(3, 6, 12))

    p = sub.add_parser("sweep-phase", help="rank-one success diagram over (rho, m)")
    _common(p, window_default=13)
    p.add_argument("--cols", type=int, metavar="K", help="number of columns (default: L)")
    p.add_argument("--rhos", type=parse_grid, default=harness.PHASE_RHOS)
    p.add_argument("--ms", type=_int_grid, default=harness.PHASE_MS)

    p = sub.add_parser("sweep-rank", help="rank-r success probabilities over random frequencies")
    _common(p, window_default=13)
    p.add_argument("--cols", type=int, metavar="K")
    p.add_argument("--rhos", type=parse_grid, default=harness.PHASE_RHOS)
    p.add_argument("--ms", type=_int_grid, default=harness.PHASE_MS)
    p.add_argument("--ranks", type=_int_grid, default=(1, 2, 3))
    p.add_argument("--realizations", type=int, default=20)
    p.add_argument("--exponent", choices=("k", "j"), default="k")

    p = sub.add_parser("simulate", help="noisy cosine forecasting study")
    _common(p, window_default=30)
    p.add_argument("--case", type=int, choices=(1, 2), default=2)
    p.add_argument("--reps", type=int, default=50)
    p.add_argument("--sigma", type=float, default=0.1)
    p.add_argument("--length", type=int, default=100)
    p.add_argument("--ms", type=_int_grid, default=tuple(range(1, 16)))

    p = sub.add_parser("alpha-tau", help="forecast error surface over (alpha, tau)")
    _common(p, window_default=24, missing_default=6)
    p.add_argument("--alphas", type=parse_grid, default=harness.SURFACE_ALPHAS)
    p.add_argument("--taus", type=parse_grid, default=harness.SURFACE_TAUS)

    p = sub.add_parser("bounds", help="recovery bound C(rho) and largest guaranteed m")
    _common(p, window_default=13)
    p.add_argument("--cols", type=int, metavar="K")
    p.add_argument("--rhos", type=parse_grid, default=harness.PHASE_RHOS)

    p = sub.add_parser("certificate", help="optimality certificate for a candidate completion")
    _common(p)
    p.add_argument("--lam", type=float, help="use the candidate lam**k on a square structure instead of --input")
    return parser


def solver_config(args, base=SolverConfig()):
    kw = {}
    if args.max_iter is not None:
        kw["max_iterations"] = args.max_iter
    if args.tol_abs is not None:
        kw["eps_abs"] = args.tol_abs
    if args.tol_rel is not None:
        kw["eps_rel"] = args.tol_rel
    if not kw:
        return base
    d = harness.config_dict(base)
    d.update(kw)
    return SolverConfig(**d)


def _series(args):
    if not args.input:
        raise UsageError("--input is required")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        ts = ingest_csv(args.input)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return ts.values


def _window(args, total, m):
    if args.auto_window or args.window is None:
        return optimal_window(total, m)
    return args.window


def _cmd_forecast(args, m=None):
    values = _series(args)
    m = args.missing if m is None else m
    n = len(values) - m if getattr(args, "holdout", False) else len(values)
    L = _window(args, n + m, m)
    spec = parse_weight_spec(args.weights, args.alpha)
    out = harness.forecast_series(
        values, m, L, spec, tau=args.tau, rank=args.calibrate_rank,
        holdout=getattr(args, "holdout", False), config=solver_config(args),
    )
    table = harness.forecast_table(values, out, {"L": L, "weights": args.weights, "alpha": args.alpha})
    code = EXIT_ITERATION_LIMIT if out.status is Status.ITERATION_LIMIT else EXIT_OK
    return table, code


def _cmd_calibrate(args):
    values = _series(args)
    L = _window(args, len(values), 0)
    return harness.calibrate_table(values, L, args.ranks, args.alpha), EXIT_OK


def _cmd_sweep_phase(args):
    K = args.cols or args.window
    cfg = solver_config(args, PROBE_CONFIG)
    return harness.sweep_phase(args.rhos, args.ms, args.window, K, cfg, jobs=args.jobs), EXIT_OK


def _cmd_sweep_rank(args):
    K = args.cols or args.window
    cfg = solver_config(args, PROBE_CONFIG)
    table = harness.sweep_rank(
        args.rhos, args.ms, args.ranks, args.realizations, args.seed, args.window, K, cfg,
        exponent=args.exponent, jobs=args.jobs,
    )
    return table, EXIT_OK


def _cmd_simulate(args):
    rank = args.calibrate_rank or 2
    table = harness.simulate(
        case=args.case, ms=args.ms, reps=args.reps, seed=args.seed, sigma=args.sigma, N=args.length,
        L=args.window, alpha=args.alpha, rank=rank, config=solver_config(args, SIMULATE_CONFIG), jobs=args.jobs,
    )
    return table, EXIT_OK


def _cmd_alpha_tau(args):
    values = _series(args)
    m = args.missing
    n = len(values) - m
    table = harness.alpha_tau_surface(values, n, m, args.window, args.alphas, args.taus, solver_config(args))
    return table, EXIT_OK


def _cmd_bounds(args):
    K = args.cols or args.window
    return harness.bounds_table(args.window, K, args.rhos), EXIT_OK


def _cmd_certificate(args):
    if args.lam is not None:
        L = args.window or 7
        m = args.missing or L - 1
        shape = HankelShape(L, L, 2 * L - 1 - m, m)
        candidate = args.lam ** np.arange(1, 2 * L, dtype=float)
    else:
        candidate = _series(args)
        m = args.missing
        L = _window(args, len(candidate), m)
        shape = HankelShape.from_window(len(candidate) - m, m, L)
    return harness.certificate_table(candidate, shape), EXIT_OK


COMMANDS = {
    "forecast": _cmd_forecast,
    "approximate": lambda a: _cmd_forecast(a, m=0),
    "calibrate": _cmd_calibrate,
    "sweep-phase": _cmd_sweep_phase,
    "sweep-rank": _cmd_sweep_rank,
    "simulate": _cmd_simulate,
    "alpha-tau": _cmd_alpha_tau,
    "bounds": _cmd_bounds,
    "certificate": _cmd_certificate,
}


def _echo(args):
    skip = {"output", "format", "jobs"}
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        table, code = COMMANDS[args.command](args)
    except DatasetMissingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (UsageError, HankelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(table, args.format, {"config": _echo(args)})
    if args.output:
        path = pathlib.Path(args.output)
        path.write_text(text)
        if args.format == "csv":
            path.with_name(path.name + ".meta.json").write_text(render(table, "json", {"config": _echo(args)}))
    else:
        sys.stdout.write(text)
    if code == EXIT_ITERATION_LIMIT:
        print("warning: solver stopped at the iteration limit", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
