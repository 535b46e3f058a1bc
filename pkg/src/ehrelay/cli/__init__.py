"""Command-line interface: ``eval``, ``sweep``, ``figure``, ``validate``, ``alpha-scan``.

Exit codes: 0 success, 1 configuration or usage error, 2 numerical
non-convergence, 3 validation failure.
"""

from __future__ import annotations

import argparse
import sys

from ..quadrature import QuadratureError
from ..throughput import DELAY_SENSITIVE, DELAY_TOLERANT, TruncationError
from .alpha import alpha_scan
from .config import ConfigError, RunConfig, load_config, parse_config
from .presets import FIGURES, figure_preset, regression_grid, validate
from .sweep import SweepResult, eval_point, read_csv, run_point, run_sweep

__all__ = ["main", "RunConfig", "ConfigError", "parse_config", "load_config", "run_point",
           "run_sweep", "eval_point", "figure_preset", "validate", "regression_grid",
           "alpha_scan", "read_csv", "SweepResult"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NONCONVERGENCE = 2
EXIT_VALIDATION = 3


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors; exit 2 is reserved for numerics
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file, or a CSV written by this tool")
    common.add_argument("--output", help="output path (default: standard output)")
    common.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    common.add_argument("--seed", type=int, help="Monte Carlo base seed")
    common.add_argument("--tol", type=float, help="relative quadrature tolerance")
    common.add_argument("--engines", help="comma list of exact,asymptotic,montecarlo")
    common.add_argument("--workers", type=int, help="worker threads")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="ehrelay", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("eval", parents=[common], help="evaluate one parameter point")
    sub.add_parser("sweep", parents=[common], help="sweep one variable")
    listing = "\n".join(f"  {k}: {v.description}" for k, v in sorted(FIGURES.items()))
    fig = sub.add_parser(
        "figure", parents=[common], help="run a figure preset",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description="Axis grids and legend sets are reconstructions.",
        epilog="presets:\n" + listing)
    fig.add_argument("figure_id", choices=sorted(FIGURES))
    sub.add_parser("validate", parents=[common], help="exact vs Monte Carlo regression grid")
    scan = sub.add_parser("alpha-scan", parents=[common], help="throughput-optimal alpha")
    scan.add_argument("--mode", choices=("ds", "dt", "both"), default="both")
    scan.add_argument("--engine", choices=("exact", "asymptotic", "montecarlo"),
                      default="exact")
    scan.add_argument("--steps", type=int, default=49)
    scan.add_argument("--refine", action="store_true", help="golden-section refinement")
    return parser


def _flag_overrides(args) -> dict:
    text = []
    if args.trials is not None:
        text.append(f"trials = {args.trials}")
    if args.seed is not None:
        text.append(f"seed = {args.seed}")
    if args.tol is not None:
        text.append(f"rel_tol = {args.tol!r}")
    if args.engines is not None:
        text.append(f"engines = {args.engines}")
    if args.workers is not None:
        text.append(f"workers = {args.workers}")
    return parse_config("\n".join(text), source="<command line>")


def _emit(text: str, path) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run(args) -> int:
    overrides = _flag_overrides(args)
    base = load_config(args.config) if args.config else RunConfig()
    cfg = base.replace(**overrides).validated()

    if args.command == "figure":
        result = figure_preset(args.figure_id, base, overrides)
    elif args.command == "validate":
        report = validate(cfg)
        _emit(report.to_csv(), args.output)
        if report.nonconverged:
            return EXIT_NONCONVERGENCE
        return EXIT_OK if report.passed else EXIT_VALIDATION
    elif args.command == "alpha-scan":
        modes = {"ds": (DELAY_SENSITIVE,), "dt": (DELAY_TOLERANT,),
                 "both": (DELAY_SENSITIVE, DELAY_TOLERANT)}[args.mode]
        scan = alpha_scan(cfg, modes, steps=args.steps, refine=args.refine, engine=args.engine)
        _emit(scan.to_csv(), args.output)
        return EXIT_OK
    elif args.command == "sweep":
        result = run_sweep(cfg)
    else:
        result = eval_point(cfg)
    _emit(result.to_csv(), args.output)
    return EXIT_OK if result.converged else EXIT_NONCONVERGENCE


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"ehrelay: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"ehrelay: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, TruncationError, OverflowError, FloatingPointError) as exc:
        print(f"ehrelay: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
