"""Command-line front end: prints CSV or JSON tables to stdout or ``--out``.

Exit status: 0 success, 2 usage error, 3 capability error, 4 numeric or
validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import analysis
from .core import ChannelParams, GaussianNoiseParams, labels
from .duration import mean_duration_analytic, mc_duration
from .errors import CapabilityError, RankOrderError
from .mc import McConfig, default_samples
from .transition import analytic_row, mc_row, mc_row_gaussian, quadrature_row

EXIT_USAGE = 2
EXIT_CAPABILITY = 3
EXIT_NUMERIC = 4


@dataclass
class OutputTable:
    header: list[str]
    rows: list[list]

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.header):
                raise ValueError(f"row {row!r} does not match header {self.header!r}")

    def render(self, fmt: str) -> str:
        if fmt == "json":
            records = [dict(zip(self.header, map(_json_value, row))) for row in self.rows]
            return json.dumps(records, indent=2) + "\n"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        writer.writerows([_cell(v) for v in row] for row in self.rows)
        return buf.getvalue()


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    if isinstance(v, (int, np.integer)):
        return int(v)
    return v


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        return float(format(float(v), ".12g"))
    if isinstance(v, (int, np.integer)):
        return int(v)
    return v


class _UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _add_output(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="write to FILE instead of stdout")


def _add_mc(p: argparse.ArgumentParser):
    p.add_argument("--samples", type=_positive_int, default=None,
                   help="Monte Carlo samples (default: $ROC_DEFAULT_SAMPLES or 10^7)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--chunk-size", type=_positive_int, default=2**20)


def _add_point(p: argparse.ArgumentParser):
    p.add_argument("--x", type=float, help="dimensionless lambda*alpha")
    p.add_argument("--lambda", dest="lam", type=float, help="noise rate (1/s)")
    p.add_argument("--alpha", type=float, help="spike spacing (s)")


def _params(args, n: int) -> ChannelParams:
    """--x alone means lambda = 1, alpha = x."""
    pair = (args.lam, args.alpha)
    if args.x is not None:
        if any(v is not None for v in pair):
            raise _UsageError("give either --x or --lambda/--alpha, not both")
        return ChannelParams.from_x(n, args.x)
    if None in pair:
        raise _UsageError("need --x or both --lambda and --alpha")
    return ChannelParams(n, args.alpha, args.lam)


def _mc_config(args) -> McConfig:
    samples = args.samples if args.samples is not None else default_samples()
    return McConfig(args.seed, samples, args.chunk_size, args.workers)


def _grid(args) -> np.ndarray:
    if not args.x_max > args.x_min:
        raise _UsageError("--x-max must exceed --x-min")
    if args.steps < 2:
        raise _UsageError("--steps must be >= 2")
    return np.linspace(args.x_min, args.x_max, args.steps)


def cmd_transition(args) -> OutputTable:
    p = _params(args, args.n)
    if args.method == "analytic":
        row = analytic_row(args.n, p.x)
    elif args.method == "quadrature":
        row = quadrature_row(args.n, p.x, args.tol)
    else:
        row = mc_row(p, _mc_config(args))
    header = ["label", "index", "probability"]
    rows = [[lab, i, float(v)] for i, (lab, v) in enumerate(zip(labels(args.n), row.probs))]
    if row.stderr is not None:
        header.append("std_error")
        for r, se in zip(rows, row.stderr):
            r.append(float(se))
    return OutputTable(header, rows)


def cmd_sweep(args) -> OutputTable:
    grid = _grid(args)
    cfg = _mc_config(args) if args.method == "mc" else None
    records = analysis.sweep(args.n, grid, args.method, cfg)
    return OutputTable(
        ["x", "C_bits_per_symbol", "gamma_bits_per_neuron", "lambdaTbar", "R_over_lambda"],
        [[r.x, r.capacity, r.efficiency, r.scaled_duration, r.scaled_rate] for r in records],
    )


def cmd_tradeoff(args) -> OutputTable:
    grid = _grid(args)
    pairs = analysis.tradeoff_curve(args.n, grid)
    return OutputTable(["x", "gamma_bits_per_neuron", "R_over_lambda"],
                       [[float(x), g, r] for x, (g, r) in zip(grid, pairs)])


def cmd_duration(args) -> OutputTable:
    p = _params(args, args.n)
    rows = []
    if args.method in ("analytic", "both"):
        rows.append(["analytic", mean_duration_analytic(args.n, p), 0.0, 0])
    if args.method in ("mc", "both"):
        est = mc_duration(p, _mc_config(args))
        rows.append(["mc", est.mean, est.std_error, est.samples])
    return OutputTable(["method", "mean_duration_sec", "std_error", "samples"], rows)


def cmd_atypical(args) -> OutputTable:
    grid = np.linspace(0.0, args.x_max, args.steps)
    findings = analysis.scan_atypical(args.n, grid)
    return OutputTable(
        ["label", "index", "peak_x", "peak_value", "rise_start", "rise_end"],
        [[f.label, f.symbol_index, f.peak_x, f.peak_value, *f.rising_range] for f in findings],
    )


def cmd_gaussian(args) -> OutputTable:
    if not args.alpha_max > args.alpha_min:
        raise _UsageError("--alpha-max must exceed --alpha-min")
    if args.steps < 2:
        raise _UsageError("--steps must be >= 2")
    cfg = _mc_config(args)
    rows = []
    for a in np.linspace(args.alpha_min, args.alpha_max, args.steps):
        row = mc_row_gaussian(GaussianNoiseParams(args.n, float(a), args.sigma), cfg)
        for i, lab in enumerate(row.labels):
            rows.append([float(a), row.x, lab, i, float(row.probs[i]), float(row.stderr[i])])
    return OutputTable(["alpha", "alpha_over_sigma", "label", "index", "probability", "std_error"], rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rankorder", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transition", help="transition row for the identity input")
    p.add_argument("--n", type=int, required=True)
    _add_point(p)
    p.add_argument("--method", choices=("analytic", "mc", "quadrature"), default="analytic")
    p.add_argument("--tol", type=float, default=1e-9)
    _add_mc(p)
    _add_output(p)
    p.set_defaults(func=cmd_transition)

    for name, func, helptext in (("sweep", cmd_sweep, "capacity, efficiency and scaled rate over x"),
                                 ("tradeoff", cmd_tradeoff, "(efficiency, R/lambda) pairs over x")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--x-min", type=float, required=True)
        p.add_argument("--x-max", type=float, required=True)
        p.add_argument("--steps", type=int, required=True)
        if name == "sweep":
            p.add_argument("--method", choices=("analytic", "mc"), default="analytic")
            _add_mc(p)
        _add_output(p)
        p.set_defaults(func=func)

    p = sub.add_parser("duration", help="mean symbol duration, theory and/or simulation")
    p.add_argument("--n", type=int, required=True)
    _add_point(p)
    p.add_argument("--method", choices=("analytic", "mc", "both"), default="both")
    _add_mc(p)
    _add_output(p)
    p.set_defaults(func=cmd_duration)

    p = sub.add_parser("atypical", help="error probabilities that rise as noise falls")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x-max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=10001)
    _add_output(p)
    p.set_defaults(func=cmd_atypical)

    p = sub.add_parser("gaussian", help="Monte Carlo rows under Gaussian jitter, swept over alpha")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--alpha-min", type=float, default=0.0)
    p.add_argument("--alpha-max", type=float, default=6.0)
    p.add_argument("--steps", type=int, default=13)
    _add_mc(p)
    _add_output(p)
    p.set_defaults(func=cmd_gaussian)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        table = args.func(args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"rankorder {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapabilityError as exc:
        print(f"rankorder {args.command}: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (RankOrderError, ValueError, ArithmeticError) as exc:
        print(f"rankorder {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = table.render(args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
