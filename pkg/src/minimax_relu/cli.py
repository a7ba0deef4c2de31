"""Command-line front end.

Subcommands::

    approx     balance breakpoints and write an approximation file
    bounds     print error bounds in n (and optionally in network size)
    build-net  compile an approximation file into a ReLU network file
    eval-net   evaluate a network file at a point or on a grid
    table1     rerun the 12 reference cells and compare mean errors
    plot-data  emit CSV samples of f, the approximation and the residual

Exit codes: 0 success, 1 domain/convexity/input error, 2 IO or schema error,
3 reference deviation (``table1`` only).
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import serialize
from .balancer import DEFAULT_MAX_ROUNDS, DEFAULT_STEPSIZE, balance, random_partition
from .bounds import error_bounds, size_bounds
from .errors import (ConvexityViolation, DomainError, EvaluationError, ExpressionSyntaxError,
                     NotStrictlyConvex, SchemaError, UnknownFunction)
from .experiments import run_table
from .functions import Interval, TargetFunction, builtin, from_expression
from .reference import MEAN_TOLERANCE
from .relu import build, forward, verify_equivalence
from .segment import DEFAULT_TOL

EXIT_OK, EXIT_INPUT, EXIT_IO, EXIT_DEVIATION = 0, 1, 2, 3

INPUT_ERRORS = (NotStrictlyConvex, ConvexityViolation, DomainError, EvaluationError,
                ExpressionSyntaxError, UnknownFunction)


@dataclass(frozen=True)
class RunConfig:
    function: Tuple[str, str]  # ("builtin", name) or ("expr", text)
    domain: Optional[Tuple[float, float]]
    n: int = 2
    stepsize: float = DEFAULT_STEPSIZE
    max_rounds: int = DEFAULT_MAX_ROUNDS
    tol: float = DEFAULT_TOL
    relaxed_convexity: bool = False
    seed: Optional[int] = None

    def __post_init__(self):
        for name in ("n", "stepsize", "max_rounds", "tol"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")
        if self.seed is not None and self.seed < 0:
            raise DomainError(f"seed must be non-negative, got {self.seed}")
        if self.domain is not None:
            Interval(*self.domain)

    def target(self) -> TargetFunction:
        kind, value = self.function
        domain = Interval(*self.domain) if self.domain is not None else None
        if kind == "builtin":
            return builtin(value, domain)
        if domain is None:
            raise DomainError("--expr needs --domain LO HI")
        return from_expression(value, domain)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["function"] = list(self.function)
        d["domain"] = list(self.domain) if self.domain is not None else None
        return d


def _config(args) -> RunConfig:
    function = ("builtin", args.builtin) if args.builtin else ("expr", args.expr)
    return RunConfig(
        function=function,
        domain=tuple(args.domain) if args.domain else None,
        n=args.n, stepsize=args.stepsize, max_rounds=args.max_rounds, tol=args.tol,
        relaxed_convexity=args.relaxed_convexity, seed=args.seed,
    )


def _fmt(v: float) -> str:
    return repr(float(v))


def cmd_approx(cfg: RunConfig, out_path=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    f = cfg.target()
    init = random_partition(f.domain, cfg.n, cfg.seed) if cfg.seed is not None else None
    pwl, report = balance(f, cfg.n, cfg.stepsize, cfg.max_rounds, tol=cfg.tol, init=init,
                          relaxed_convexity=cfg.relaxed_convexity)
    bounds = error_bounds(f, cfg.n)
    if out_path is not None:
        serialize.write_json(out_path, serialize.approx_to_dict(f, pwl, report, bounds, cfg.to_dict()))
    print(f"{f.name} n={cfg.n} mean={report.mean_error:.6g} gap={report.gap:.4g} "
          f"rounds={report.rounds} lower={bounds.lower:.6g} upper={bounds.upper:.6g} "
          f"sew_gap={pwl.max_sew_gap:.3g} stop={report.stop_reason}", file=stdout)
    return EXIT_OK


def cmd_bounds(cfg: RunConfig, neurons=None, layers=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    f = cfg.target()
    b = error_bounds(f, cfg.n)
    print(f"{f.name} on [{f.domain.lo:g}, {f.domain.hi:g}] n={b.n} lower={b.lower:.6g} "
          f"upper={b.upper:.6g} f2_min={b.f2_min:.6g} f2_max={b.f2_max:.6g}", file=stdout)
    if neurons is not None:
        lo, hi = size_bounds(f, neurons, layers if layers is not None else 4)
        print(f"neurons={neurons} layers={layers if layers is not None else 4} "
              f"size_lower={lo:.6g} size_upper={hi:.6g}", file=stdout)
    return EXIT_OK


def cmd_build_net(approx_file, arch: str, out_path, stdout=None) -> int:
    stdout = stdout or sys.stdout
    pwl, _, _, function = serialize.approx_from_dict(serialize.read_json(approx_file))
    net = build(pwl, arch)
    residual = verify_equivalence(net, pwl, 10_000)
    serialize.write_json(out_path, serialize.network_to_dict(net, function))
    print(f"architecture={arch} hidden={net.hidden_neurons} width<={max(net.hidden_widths)} "
          f"depth={net.depth}+2 residual={residual:.3g}", file=stdout)
    return EXIT_OK


def _write_rows(rows: List[list], header: List[str], csv_out, stdout):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    if csv_out is None:
        stdout.write(buf.getvalue())
    else:
        with open(csv_out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())


def cmd_eval_net(net_file, x=None, grid=None, csv_out=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    net, function = serialize.network_from_dict(serialize.read_json(net_file))
    lo, hi = net.meta.get("domain", [-math.inf, math.inf])
    if (x is None) == (grid is None):
        raise DomainError("give exactly one of --x or --grid")
    if x is not None:
        xs = np.array([float(x)])
    else:
        if grid < 1 or not math.isfinite(lo):
            raise DomainError(f"--grid needs a positive count and a network domain")
        xs = np.linspace(lo, hi, grid)
    ys = forward(net, xs)
    f = serialize.function_from_dict(function) if function else None
    header = ["x", "net"] + (["f", "residual"] if f else []) + ["warning"]
    rows = []
    for xv, yv in zip(xs, ys):
        outside = not (lo <= xv <= hi)
        row = [_fmt(xv), _fmt(yv)]
        if f is not None:
            if outside:
                row += ["", ""]
            else:
                fv = f.eval(float(xv))
                row += [_fmt(fv), _fmt(yv - fv)]
        row.append("outside_domain" if outside else "")
        if outside:
            print(f"warning: x={float(xv)!r} is outside [{lo!r}, {hi!r}]; value is the plateau", file=stderr)
        rows.append(row)
    _write_rows(rows, header, csv_out, stdout)
    return EXIT_OK


def cmd_table1(stepsize: float = DEFAULT_STEPSIZE, csv_out=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    results = run_table(stepsize)
    header = ["function", "n", "mean_error", "upper_bound", "lower_bound", "gap", "rounds", "status"]
    lines = [f"{'function':<8} {'n':>3} {'mean':>10} {'upper':>10} {'lower':>10} "
             f"{'gap':>11} {'rounds':>7} {'time_s':>8}  status"]
    rows, failed = [], []
    for r in results:
        status = "ok" if r.ok else f"DEVIATES({r.mean_deviation:.2e})"
        if not r.ok:
            failed.append(f"{r.function} n={r.n}")
        lines.append(f"{r.function:<8} {r.n:>3} {r.report.mean_error:>10.5f} {r.bounds.upper:>10.5f} "
                     f"{r.bounds.lower:>10.5f} {r.report.gap:>11.4e} {r.report.rounds:>7} "
                     f"{r.seconds:>8.3f}  {status}")
        rows.append([r.function, r.n, _fmt(r.report.mean_error), _fmt(r.bounds.upper),
                     _fmt(r.bounds.lower), _fmt(r.report.gap), r.report.rounds, status])
    print("\n".join(lines), file=stdout)
    if csv_out is not None:
        _write_rows(rows, header, csv_out, stdout)
    if failed:
        print(f"mean error deviates by more than {MEAN_TOLERANCE:g} in: {', '.join(failed)}", file=stdout)
        return EXIT_DEVIATION
    return EXIT_OK


def cmd_plot_data(approx_file, grid: int, csv_out) -> int:
    if grid < 2:
        raise DomainError(f"--grid must be >= 2, got {grid}")
    pwl, _, _, function = serialize.approx_from_dict(serialize.read_json(approx_file))
    f = serialize.function_from_dict(function)
    bps = pwl.breakpoints
    xs = np.linspace(bps[0], bps[-1], grid)
    fx = f.values(xs)
    px = pwl(xs)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "f", "pwl", "residual"])
    for row in zip(xs, fx, px, fx - px):
        writer.writerow([_fmt(v) for v in row])
    buf.write("\n")
    writer.writerow(["breakpoint", "node_value"])
    for b, v in zip(bps, pwl.node_values):
        writer.writerow([_fmt(b), _fmt(v)])
    with open(csv_out, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())
    return EXIT_OK


def _function_args(p, n_default=2):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", choices=["exp", "square", "cube"])
    src.add_argument("--expr", help="expression in x, e.g. 'exp(x) + x^2'")
    p.add_argument("--domain", nargs=2, type=float, metavar=("LO", "HI"))
    p.add_argument("--n", type=int, default=n_default)
    p.add_argument("--stepsize", type=float, default=DEFAULT_STEPSIZE)
    p.add_argument("--max-rounds", type=int, default=DEFAULT_MAX_ROUNDS)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--relaxed-convexity", action="store_true",
                   help="allow f'' = 0 at the domain endpoints (needed for x^3 on [0, 1])")
    p.add_argument("--seed", type=int, default=None,
                   help="start from a seeded random partition instead of an even one")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minimax-relu", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("approx", help="optimal n-piece approximation")
    _function_args(p)
    p.add_argument("--out", help="approximation JSON file to write")

    p = sub.add_parser("bounds", help="error bounds")
    _function_args(p)
    p.add_argument("--neurons", type=int)
    p.add_argument("--layers", type=int)

    p = sub.add_parser("build-net", help="compile an approximation into a ReLU network")
    p.add_argument("approx_file")
    p.add_argument("--arch", choices=["fixed-depth", "fixed-width"], default="fixed-depth")
    p.add_argument("--out", required=True)

    p = sub.add_parser("eval-net", help="evaluate a network file")
    p.add_argument("net_file")
    p.add_argument("--x", type=float)
    p.add_argument("--grid", type=int)
    p.add_argument("--csv")

    p = sub.add_parser("table1", help="rerun the reference experiments")
    p.add_argument("--stepsize", type=float, default=DEFAULT_STEPSIZE)
    p.add_argument("--csv")

    p = sub.add_parser("plot-data", help="CSV samples for plotting an approximation")
    p.add_argument("approx_file")
    p.add_argument("--grid", type=int, default=1001)
    p.add_argument("--csv", required=True)
    return parser


def _join_expr(argv: List[str]) -> List[str]:
    # "--expr -x^2" would otherwise be read as an unknown option
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--expr" and i + 1 < len(argv):
            out.append(f"--expr={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = make_parser().parse_args(_join_expr(sys.argv[1:] if argv is None else list(argv)))
    try:
        if args.command == "approx":
            return cmd_approx(_config(args), args.out, stdout)
        if args.command == "bounds":
            return cmd_bounds(_config(args), args.neurons, args.layers, stdout)
        if args.command == "build-net":
            return cmd_build_net(args.approx_file, args.arch, args.out, stdout)
        if args.command == "eval-net":
            return cmd_eval_net(args.net_file, args.x, args.grid, args.csv, stdout, stderr)
        if args.command == "table1":
            return cmd_table1(args.stepsize, args.csv, stdout)
        if args.command == "plot-data":
            return cmd_plot_data(args.approx_file, args.grid, args.csv)
    except INPUT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INPUT
    except (SchemaError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_IO
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
