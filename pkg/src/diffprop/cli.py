"""Command-line front end.

Thin adapters over the library: compute exact or classical intervals,
mixture PMF tables, coverage curves, allocation plans, and regenerate the
reference tables/figure datasets.  Exit codes: 0 success, 2 usage error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import refdata
from .allocation import optimal_allocation
from .binomial import ConfidenceLevel
from .classical import Counts, classical_interval, truncate
from .coverage import coverage_curve
from .errors import QuadratureError, RootFindingError
from .exact import DEFAULT_ROOT, RootSpec, exact_interval
from .intervals import CLASSICAL_METHODS, IntervalEstimate, MethodId
from .model import (
    DEFAULT_QUAD,
    Design,
    MixtureDistribution,
    QuadratureSpec,
    enumerate_support,
    support_pmf,
)

FORMATS = ("human", "csv", "structured")

USAGE_EXIT = 2
NUMERICAL_EXIT = 3

# verification tolerances for `reproduce`, per target
_REPRODUCE_TOL = {"table1": 5e-4, "table2": 1e-4, "figure1a": 1e-4,
                  "figure1b": 1e-4, "medical": 5e-4}


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _gamma(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"confidence level must lie in (0, 1), got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diffprop",
        description="Confidence intervals for the difference of two binomial "
                    "proportions and their exact coverage probabilities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact-ci", help="exact interval from (n1, n2, u, gamma)")
    p.add_argument("--n1", type=_positive_int, required=True)
    p.add_argument("--n2", type=_positive_int, required=True)
    p.add_argument("--u", type=float, required=True,
                   help="observed difference of sample proportions, in [-1, 1]")
    p.add_argument("--gamma", type=_gamma, required=True)
    p.add_argument("--format", choices=FORMATS, default="human")
    p.add_argument("--xtol", type=float, default=DEFAULT_ROOT.x_tol,
                   help="root-finding tolerance on the difference scale")
    p.add_argument("--abstol", type=float, default=DEFAULT_QUAD.abs_tol,
                   help="absolute quadrature tolerance")
    p.add_argument("--snap-grid", action="store_true",
                   help="snap u to the nearest attainable value first")

    p = sub.add_parser("classical-ci", help="classical interval from counts")
    p.add_argument("--method", required=True)
    p.add_argument("--n1", type=_positive_int, required=True)
    p.add_argument("--n2", type=_positive_int, required=True)
    p.add_argument("--x1", type=int, required=True)
    p.add_argument("--x2", type=int, required=True)
    p.add_argument("--gamma", type=_gamma, default=0.95)
    p.add_argument("--truncate", action="store_true")
    p.add_argument("--format", choices=FORMATS, default="human")

    p = sub.add_parser("pmf", help="mixture PMF over the support")
    p.add_argument("--n1", type=_positive_int, required=True)
    p.add_argument("--n2", type=_positive_int, required=True)
    p.add_argument("--theta-diff", type=float, required=True)
    p.add_argument("--format", choices=FORMATS, default="human")

    p = sub.add_parser("coverage", help="exact coverage curve of a method")
    p.add_argument("--method", required=True)
    p.add_argument("--n1", type=_positive_int, required=True)
    p.add_argument("--n2", type=_positive_int, required=True)
    p.add_argument("--gamma", type=_gamma, default=0.95)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--truncate", action="store_true")
    p.add_argument("--format", choices=FORMATS, default="human")

    p = sub.add_parser("allocate", help="variance-optimal split of a trial budget")
    p.add_argument("--n-total", type=int, required=True)

    p = sub.add_parser("reproduce", help="regenerate a reference dataset as CSV")
    p.add_argument("--target", required=True,
                   choices=("table1", "table2", "figure1a", "figure1b", "medical"))
    p.add_argument("--out", default=".", help="output directory")

    return parser


def _parse_method(parser, name: str, allow_m: bool) -> MethodId:
    try:
        method = MethodId(name.lower())
    except ValueError:
        if name.lower() == "wang":
            parser.error(
                "method 'wang' is not implemented here (available in the "
                "ExactCIdiff R package); valid tags: "
                + ", ".join(m.value for m in MethodId)
            )
        parser.error(
            f"unknown method {name!r}; valid tags: "
            + ", ".join(m.value for m in MethodId)
        )
    if method is MethodId.M and not allow_m:
        parser.error("method 'm' is the exact interval; use the exact-ci command")
    return method


def _interval_record(iv: IntervalEstimate, n1: int, n2: int, **extra) -> dict:
    rec = {"method": iv.method.value, "n1": n1, "n2": n2}
    rec.update(extra)
    rec.update({"gamma": iv.gamma.gamma, "lower": iv.lower, "upper": iv.upper,
                "truncated": iv.truncated})
    return rec


def _emit_record(rec: dict, fmt: str, out: io.TextIOBase, human_lines: list[str]):
    if fmt == "human":
        out.write("\n".join(human_lines) + "\n")
    elif fmt == "structured":
        for key, value in rec.items():
            out.write(f"{key}={value}\n")
    else:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(rec.keys())
        writer.writerow(repr(v) if isinstance(v, float) else v for v in rec.values())


def _cmd_exact_ci(args, out) -> int:
    if not -1.0 <= args.u <= 1.0:
        raise _Usage("--u must lie in [-1, 1]")
    design = Design(args.n1, args.n2)
    u = args.u
    snap_note = ""
    if args.snap_grid:
        values = enumerate_support(design).values()
        nearest = float(values[np.argmin(np.abs(values - u))])
        snap_note = f"snapped u from {u!r} to {nearest!r} (distance {abs(nearest - u):.3g})"
        u = nearest
    quad = QuadratureSpec(abs_tol=args.abstol, rel_tol=DEFAULT_QUAD.rel_tol,
                          max_subdivisions=DEFAULT_QUAD.max_subdivisions)
    root = RootSpec(x_tol=args.xtol)
    iv = exact_interval(design, u, ConfidenceLevel(args.gamma), quad, root)
    rec = _interval_record(iv, args.n1, args.n2, u=u)
    human = []
    if snap_note:
        human.append(snap_note)
    human += [
        f"exact interval (method m): n1={args.n1} n2={args.n2} u={u!r} gamma={args.gamma!r}",
        f"lower={iv.lower:.6f}",
        f"upper={iv.upper:.6f}",
    ]
    _emit_record(rec, args.format, out, human)
    return 0


def _cmd_classical_ci(args, out, parser) -> int:
    method = _parse_method(parser, args.method, allow_m=False)
    design = Design(args.n1, args.n2)
    try:
        counts = Counts(args.x1, args.x2, design)
    except ValueError as exc:
        raise _Usage(str(exc))
    iv = classical_interval(method, counts, ConfidenceLevel(args.gamma))
    if args.truncate:
        iv = truncate(iv)
    rec = _interval_record(iv, args.n1, args.n2, x1=args.x1, x2=args.x2)
    human = [
        f"classical interval (method {method.value}): "
        f"x1={args.x1}/{args.n1} x2={args.x2}/{args.n2} gamma={args.gamma!r}",
        f"theta_hat={counts.theta_hat:.6f}",
        f"lower={iv.lower:.6f}",
        f"upper={iv.upper:.6f}",
        f"truncated={iv.truncated}",
    ]
    _emit_record(rec, args.format, out, human)
    return 0


def _cmd_pmf(args, out) -> int:
    if not -1.0 < args.theta_diff < 1.0:
        raise _Usage("--theta-diff must lie strictly inside (-1, 1)")
    design = Design(args.n1, args.n2)
    support = enumerate_support(design)
    dist = MixtureDistribution(design, args.theta_diff)
    pmf = support_pmf(dist, support)
    values = support.values()
    if args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["u", "pmf"])
        for u, p in zip(values, pmf):
            writer.writerow([repr(float(u)), repr(float(p))])
    elif args.format == "structured":
        for u, p in zip(values, pmf):
            out.write(f"u={float(u)!r} pmf={float(p)!r}\n")
    else:
        out.write(f"{'u':>12}  {'pmf':>12}\n")
        for u, p in zip(values, pmf):
            out.write(f"{u:12.6f}  {p:12.6f}\n")
        out.write(f"sum={pmf.sum():.10f}\n")
    return 0


def _cmd_coverage(args, out, parser) -> int:
    method = _parse_method(parser, args.method, allow_m=True)
    design = Design(args.n1, args.n2)
    try:
        curve = coverage_curve(design, ConfidenceLevel(args.gamma), method,
                               args.step, truncated=args.truncate)
    except ValueError as exc:
        raise _Usage(str(exc))
    if args.format == "human":
        out.write(f"{'theta_diff':>12}  {'coverage':>10}\n")
        for t, c in curve.points:
            out.write(f"{t:12.6f}  {c:10.6f}\n")
    elif args.format == "structured":
        for t, c in curve.points:
            out.write(f"theta_diff={t!r} coverage={c!r}\n")
    else:
        out.write(curve.to_csv())
    return 0


def _cmd_allocate(args, out) -> int:
    if args.n_total < 2:
        raise _Usage("--n-total must be at least 2")
    plan = optimal_allocation(args.n_total)
    out.write(f"n_total={plan.n_total} n1={plan.n1} n2={plan.n2} f={plan.f!r}\n")
    out.write(f"{'theta_diff':>12}  {'variance':>12}\n")
    for theta in (0.0, 0.25, 0.5, 0.75, 1.0):
        out.write(f"{theta:12.2f}  {plan.variance_at(theta):12.8f}\n")
    return 0


def _reproduce_table1(out_path: Path) -> float:
    rows = refdata.table1()
    worst = 0.0
    with out_path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n1", "n2", "u", "lower", "upper",
                         "ref_lower", "ref_upper"])
        for row in rows:
            design = Design(row["n1"], row["n2"])
            iv = exact_interval(design, row["u"], ConfidenceLevel(0.95))
            worst = max(worst, abs(iv.lower - row["lower"]),
                        abs(iv.upper - row["upper"]))
            writer.writerow([row["n1"], row["n2"], repr(row["u"]),
                             repr(iv.lower), repr(iv.upper),
                             repr(row["lower"]), repr(row["upper"])])
    return worst


def _reproduce_table2(out_path: Path) -> float:
    rows = refdata.table2()
    design = Design(50, 10)
    level = ConfidenceLevel(0.95)
    worst = 0.0
    with out_path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x1", "x2", "theta_hat",
                         "k1_lower", "k1_upper", "k2_lower", "k2_upper",
                         "wang_lower", "wang_upper", "wang_status"])
        for row in rows:
            counts = Counts(row["x1"], row["x2"], design)
            k1 = classical_interval(MethodId.K1, counts, level)
            k2 = classical_interval(MethodId.K2, counts, level)
            worst = max(worst,
                        abs(k1.lower - row["k1"][0]), abs(k1.upper - row["k1"][1]),
                        abs(k2.lower - row["k2"][0]), abs(k2.upper - row["k2"][1]))
            writer.writerow([row["x1"], row["x2"], repr(counts.theta_hat),
                             repr(k1.lower), repr(k1.upper),
                             repr(k2.lower), repr(k2.upper),
                             repr(row["wang"][0]), repr(row["wang"][1]),
                             "reference_only"])
    return worst


def _reproduce_figure(name: str, out_path: Path) -> float:
    ref = refdata.figure(name)
    design = Design(10, 10) if name == "figure1a" else Design(50, 10)
    curve = coverage_curve(design, ConfidenceLevel(0.95), MethodId.M, 0.01)
    worst = 0.0
    with out_path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["theta_diff", "coverage", "ref_coverage"])
        for (theta, cov), (ref_theta, ref_cov) in zip(curve.points, ref):
            worst = max(worst, abs(cov - ref_cov))
            writer.writerow([repr(theta), repr(cov), repr(ref_cov)])
    return worst


def _reproduce_medical(out_path: Path) -> float:
    rows = refdata.medical()
    worst = 0.0
    with out_path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n1", "n2", "u", "lower", "upper",
                         "ref_lower", "ref_upper"])
        for row in rows:
            design = Design(row["n1"], row["n2"])
            iv = exact_interval(design, row["u"], ConfidenceLevel(0.95))
            worst = max(worst, abs(iv.lower - row["lower"]),
                        abs(iv.upper - row["upper"]))
            writer.writerow([row["n1"], row["n2"], repr(row["u"]),
                             repr(iv.lower), repr(iv.upper),
                             repr(row["lower"]), repr(row["upper"])])
    return worst


def _cmd_reproduce(args, out) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / f"{args.target}.csv"
    runner = {
        "table1": _reproduce_table1,
        "table2": _reproduce_table2,
        "figure1a": lambda p: _reproduce_figure("figure1a", p),
        "figure1b": lambda p: _reproduce_figure("figure1b", p),
        "medical": _reproduce_medical,
    }[args.target]
    worst = runner(out_path)
    tol = _REPRODUCE_TOL[args.target]
    out.write(f"wrote {out_path}\n")
    out.write(f"max deviation from reference: {worst:.6g} (tolerance {tol:g})\n")
    if worst > tol:
        out.write("verification FAILED\n")
        return NUMERICAL_EXIT
    out.write("verification OK\n")
    return 0


class _Usage(Exception):
    pass


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "exact-ci":
            return _cmd_exact_ci(args, out)
        if args.command == "classical-ci":
            return _cmd_classical_ci(args, out, parser)
        if args.command == "pmf":
            return _cmd_pmf(args, out)
        if args.command == "coverage":
            return _cmd_coverage(args, out, parser)
        if args.command == "allocate":
            return _cmd_allocate(args, out)
        if args.command == "reproduce":
            return _cmd_reproduce(args, out)
        parser.error(f"unknown command {args.command!r}")
    except _Usage as exc:
        parser.exit(USAGE_EXIT, f"{parser.prog}: error: {exc}\n")
    except (QuadratureError, RootFindingError) as exc:
        print(f"{parser.prog}: numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_EXIT
    except ValueError as exc:
        parser.exit(USAGE_EXIT, f"{parser.prog}: error: {exc}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
