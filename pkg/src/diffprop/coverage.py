"""Exact (non-simulated) coverage probabilities of interval methods.

Two evaluation pipelines are kept deliberately separate so they can
cross-validate each other:

* the exact method sums the mixture PMF over the support points whose
  precomputed interval covers the true difference (open endpoints);
* classical methods average, over the nuisance parameter, the double lattice
  sum of binomial products weighted by closed-endpoint interval membership.

Curves over a difference grid are embarrassingly parallel; points may be
evaluated by a process pool, and output order is the grid order regardless
of scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .binomial import ConfidenceLevel, log_binom_coeffs, pmf_vector
from .classical import classical_interval, Counts
from .exact import DEFAULT_ROOT, RootSpec, exact_interval
from .intervals import IntervalEstimate, MethodId
from .model import (
    DEFAULT_QUAD,
    Design,
    DiffSupport,
    MixtureDistribution,
    QuadratureSpec,
    _integrate,
    enumerate_support,
    lattice_index,
    support_pmf,
)


@dataclass(frozen=True)
class CoverageCurve:
    """Coverage probability of one method on a grid of true differences."""

    method: MethodId
    design: Design
    gamma: ConfidenceLevel
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        thetas = [t for t, _ in self.points]
        if any(b <= a for a, b in zip(thetas, thetas[1:])):
            raise ValueError("grid values must be strictly increasing")
        if any(not 0.0 <= c <= 1.0 for _, c in self.points):
            raise ValueError("coverage values must lie in [0, 1]")

    def thetas(self) -> np.ndarray:
        return np.array([t for t, _ in self.points])

    def coverages(self) -> np.ndarray:
        return np.array([c for _, c in self.points])

    def to_csv(self) -> str:
        lines = ["theta_diff,coverage"]
        lines += [f"{t!r},{c!r}" for t, c in self.points]
        return "\n".join(lines) + "\n"


def _as_level(gamma) -> ConfidenceLevel:
    return gamma if isinstance(gamma, ConfidenceLevel) else ConfidenceLevel(float(gamma))


def exact_method_intervals(
    design: Design,
    gamma,
    quad: QuadratureSpec | None = None,
    root: RootSpec | None = None,
    support: DiffSupport | None = None,
) -> tuple[IntervalEstimate, ...]:
    """Interval for every support point, in support order.

    Root-finding dominates curve cost and the intervals do not depend on the
    true difference, so curves compute this once up front.
    """
    level = _as_level(gamma)
    if support is None:
        support = enumerate_support(design)
    return tuple(
        exact_interval(design, pt.value, level, quad, root) for pt in support.points
    )


def coverage_exact_method(
    design: Design,
    gamma,
    theta_diff: float,
    quad: QuadratureSpec | None = None,
    root: RootSpec | None = None,
    support: DiffSupport | None = None,
    intervals: tuple[IntervalEstimate, ...] | None = None,
) -> float:
    """Exact coverage of the exact method at one true difference.

    Sums the mixture PMF over support points whose interval strictly
    contains the true difference.  At +-1 the estimator is a point mass at
    the matching support endpoint, whose interval endpoint equals the true
    difference by construction; coverage is 1.
    """
    level = _as_level(gamma)
    if abs(theta_diff) == 1.0:
        return 1.0
    quad = quad or DEFAULT_QUAD
    if support is None:
        support = enumerate_support(design)
    if intervals is None:
        intervals = exact_method_intervals(design, level, quad, root, support)
    lowers = np.array([iv.lower for iv in intervals])
    uppers = np.array([iv.upper for iv in intervals])
    dist = MixtureDistribution(design, theta_diff, quad)
    pmf = support_pmf(dist, support)
    keep = (lowers < theta_diff) & (theta_diff < uppers)
    return float(pmf[keep].sum())


def classical_lattice_intervals(
    design: Design,
    gamma,
    method: MethodId,
    truncated: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Endpoint arrays of a classical interval over the whole count lattice.

    Counts at which the method is undefined (the fully degenerate corners of
    the Edgeworth intervals) get an empty interval, so those outcomes never
    cover; the method's failure is charged against its coverage.
    """
    from .classical import truncate as _truncate
    from .errors import DegenerateCountsError

    level = _as_level(gamma)
    n1, n2 = design.n1, design.n2
    lo = np.empty((n1 + 1, n2 + 1))
    hi = np.empty((n1 + 1, n2 + 1))
    for x1 in range(n1 + 1):
        for x2 in range(n2 + 1):
            try:
                iv = classical_interval(method, Counts(x1, x2, design), level)
            except DegenerateCountsError:
                lo[x1, x2], hi[x1, x2] = np.inf, -np.inf
                continue
            if truncated:
                iv = _truncate(iv)
            lo[x1, x2] = iv.lower
            hi[x1, x2] = iv.upper
    return lo, hi


def lattice_coverage(
    design: Design,
    theta_diff: float,
    member: np.ndarray,
    quad: QuadratureSpec | None = None,
) -> float:
    """Average over the nuisance parameter of the lattice probability mass
    landing on pairs whose interval covers the true difference."""
    if not -1.0 < theta_diff < 1.0:
        raise ValueError(f"theta_diff must lie in (-1, 1), got {theta_diff}")
    quad = quad or DEFAULT_QUAD
    n1, n2 = design.n1, design.n2
    a = max(0.0, theta_diff)
    b = min(1.0, 1.0 + theta_diff)
    weights = member.astype(float)
    logc1 = log_binom_coeffs(n1)
    logc2 = log_binom_coeffs(n2)

    def integrand(theta1: float) -> float:
        p1 = pmf_vector(n1, theta1, logc1)
        p2 = pmf_vector(n2, min(max(theta1 - theta_diff, 0.0), 1.0), logc2)
        return float(p1 @ (weights @ p2))

    value = float(_integrate(integrand, a, b, quad)) / (b - a)
    return min(max(value, 0.0), 1.0)


def coverage_classical_method(
    design: Design,
    gamma,
    method: MethodId,
    theta_diff: float,
    truncated: bool = False,
    quad: QuadratureSpec | None = None,
    intervals: tuple[np.ndarray, np.ndarray] | None = None,
) -> float:
    """Exact coverage of a classical method at one true difference.

    Interval membership uses closed endpoints; off-grid differences tie with
    probability zero and on-grid ties resolve toward coverage.
    """
    level = _as_level(gamma)
    if method is MethodId.M:
        raise ValueError("use coverage_exact_method for the exact method")
    if intervals is None:
        intervals = classical_lattice_intervals(design, level, method, truncated)
    lo, hi = intervals
    member = (lo <= theta_diff) & (theta_diff <= hi)
    return lattice_coverage(design, theta_diff, member, quad)


def _grid(grid_step: float) -> list[float]:
    if not 0.0 < grid_step <= 0.5:
        raise ValueError(f"grid step must lie in (0, 0.5], got {grid_step}")
    count = int(2.0 / grid_step + 1e-9)
    thetas = [round(-1.0 + i * grid_step, 12) for i in range(count + 1)]
    return [min(t, 1.0) for t in thetas]


def _resolve_workers(workers: int | None, njobs: int) -> int:
    if workers is None:
        workers = int(os.environ.get("DIFFPROP_THREADS", "0") or "0")
    if workers < 0:
        raise ValueError(f"worker count must be >= 0, got {workers}")
    if workers == 0:
        workers = (os.cpu_count() or 1) if njobs >= 64 else 1
    return max(1, min(workers, njobs))


def _exact_point(job) -> float:
    n1, n2, qa, qr, qm, theta, lowers, uppers = job
    design = Design(n1, n2)
    quad = QuadratureSpec(qa, qr, qm)
    if abs(theta) == 1.0:
        return 1.0
    support = enumerate_support(design)
    dist = MixtureDistribution(design, theta, quad)
    pmf = support_pmf(dist, support)
    keep = (lowers < theta) & (theta < uppers)
    return float(pmf[keep].sum())


def _classical_point(job) -> float:
    n1, n2, qa, qr, qm, theta, lo, hi = job
    design = Design(n1, n2)
    quad = QuadratureSpec(qa, qr, qm)
    if abs(theta) == 1.0:
        x1, x2 = (n1, 0) if theta > 0 else (0, n2)
        return 1.0 if lo[x1, x2] <= theta <= hi[x1, x2] else 0.0
    member = (lo <= theta) & (theta <= hi)
    return lattice_coverage(design, theta, member, quad)


def coverage_curve(
    design: Design,
    gamma,
    method: MethodId,
    grid_step: float,
    truncated: bool = False,
    quad: QuadratureSpec | None = None,
    root: RootSpec | None = None,
    workers: int | None = None,
) -> CoverageCurve:
    """Coverage curve of a method over the grid -1, -1+step, ..., 1.

    Grid points are independent; with more than one worker they run in a
    process pool, assembled back in grid order so output is deterministic.
    """
    level = _as_level(gamma)
    quad = quad or DEFAULT_QUAD
    thetas = _grid(grid_step)
    qtuple = (quad.abs_tol, quad.rel_tol, quad.max_subdivisions)

    if method is MethodId.M:
        support = enumerate_support(design)
        intervals = exact_method_intervals(design, level, quad, root or DEFAULT_ROOT,
                                           support)
        lowers = np.array([iv.lower for iv in intervals])
        uppers = np.array([iv.upper for iv in intervals])
        point_fn = _exact_point
        jobs = [(design.n1, design.n2, *qtuple, t, lowers, uppers) for t in thetas]
    else:
        lo, hi = classical_lattice_intervals(design, level, method, truncated)
        point_fn = _classical_point
        jobs = [(design.n1, design.n2, *qtuple, t, lo, hi) for t in thetas]

    nworkers = _resolve_workers(workers, len(jobs))
    if nworkers > 1:
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            chunk = max(1, len(jobs) // (nworkers * 4))
            values = list(pool.map(point_fn, jobs, chunksize=chunk))
    else:
        values = [point_fn(job) for job in jobs]

    return CoverageCurve(method, design, level, tuple(zip(thetas, values)))
