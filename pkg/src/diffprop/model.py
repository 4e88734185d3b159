"""Statistical model of the observed difference of two sample proportions.

For a design (n1, n2) the estimator takes values on the finite grid
{k1/n1 - k2/n2}; for a given true difference t in (-1, 1) its distribution is
the average, over the nuisance success probability of group 1 ranging
uniformly in (a(t), b(t)) = (max(0, t), min(1, 1 + t)), of the product of the
two binomial laws.  This module enumerates the grid exactly (integer
numerators over n1*n2) and evaluates the mixture CDF/PMF by adaptive
Gauss-Kronrod quadrature over the nuisance parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad_vec
from scipy.special import bdtr

from .binomial import CDF_FUZZ, log_binom_coeffs, pmf_vector
from .errors import DegenerateModelError, QuadratureError


@dataclass(frozen=True, slots=True)
class Design:
    """Pair of trial counts defining the outcome lattice."""

    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError(f"trial counts must be >= 1, got ({self.n1}, {self.n2})")


@dataclass(frozen=True, slots=True)
class SupportPoint:
    """One attainable value of the difference, as the exact rational
    numerator/(n1*n2) plus the lattice pairs attaining it."""

    numerator: int
    denominator: int
    value: float
    witnesses: tuple[tuple[int, int], ...]


@dataclass(frozen=True, slots=True)
class DiffSupport:
    """Sorted distinct attainable values of the difference estimator."""

    design: Design
    points: tuple[SupportPoint, ...]

    def values(self) -> np.ndarray:
        return np.array([pt.value for pt in self.points])

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True, slots=True)
class QuadratureSpec:
    """Tolerances and subdivision budget for the nuisance-parameter integral."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 200

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_QUAD = QuadratureSpec()


@dataclass(frozen=True, slots=True)
class MixtureDistribution:
    """Distribution of the difference estimator at a given true difference."""

    design: Design
    theta_diff: float
    quad: QuadratureSpec = field(default=DEFAULT_QUAD)

    def __post_init__(self):
        if not -1.0 <= self.theta_diff <= 1.0:
            raise ValueError(f"theta_diff must lie in [-1, 1], got {self.theta_diff}")

    @property
    def a(self) -> float:
        return max(0.0, self.theta_diff)

    @property
    def b(self) -> float:
        return min(1.0, 1.0 + self.theta_diff)

    @property
    def length(self) -> float:
        return self.b - self.a


def enumerate_support(design: Design) -> DiffSupport:
    """Brute-force scan of all (n1+1)(n2+1) lattice pairs, grouped by the
    integer numerator k1*n2 - k2*n1 so equal values collide exactly."""
    n1, n2 = design.n1, design.n2
    by_num: dict[int, list[tuple[int, int]]] = {}
    for k1 in range(n1 + 1):
        base = k1 * n2
        for k2 in range(n2 + 1):
            by_num.setdefault(base - k2 * n1, []).append((k1, k2))
    denom = n1 * n2
    points = tuple(
        SupportPoint(num, denom, num / denom, tuple(by_num[num]))
        for num in sorted(by_num)
    )
    return DiffSupport(design, points)


def lattice_index(support: DiffSupport) -> np.ndarray:
    """(n1+1, n2+1) array mapping each lattice pair to its support position."""
    n1, n2 = support.design.n1, support.design.n2
    pos = {pt.numerator: i for i, pt in enumerate(support.points)}
    idx = np.empty((n1 + 1, n2 + 1), dtype=np.intp)
    for k1 in range(n1 + 1):
        base = k1 * n2
        for k2 in range(n2 + 1):
            idx[k1, k2] = pos[base - k2 * n1]
    return idx


def _require_interior(dist: MixtureDistribution):
    if abs(dist.theta_diff) >= 1.0:
        raise DegenerateModelError(
            f"theta_diff = {dist.theta_diff} is a point mass; the mixture "
            "average is undefined there"
        )


def _integrate(f, a: float, b: float, quad: QuadratureSpec) -> np.ndarray:
    res, err, info = quad_vec(
        f, a, b,
        epsabs=quad.abs_tol, epsrel=quad.rel_tol,
        limit=quad.max_subdivisions, norm="max",
        quadrature="gk15", full_output=True,
    )
    if not info.success:
        raise QuadratureError(
            f"quadrature did not converge within {quad.max_subdivisions} "
            f"subdivisions (error bound {err:.3e})",
            estimate=res, error_bound=err,
        )
    return res


def mixture_cdf(dist: MixtureDistribution, u: float, strict: bool = False) -> float:
    """P(difference <= u), or with `strict` the on-grid P(difference < u).

    The strict variant offsets the inner lower-tail argument by one, the
    tail-probability convention under which both variants floor their
    (fuzzed) argument; for off-grid u the non-strict variant is exact and the
    strict one steps one lattice unit of group 1 below.
    """
    _require_interior(dist)
    n1, n2 = dist.design.n1, dist.design.n2
    theta = dist.theta_diff
    lq = 1.0 if strict else 0.0

    k = np.arange(n2 + 1)
    j = np.floor(n1 * (u + k / n2) - lq + CDF_FUZZ)
    ones = j >= n1
    zeros = j < 0
    mid = ~(ones | zeros)
    j_mid = j[mid]
    logc2 = log_binom_coeffs(n2)

    def integrand(theta1: float) -> float:
        theta2 = min(max(theta1 - theta, 0.0), 1.0)
        p2 = pmf_vector(n2, theta2, logc2)
        cdf1 = np.empty(n2 + 1)
        cdf1[ones] = 1.0
        cdf1[zeros] = 0.0
        if j_mid.size:
            cdf1[mid] = bdtr(j_mid, n1, theta1)
        return float(cdf1 @ p2)

    value = _integrate(integrand, dist.a, dist.b, dist.quad) / dist.length
    return float(min(max(value, 0.0), 1.0))


def mixture_pmf(dist: MixtureDistribution, point: SupportPoint) -> float:
    """P(difference = u) for a support point, via the witness-sum integral."""
    _require_interior(dist)
    n1, n2 = dist.design.n1, dist.design.n2
    theta = dist.theta_diff
    k1s = np.array([w[0] for w in point.witnesses])
    k2s = np.array([w[1] for w in point.witnesses])
    logc1 = log_binom_coeffs(n1)
    logc2 = log_binom_coeffs(n2)

    def integrand(theta1: float) -> float:
        theta2 = min(max(theta1 - theta, 0.0), 1.0)
        p1 = pmf_vector(n1, theta1, logc1)
        p2 = pmf_vector(n2, theta2, logc2)
        return float(np.sum(p1[k1s] * p2[k2s]))

    value = _integrate(integrand, dist.a, dist.b, dist.quad) / dist.length
    return float(min(max(value, 0.0), 1.0))


def support_pmf(
    dist: MixtureDistribution,
    support: DiffSupport,
    idx: np.ndarray | None = None,
) -> np.ndarray:
    """PMF over the whole support in one vector-valued quadrature pass.

    Equivalent to calling mixture_pmf per point; the grouped outer product
    shares the binomial tables across points.
    """
    _require_interior(dist)
    n1, n2 = dist.design.n1, dist.design.n2
    theta = dist.theta_diff
    if idx is None:
        idx = lattice_index(support)
    idx_flat = idx.ravel()
    npts = len(support.points)
    logc1 = log_binom_coeffs(n1)
    logc2 = log_binom_coeffs(n2)

    def integrand(theta1: float) -> np.ndarray:
        theta2 = min(max(theta1 - theta, 0.0), 1.0)
        p1 = pmf_vector(n1, theta1, logc1)
        p2 = pmf_vector(n2, theta2, logc2)
        return np.bincount(idx_flat, weights=np.outer(p1, p2).ravel(), minlength=npts)

    vec = _integrate(integrand, dist.a, dist.b, dist.quad) / dist.length
    return np.clip(vec, 0.0, 1.0)
