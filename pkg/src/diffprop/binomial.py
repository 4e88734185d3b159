"""Numerically stable binomial and standard-normal primitives.

Everything here is a pure function; the heavy lifting in the mixture model
builds on the vectorized helpers (`log_binom_coeffs`, `pmf_vector`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import bdtr, gammaln

# Additive fuzz applied before flooring a CDF argument.  Observed differences
# arrive as decimals, so arguments like n1*(u + k/n2) that are integers in
# exact arithmetic can land just below the integer in floating point; the
# fuzz keeps them from being floored one step too low.
CDF_FUZZ = 1e-7


@dataclass(frozen=True, slots=True)
class BinomialParams:
    """Trial count and success probability of one binomial distribution."""

    m: int
    p: float

    def __post_init__(self):
        if self.m < 0:
            raise ValueError(f"trial count must be non-negative, got {self.m}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"success probability must lie in [0, 1], got {self.p}")


@dataclass(frozen=True)
class ConfidenceLevel:
    """Confidence level gamma together with the derived two-sided normal quantile."""

    gamma: float

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"confidence level must lie in (0, 1), got {self.gamma}")

    @property
    def z(self) -> float:
        """Standard-normal quantile of order (1 + gamma) / 2."""
        return normal_quantile((1.0 + self.gamma) / 2.0)


@lru_cache(maxsize=128)
def log_binom_coeffs(m: int) -> np.ndarray:
    """log C(m, k) for k = 0..m."""
    k = np.arange(m + 1)
    return gammaln(m + 1) - gammaln(k + 1) - gammaln(m - k + 1)


def pmf_vector(m: int, p: float, log_coeffs: np.ndarray | None = None) -> np.ndarray:
    """Full PMF table (k = 0..m) of Bin(m, p), exact at p in {0, 1}."""
    if log_coeffs is None:
        log_coeffs = log_binom_coeffs(m)
    if p <= 0.0:
        out = np.zeros(m + 1)
        out[0] = 1.0
        return out
    if p >= 1.0:
        out = np.zeros(m + 1)
        out[m] = 1.0
        return out
    k = np.arange(m + 1)
    return np.exp(log_coeffs + k * math.log(p) + (m - k) * math.log1p(-p))


def binom_pmf(params: BinomialParams, k: int) -> float:
    """P(Bin(m, p) = k); zero outside 0 <= k <= m.

    Evaluated through log-gamma so trial counts in the hundreds do not
    overflow or underflow intermediate products.
    """
    m, p = params.m, params.p
    if k < 0 or k > m:
        return 0.0
    if p <= 0.0:
        return 1.0 if k == 0 else 0.0
    if p >= 1.0:
        return 1.0 if k == m else 0.0
    logc = gammaln(m + 1) - gammaln(k + 1) - gammaln(m - k + 1)
    return float(math.exp(logc + k * math.log(p) + (m - k) * math.log1p(-p)))


def binom_cdf_fuzzed(params: BinomialParams, x: float) -> float:
    """P(Bin(m, p) <= floor(x + CDF_FUZZ)).

    Lower-tail probability at a possibly non-integer argument, with a small
    additive fuzz before flooring (see CDF_FUZZ).
    """
    m, p = params.m, params.p
    j = math.floor(x + CDF_FUZZ)
    if j < 0:
        return 0.0
    if j >= m:
        return 1.0
    return float(bdtr(float(j), m, p))


# Acklam's rational approximation to the inverse standard-normal CDF,
# refined below by one Halley step to full double precision.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def _norm_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_quantile(order: float) -> float:
    """Inverse standard-normal CDF, accurate to well below 1e-9.

    Upper-tail orders delegate to the lower tail, where the erfc-based
    refinement keeps full relative precision; antisymmetry is then exact.
    """
    if not 0.0 < order < 1.0:
        raise ValueError(f"quantile order must lie in (0, 1), got {order}")
    if order > 0.5:
        return -normal_quantile(1.0 - order)
    p = order
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        x = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    else:
        q = p - 0.5
        r = q * q
        x = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / \
            (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)
    # one Halley refinement
    err = _norm_cdf(x) - p
    u = err * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
    x -= u / (1.0 + 0.5 * x * u)
    return x
