"""Classical large-sample confidence intervals for a difference of proportions.

Implements the usual Wald-type intervals (pooled and unpooled), the Mee-Anbar
form and its Miettinen-Nurminen inflation, the continuity-corrected Wald
interval, Beal's Haldane and Jeffreys-Perks intervals, Newcombe-style hybrid
score intervals from Wilson bounds (plain and continuity-corrected), and the
two Edgeworth-expansion intervals of Zhou, Tsao and Qin.  Endpoints are
reported untruncated; clamping to [-1, 1] is the explicit `truncate` step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .binomial import ConfidenceLevel
from .errors import DegenerateCountsError
from .intervals import IntervalEstimate, MethodId
from .model import Design

K7_FALLBACK_THRESHOLD = 1e-8


@dataclass(frozen=True, slots=True)
class Counts:
    """Observed success counts for the two groups of a design."""

    x1: int
    x2: int
    design: Design

    def __post_init__(self):
        if not 0 <= self.x1 <= self.design.n1:
            raise ValueError(f"x1={self.x1} outside 0..{self.design.n1}")
        if not 0 <= self.x2 <= self.design.n2:
            raise ValueError(f"x2={self.x2} outside 0..{self.design.n2}")

    @property
    def theta1_hat(self) -> float:
        return self.x1 / self.design.n1

    @property
    def theta2_hat(self) -> float:
        return self.x2 / self.design.n2

    @property
    def theta_hat(self) -> float:
        return self.theta1_hat - self.theta2_hat


def _as_level(gamma) -> ConfidenceLevel:
    return gamma if isinstance(gamma, ConfidenceLevel) else ConfidenceLevel(float(gamma))


def _wald(c: Counts, level: ConfidenceLevel, radius: float, method: MethodId,
          note: str | None = None) -> IntervalEstimate:
    center = c.theta_hat
    return IntervalEstimate(center - radius, center + radius, level, method, note=note)


def ci_k1(c: Counts, gamma) -> IntervalEstimate:
    """Pooled-variance interval from the equal-proportions test statistic."""
    level = _as_level(gamma)
    n1, n2 = c.design.n1, c.design.n2
    pooled = (c.x1 + c.x2) / (n1 + n2)
    radius = level.z * math.sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2))
    return _wald(c, level, radius, MethodId.K1)


def ci_k2(c: Counts, gamma) -> IntervalEstimate:
    """Unpooled Wald interval from the de Moivre-Laplace approximation."""
    level = _as_level(gamma)
    n1, n2 = c.design.n1, c.design.n2
    t1, t2 = c.theta1_hat, c.theta2_hat
    radius = level.z * math.sqrt(t1 * (1.0 - t1) / n1 + t2 * (1.0 - t2) / n2)
    return _wald(c, level, radius, MethodId.K2)


def _mee_anbar_variance(c: Counts) -> float:
    psi = (c.theta1_hat + c.theta2_hat) / 2.0
    th = c.theta_hat
    n1, n2 = c.design.n1, c.design.n2
    return ((psi + th / 2.0) * (1.0 - psi - th / 2.0) / n1
            + (psi - th / 2.0) * (1.0 - psi + th / 2.0) / n2)


def ci_mee_anbar(c: Counts, gamma) -> IntervalEstimate:
    """Mee-Anbar re-expression of the unpooled Wald interval; algebraically
    identical to ci_k2 and kept as a cross-check."""
    level = _as_level(gamma)
    radius = level.z * math.sqrt(max(_mee_anbar_variance(c), 0.0))
    return _wald(c, level, radius, MethodId.MEE_ANBAR)


def ci_k2_prime(c: Counts, gamma) -> IntervalEstimate:
    """Miettinen-Nurminen small-sample inflation of the Mee-Anbar interval."""
    level = _as_level(gamma)
    n = c.design.n1 + c.design.n2
    radius = level.z * math.sqrt(max(_mee_anbar_variance(c), 0.0) * n / (n - 1))
    return _wald(c, level, radius, MethodId.K2_PRIME)


def ci_k3(c: Counts, gamma) -> IntervalEstimate:
    """Continuity-corrected Wald interval (Fleiss); the correction term sits
    inside the square root."""
    level = _as_level(gamma)
    n1, n2 = c.design.n1, c.design.n2
    radius = level.z * math.sqrt(
        c.x1 * (n1 - c.x1) / n1**3
        + c.x2 * (n2 - c.x2) / n2**3
        + 0.5 * (1.0 / n1 + 1.0 / n2)
    )
    return _wald(c, level, radius, MethodId.K3)


K4Variant = Literal["haldane", "jeffreys-perks"]


def ci_k4(c: Counts, gamma, variant: K4Variant = "haldane") -> IntervalEstimate:
    """Beal's interval, Haldane or Jeffreys-Perks flavour.

    The center keeps the observed difference and adds the shrunken skew
    correction z^2*nu*(1-2*psi)/(1+z^2*u); only the correction term is
    divided by 1+z^2*u (this reproduces the reference values for equal
    sample sizes, where the correction vanishes).
    """
    level = _as_level(gamma)
    n1, n2 = c.design.n1, c.design.n2
    z2 = level.z**2
    th = c.theta_hat
    u_b = 0.25 * (1.0 / n1 + 1.0 / n2)
    nu = 0.25 * (1.0 / n1 - 1.0 / n2)
    if variant == "haldane":
        psi = (c.theta1_hat + c.theta2_hat) / 2.0
        method = MethodId.K4_HALDANE
    elif variant == "jeffreys-perks":
        psi = ((c.x1 + 0.5) / (n1 + 1) + (c.x2 + 0.5) / (n2 + 1)) / 2.0
        method = MethodId.K4_JEFFREYS_PERKS
    else:
        raise ValueError(f"unknown variant {variant!r}")
    center = th + z2 * nu * (1.0 - 2.0 * psi) / (1.0 + z2 * u_b)
    radicand = (
        u_b * (4.0 * psi * (1.0 - psi) - th * th)
        + 2.0 * nu * (1.0 - 2.0 * psi) * th
        + 4.0 * z2 * u_b * u_b * (1.0 - psi) * psi
        + z2 * nu * nu * (1.0 - 2.0 * psi) ** 2
    )
    note = None
    if radicand < 0.0:
        radicand = 0.0
        note = "radicand-clipped"
    w = level.z / (1.0 + z2 * u_b) * math.sqrt(radicand)
    return IntervalEstimate(center - w, center + w, level, method, note=note)


def wilson_bounds(x: int, n: int, z: float, corrected: bool = False) -> tuple[float, float]:
    """Score bounds for a single proportion.

    Roots of |p_hat - p| = z*sqrt(p(1-p)/n); the corrected variant shifts
    p_hat by -+ 1/(2n) before solving and clamps to [0, 1].  Bounds are
    forced to 0 at x = 0 and to 1 at x = n.
    """
    p_hat = x / n
    z2 = z * z

    def roots(center: float) -> tuple[float, float]:
        disc = z2 + 4.0 * n * center * (1.0 - center)
        disc = math.sqrt(max(disc, 0.0))
        lo = (2.0 * n * center + z2 - z * disc) / (2.0 * (n + z2))
        hi = (2.0 * n * center + z2 + z * disc) / (2.0 * (n + z2))
        return lo, hi

    if corrected:
        lower = roots(p_hat - 0.5 / n)[0]
        upper = roots(p_hat + 0.5 / n)[1]
        lower = min(max(lower, 0.0), 1.0)
        upper = min(max(upper, 0.0), 1.0)
    else:
        lower, upper = roots(p_hat)
    if x == 0:
        lower = 0.0
    if x == n:
        upper = 1.0
    return lower, upper


def ci_k5(c: Counts, gamma, corrected: bool = False) -> IntervalEstimate:
    """Hybrid score interval built from per-group Wilson bounds."""
    level = _as_level(gamma)
    z = level.z
    n1, n2 = c.design.n1, c.design.n2
    l1, u1 = wilson_bounds(c.x1, n1, z, corrected)
    l2, u2 = wilson_bounds(c.x2, n2, z, corrected)
    th = c.theta_hat
    delta_12 = z * math.sqrt(l1 * (1.0 - l1) / n1 + u2 * (1.0 - u2) / n2)
    delta_21 = z * math.sqrt(l2 * (1.0 - l2) / n2 + u1 * (1.0 - u1) / n1)
    method = MethodId.K5_FLEISS if corrected else MethodId.K5_WILSON
    return IntervalEstimate(th - delta_12, th + delta_21, level, method)


def _edgeworth_coeffs(c: Counts) -> tuple[float, float, float, float]:
    """(n, sigma, a, b) of the Edgeworth expansion; group-1 skew only in b,
    as the expansion is stated."""
    n1, n2 = c.design.n1, c.design.n2
    x1, x2 = c.x1, c.x2
    n = n1 + n2
    var = x1 * (n1 - x1) / n1**3 + x2 * (n2 - x2) / n2**3
    if var <= 0.0:
        raise DegenerateCountsError(
            "both groups are degenerate (all successes or all failures); "
            "the studentized expansion is undefined"
        )
    sigma = math.sqrt(n) * math.sqrt(var)
    delta = ((n / n1) ** 2 * x1 * (n1 - x1) * (n1 - 2 * x1) / n1**3
             - (n / n2) ** 2 * x2 * (n2 - x2) * (n2 - 2 * x2) / n2**3)
    a = delta / (6.0 * sigma * sigma)
    b = n * (n1 - 2 * x1) / (2.0 * n1 * n1) - a
    return n, sigma, a, b


def ci_k6(c: Counts, gamma) -> IntervalEstimate:
    """First Edgeworth-expansion interval of Zhou et al."""
    level = _as_level(gamma)
    z = level.z
    n, sigma, a, b = _edgeworth_coeffs(c)
    sqrt_n = math.sqrt(n)
    q_z = (a + b * z * z) / sigma
    th = c.theta_hat
    scale = sigma / sqrt_n
    return IntervalEstimate(
        th - scale * (z - q_z / sqrt_n),
        th + scale * (z + q_z / sqrt_n),
        level, MethodId.K6,
    )


def ci_k7(c: Counts, gamma) -> IntervalEstimate:
    """Second Edgeworth-expansion interval (monotone transformation).

    The transformation has a removable singularity as b*sigma -> 0; below
    the threshold the first-expansion interval is returned with a note.
    """
    level = _as_level(gamma)
    z = level.z
    n, sigma, a, b = _edgeworth_coeffs(c)
    bs = b * sigma
    if abs(bs) < K7_FALLBACK_THRESHOLD:
        k6 = ci_k6(c, level)
        return IntervalEstimate(k6.lower, k6.upper, level, MethodId.K7,
                                note="k6-fallback")
    sqrt_n = math.sqrt(n)

    def g_inv(t: float) -> float:
        radicand = 1.0 + 3.0 * bs * (t / sqrt_n - a * sigma / n)
        return sqrt_n / bs * (math.copysign(abs(radicand) ** (1.0 / 3.0), radicand) - 1.0)

    th = c.theta_hat
    scale = sigma / sqrt_n
    return IntervalEstimate(th - scale * g_inv(z), th - scale * g_inv(-z),
                            level, MethodId.K7)


def truncate(interval: IntervalEstimate) -> IntervalEstimate:
    """Clamp the endpoints to [-1, 1], flagging whether clamping occurred."""
    lower = min(max(interval.lower, -1.0), 1.0)
    upper = min(max(interval.upper, -1.0), 1.0)
    changed = lower != interval.lower or upper != interval.upper
    return IntervalEstimate(lower, upper, interval.gamma, interval.method,
                            truncated=interval.truncated or changed,
                            note=interval.note)


def classical_interval(method: MethodId, c: Counts, gamma) -> IntervalEstimate:
    """Dispatch a classical method tag to its implementation."""
    if method is MethodId.K1:
        return ci_k1(c, gamma)
    if method is MethodId.K2:
        return ci_k2(c, gamma)
    if method is MethodId.MEE_ANBAR:
        return ci_mee_anbar(c, gamma)
    if method is MethodId.K2_PRIME:
        return ci_k2_prime(c, gamma)
    if method is MethodId.K3:
        return ci_k3(c, gamma)
    if method is MethodId.K4_HALDANE:
        return ci_k4(c, gamma, "haldane")
    if method is MethodId.K4_JEFFREYS_PERKS:
        return ci_k4(c, gamma, "jeffreys-perks")
    if method is MethodId.K5_WILSON:
        return ci_k5(c, gamma, corrected=False)
    if method is MethodId.K5_FLEISS:
        return ci_k5(c, gamma, corrected=True)
    if method is MethodId.K6:
        return ci_k6(c, gamma)
    if method is MethodId.K7:
        return ci_k7(c, gamma)
    raise ValueError(f"{method} is not a classical interval method")
