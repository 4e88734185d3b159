"""The exact confidence interval for the difference of two proportions.

Endpoints solve the two tail equations of the mixture model: the lower
endpoint is the true difference at which the strict lower-tail probability of
the observed value equals (1 + gamma)/2, the upper endpoint the one at which
the inclusive lower-tail probability equals (1 - gamma)/2.  The mixture CDF
is monotone in the true difference, so each root is found by bracketed
Brent iteration.
"""

from __future__ import annotations

from dataclasses import dataclass

from scipy.optimize import brentq

from .binomial import ConfidenceLevel
from .errors import RootFindingError
from .intervals import IntervalEstimate, MethodId
from .model import DEFAULT_QUAD, Design, MixtureDistribution, QuadratureSpec, mixture_cdf


@dataclass(frozen=True, slots=True)
class RootSpec:
    """Solver tolerances for the two tail equations."""

    x_tol: float = 1e-8
    f_tol: float = 1e-9
    max_iter: int = 200
    edge_eps: float = 1e-9

    def __post_init__(self):
        if min(self.x_tol, self.f_tol, self.edge_eps) <= 0 or self.max_iter < 1:
            raise ValueError("root-finding tolerances must be positive")


DEFAULT_ROOT = RootSpec()


def _as_level(gamma) -> ConfidenceLevel:
    return gamma if isinstance(gamma, ConfidenceLevel) else ConfidenceLevel(float(gamma))


def _solve_tail(
    design: Design,
    u: float,
    target: float,
    strict: bool,
    lo: float,
    hi: float,
    quad: QuadratureSpec,
    root: RootSpec,
) -> float:
    def f(theta: float) -> float:
        dist = MixtureDistribution(design, theta, quad)
        return mixture_cdf(dist, u, strict=strict) - target

    f_lo, f_hi = f(lo), f(hi)
    if abs(f_lo) <= root.f_tol:
        return lo
    if abs(f_hi) <= root.f_tol:
        return hi
    if f_lo * f_hi > 0.0:
        raise RootFindingError(
            f"no sign change on [{lo}, {hi}] for u={u}, target={target} "
            f"(f={f_lo:.3e}..{f_hi:.3e}); suspect quadrature failure"
        )
    return float(brentq(f, lo, hi, xtol=root.x_tol, maxiter=root.max_iter))


def exact_interval(
    design: Design,
    u: float,
    gamma,
    quad: QuadratureSpec | None = None,
    root: RootSpec | None = None,
) -> IntervalEstimate:
    """Exact two-sided interval for the difference given the observed value u.

    Negative u is reduced to |u| and the solved endpoints are negated and
    swapped, which is exact because flipping successes and failures within
    each group reflects the model; for the same reason a zero observation
    yields an interval symmetric about zero, so its lower endpoint is the
    mirrored upper one.  At u = -1 the lower endpoint is -1 by definition,
    at u = +1 the upper endpoint is +1.
    """
    level = _as_level(gamma)
    quad = quad or DEFAULT_QUAD
    root = root or DEFAULT_ROOT
    if not -1.0 <= u <= 1.0:
        raise ValueError(f"observed difference must lie in [-1, 1], got {u}")

    if u < 0.0:
        flipped = exact_interval(design, -u, level, quad, root)
        return IntervalEstimate(-flipped.upper, -flipped.lower, level, MethodId.M)

    eps = root.edge_eps
    if u == 1.0:
        upper = 1.0
    else:
        upper = _solve_tail(
            design, u, (1.0 - level.gamma) / 2.0, strict=False,
            lo=max(u, -1.0 + eps), hi=1.0 - eps, quad=quad, root=root,
        )
    if u == 0.0:
        lower = -upper
    else:
        lower = _solve_tail(
            design, u, (1.0 + level.gamma) / 2.0, strict=True,
            lo=-1.0 + eps, hi=min(u, 1.0 - eps), quad=quad, root=root,
        )
    return IntervalEstimate(lower, upper, level, MethodId.M)
