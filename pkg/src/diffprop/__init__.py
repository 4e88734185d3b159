"""Confidence intervals for the difference of two binomial proportions.

An exact interval built on the mixture distribution of the observed
difference, the classical large-sample intervals, exact coverage analysis
for all of them, and optimal sample allocation.
"""

from .allocation import AllocationPlan, mixture_variance, optimal_allocation
from .binomial import (
    BinomialParams,
    ConfidenceLevel,
    binom_cdf_fuzzed,
    binom_pmf,
    normal_quantile,
)
from .classical import (
    Counts,
    ci_k1,
    ci_k2,
    ci_k2_prime,
    ci_k3,
    ci_k4,
    ci_k5,
    ci_k6,
    ci_k7,
    ci_mee_anbar,
    classical_interval,
    truncate,
    wilson_bounds,
)
from .coverage import (
    CoverageCurve,
    classical_lattice_intervals,
    coverage_classical_method,
    coverage_curve,
    coverage_exact_method,
    exact_method_intervals,
    lattice_coverage,
)
from .errors import (
    DegenerateCountsError,
    DegenerateModelError,
    QuadratureError,
    RootFindingError,
)
from .exact import RootSpec, exact_interval
from .intervals import CLASSICAL_METHODS, IntervalEstimate, MethodId
from .model import (
    Design,
    DiffSupport,
    MixtureDistribution,
    QuadratureSpec,
    SupportPoint,
    enumerate_support,
    mixture_cdf,
    mixture_pmf,
    support_pmf,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationPlan",
    "BinomialParams",
    "CLASSICAL_METHODS",
    "ConfidenceLevel",
    "Counts",
    "CoverageCurve",
    "DegenerateCountsError",
    "DegenerateModelError",
    "Design",
    "DiffSupport",
    "IntervalEstimate",
    "MethodId",
    "MixtureDistribution",
    "QuadratureError",
    "QuadratureSpec",
    "RootFindingError",
    "RootSpec",
    "SupportPoint",
    "binom_cdf_fuzzed",
    "binom_pmf",
    "ci_k1",
    "ci_k2",
    "ci_k2_prime",
    "ci_k3",
    "ci_k4",
    "ci_k5",
    "ci_k6",
    "ci_k7",
    "ci_mee_anbar",
    "classical_interval",
    "classical_lattice_intervals",
    "coverage_classical_method",
    "coverage_curve",
    "coverage_exact_method",
    "enumerate_support",
    "exact_interval",
    "exact_method_intervals",
    "lattice_coverage",
    "mixture_cdf",
    "mixture_pmf",
    "mixture_variance",
    "normal_quantile",
    "optimal_allocation",
    "support_pmf",
    "truncate",
    "wilson_bounds",
]
