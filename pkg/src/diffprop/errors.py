"""Shared exception types."""


class DegenerateModelError(ValueError):
    """The mixture model is a point mass (theta_diff = +-1); callers must
    handle that limit analytically."""


class DegenerateCountsError(ValueError):
    """Both groups have zero estimated variance (x_i in {0, n_i} for i=1,2)."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not converge within the subdivision budget.

    Carries the best available estimate and its error bound.
    """

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class RootFindingError(RuntimeError):
    """Bracketing failed; for valid inputs this signals a quadrature problem."""
