"""Exception types shared across the package."""


class UnsupportedConfigurationError(ValueError):
    """A request lies outside the domain covered by the analytic model.

    Raised e.g. for position-space amplitudes with a nonzero linear
    potential, for superpositions whose component packets do not share
    width/stretching/center, or for an antisymmetric pair built from
    (numerically) identical one-particle states.
    """


class ErfcRangeError(ArithmeticError):
    """The true erfc value over- or underflows the double range.

    Raised instead of silently saturating to inf or 0.
    """


class BoundaryContaminationError(RuntimeError):
    """Grid propagation reached the absorbing-free edge region.

    The wave function carried more than the allowed density within 10% of
    the grid edges, so the periodic propagation result is untrustworthy.
    """


class QuadratureAccuracyError(RuntimeError):
    """Adaptive quadrature could not certify the requested tolerance.

    Carries the best available estimate and the reported error bound.
    """

    def __init__(self, message, best_estimate, error_estimate):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate
