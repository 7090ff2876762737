"""Exception types raised across the package."""


class StableDomainError(ValueError):
    """A parameter lies outside the domain where a quantity is defined."""


class DegenerateSampleError(ValueError):
    """All residuals are zero, so scale/shape moments carry no information."""


class TableConstructionError(ValueError):
    """A lookup table failed its strict-monotonicity check."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance.

    The best available estimate and its error bound are kept on the
    exception so callers can decide whether to accept them.
    """

    def __init__(self, message, estimate, error):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class NonFiniteInputError(ValueError):
    """A stream element was NaN or infinite."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class SeriesFormatError(ValueError):
    """An input series could not be parsed; ``line`` is 1-based."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line
