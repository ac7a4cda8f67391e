"""Exception hierarchy shared by all modules."""


class FraczetaError(Exception):
    """Base class for library errors."""


class InvalidInputError(FraczetaError, ValueError):
    """Malformed or inconsistent input."""


class DegenerateMeasureError(FraczetaError):
    """A relative tolerance was requested against a zero-mass measure."""


class DivergentAbscissaError(FraczetaError):
    """The requested s lies on or left of the abscissa of convergence."""

    def __init__(self, message, dimension=None):
        super().__init__(message)
        self.dimension = dimension


class NearPoleError(FraczetaError):
    """Evaluation point too close to a pole of a closed form."""

    def __init__(self, message, pole=None):
        super().__init__(message)
        self.pole = pole


class AccuracyError(FraczetaError):
    """Quadrature did not reach the requested accuracy."""

    def __init__(self, message, estimate=None, err=None):
        super().__init__(message)
        self.estimate = estimate
        self.err = err


class EmptySupportError(FraczetaError):
    """A vector state puts no weight on any eigenvalue."""


class UnsupportedTransformError(FraczetaError):
    """Transformation not covered by the invariance rules."""


class SeparationViolatedError(FraczetaError):
    """A claimed support separation does not hold numerically."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ContourFailureError(FraczetaError):
    """Non-finite samples on a residue contour."""
