"""Exception hierarchy shared by all taylorsl modules."""


class TaylorSLError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(TaylorSLError, ValueError):
    """Invalid parameters or inputs."""


class SeriesMismatchError(ValidationError):
    """Two series with different order or origin were combined."""


class SingularityError(TaylorSLError, ZeroDivisionError):
    """A series (or right-hand side) could not be formed at a point."""

    def __init__(self, message, origin=None):
        super().__init__(message)
        self.origin = origin


class ConvergenceError(TaylorSLError, RuntimeError):
    """An iteration ran out of budget; `best_estimate` holds the last iterate."""

    def __init__(self, message, best_estimate=None, bracket=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.bracket = bracket


class PartialResultError(TaylorSLError, RuntimeError):
    """Fewer eigenvalues than requested were found below the scan ceiling."""

    def __init__(self, message, found=()):
        super().__init__(message)
        self.found = list(found)


class DegenerateSpecError(ValidationError):
    """The jump-well equation is vacuous (equal masses)."""


class NodeAtJunctionError(TaylorSLError, ArithmeticError):
    """The jump eigenfunction has a node at the mass discontinuity."""


class IndefiniteWeightError(ValidationError):
    """The finite-difference weight is not positive at an interior node."""
