"""Exception hierarchy shared by all modules."""


class MonotoneError(Exception):
    """Base class for library errors."""


class InvalidInput(MonotoneError, ValueError):
    """Malformed arguments: dimension mismatch, negative radius, bad config."""


class NumericalError(MonotoneError, ArithmeticError):
    """An iterative method stopped before meeting its tolerance.

    ``best_bound`` carries the best value reached so far.
    """

    def __init__(self, message, best_bound=None):
        super().__init__(message)
        self.best_bound = best_bound


class ResourceError(MonotoneError):
    """A size budget (grid points, derived constraints) was exceeded."""


class InternalInconsistency(MonotoneError, AssertionError):
    """A check that holds by construction failed; points at a bug."""
