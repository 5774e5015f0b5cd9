"""Exception types shared across the package."""


class SubmodoptError(Exception):
    """Base class for all package-specific errors."""


class CapExceeded(SubmodoptError):
    """An exhaustive 2**p enumeration was requested beyond the configured cap."""


class NumericalInconsistency(SubmodoptError):
    """Two redundant computations disagreed beyond tolerance.

    Usually means a grouping or membership tolerance was too loose or too
    tight for the data at hand.
    """


class NoConvergence(SubmodoptError):
    """An iterative solver hit its iteration cap before reaching tolerance.

    The best iterate found so far is attached as ``result`` (solver-specific
    object) when available, with its residual gap flagged in the message.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class Unbounded(SubmodoptError):
    """A line search direction never leaves the polyhedron."""


class RecursionOverflow(SubmodoptError):
    """Internal bug guard: the decomposition recursed deeper than p levels."""


class EmptySetNotZero(SubmodoptError, ValueError):
    """A set-function oracle returned a nonzero value on the empty set."""


class NegativeScale(SubmodoptError, ValueError):
    """Scaling a submodular function by a negative factor is not closed."""


class NotConcave(SubmodoptError, ValueError):
    """A cardinality-based profile has increasing increments."""


class NotZeroAtZero(SubmodoptError, ValueError):
    """A concave profile does not satisfy g(0) = 0."""


class NotPositiveDefinite(SubmodoptError, ValueError):
    """A matrix expected to be positive definite failed factorization."""


class MonotonicityRequired(SubmodoptError, ValueError):
    """An operation restricted to non-decreasing functions got evidence of decrease."""
