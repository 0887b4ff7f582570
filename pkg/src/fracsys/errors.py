"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain a routine is certified for."""


class NonConvergenceError(ArithmeticError):
    """A series evaluation stopped before its convergence rule fired.

    Raised when the term budget is exhausted, or when cancellation has
    destroyed so much precision that the result cannot be certified.
    """


class GridResolutionWarning(UserWarning):
    """A discretized derivative changed too much under grid refinement."""
