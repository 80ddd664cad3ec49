"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so each class carries one.
"""


class TasepError(Exception):
    exit_code = 1


class PreconditionError(TasepError, ValueError):
    """An argument violates a documented precondition."""

    exit_code = 2


class DomainError(PreconditionError):
    """Input outside the mathematical domain of an operation."""


class OrderError(PreconditionError):
    """Requested truncation order is not available."""


class SizeLimitError(PreconditionError):
    """Dense exact work requested beyond the supported size cap."""


class InvalidEvaluationPoint(PreconditionError):
    """Evaluation at a pole of a rational operator."""


class NonInvertibleSeriesError(DomainError):
    """Series reversion needs a nonzero linear coefficient."""


class SolverInconsistencyError(TasepError):
    """An overdetermined exact system is rank deficient or inconsistent.

    For the T-Q solvers this would contradict the uniqueness of the
    perturbative solution, so it is reported as a distinct failure.
    """

    exit_code = 3


class ConvergenceError(TasepError):
    """An iterative numerical method did not converge.

    ``best`` holds the last iterate when one is available.
    """

    exit_code = 4

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class InsufficientStatisticsError(TasepError):
    exit_code = 4
