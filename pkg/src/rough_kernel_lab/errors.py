"""Exception types shared across the package."""


class RoughKernelError(Exception):
    """Base class for all package-specific errors."""


class InvalidArgumentError(RoughKernelError, ValueError):
    """An argument is outside its documented domain."""


class UnsupportedDimensionError(InvalidArgumentError):
    """Requested ambient dimension is not supported."""


class ConstructionError(RoughKernelError, ValueError):
    """An object cannot be built from the supplied data."""


class DomainError(RoughKernelError, ValueError):
    """Evaluation requested at a point outside the mathematical domain."""


class EvaluationError(RoughKernelError, RuntimeError):
    """A function produced a non-finite value during quadrature.

    Carries the offending evaluation point in ``point``.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class DivergenceError(RoughKernelError, ArithmeticError):
    """An improper integral failed to converge under refinement."""


class NoConvergenceError(RoughKernelError, ArithmeticError):
    """A truncation sequence is not Cauchy.

    Carries the sequence of truncated values in ``values``.
    """

    def __init__(self, message, values=None):
        super().__init__(message)
        self.values = values


class InsufficientDataError(RoughKernelError, ValueError):
    """A sampled curve is too sparse for the requested computation."""


class InsufficientBudgetError(InvalidArgumentError):
    """The sampling budget is below the supported minimum."""


class UnreliableEstimateError(RoughKernelError, RuntimeError):
    """Too many operator evaluations failed inside a Monte Carlo estimate."""


class DegenerateKernelError(InvalidArgumentError):
    """The kernel has zero L1 norm where a positive norm is required."""


class NotInFarFieldError(InvalidArgumentError):
    """The evaluation point is inside the support of the measure."""
