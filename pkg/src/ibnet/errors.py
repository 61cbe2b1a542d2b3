"""Exception types shared across the package."""


class IbnetError(Exception):
    """Base class for all package errors."""


class SchemaError(IbnetError):
    """Malformed input data (bad CSV row, unknown layer, unmapped node)."""


class DegenerateError(IbnetError):
    """A statistic is undefined on this input (zero variance, empty basis,
    too few nodes). Raised instead of returning NaN."""


class InsufficientDataError(IbnetError):
    """Not enough observations / samples to run the requested procedure."""


class InfeasibleError(IbnetError):
    """Constraint sequences that no admissible configuration can satisfy."""


class ConvergenceError(IbnetError):
    """Iterative solver did not reach tolerance within the iteration budget."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
