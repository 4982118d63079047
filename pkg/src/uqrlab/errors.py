"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A parameter violates an operation's precondition."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of the operation."""


class UnsupportedOperationError(TypeError):
    """The operation is not defined for this kind of object."""


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed its configured budget."""


class ConstructionFailedError(RuntimeError):
    """A geometric construction failed its build-time validation."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
