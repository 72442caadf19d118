"""Exception hierarchy shared across the package."""


class DesolveError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(DesolveError, ValueError):
    pass


class UnsupportedOrderError(DesolveError, ValueError):
    pass


class DomainError(DesolveError, ValueError):
    pass


class InvalidConstraintsError(DesolveError, ValueError):
    pass


class NumericError(DesolveError, ArithmeticError):
    """A linear or nonlinear solve failed numerically.

    ``condition`` carries a condition-number estimate when one is available.
    """

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class SingularJacobianError(NumericError):
    pass


class TuningFailure(DesolveError, RuntimeError):
    pass
