"""Exception types raised across the package."""


class DqdcError(Exception):
    """Base class for all package errors."""


class DimensionError(DqdcError, ValueError):
    """Operand shapes do not conform."""


class DomainError(DqdcError, ValueError):
    """A value lies outside the domain of an elementwise function."""


class ArgumentError(DqdcError, ValueError):
    """Invalid construction argument (grid size, order, rule id...)."""


class SingularMatrixError(DqdcError, ArithmeticError):
    """Linear system is numerically singular."""


class DivergenceError(DqdcError, RuntimeError):
    """Newton iteration failed to converge.

    The partially filled report is kept on ``self.report`` so callers can
    still serialize the residual history.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class IntegrationError(DqdcError, RuntimeError):
    """Time integration produced a non-finite state or too many steps."""
