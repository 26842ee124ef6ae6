"""Exception types shared across the package."""


class ZeroSumError(Exception):
    """Base class for all package errors."""


class InvalidInput(ZeroSumError, ValueError):
    """An argument violates an operation's precondition."""


class BudgetExceeded(ZeroSumError):
    """A configured size or effort cap was hit."""


class InvariantError(ZeroSumError, AssertionError):
    """An internal self-check failed; indicates a bug, never bad input."""
