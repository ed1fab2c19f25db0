"""Exception hierarchy.  Each class maps onto one CLI exit status."""


class QuadZerosError(Exception):
    exit_code = 1


class SchemaError(QuadZerosError, ValueError):
    """Malformed input (problem file, scalar text, polynomial text)."""

    exit_code = 1


class PreconditionError(QuadZerosError, ValueError):
    """The mathematical hypotheses of an operation do not hold."""

    exit_code = 2


class SearchBudgetExceeded(QuadZerosError, RuntimeError):
    """An enumeration ran out of its point budget before reaching a verdict."""

    exit_code = 3


class BoundFailure(QuadZerosError, AssertionError):
    """A certified height bound was violated: a defect in this library.

    ``trail`` carries the witnesses collected up to the failure.
    """

    exit_code = 4

    def __init__(self, message: str, trail=None):
        super().__init__(message)
        self.trail = trail
