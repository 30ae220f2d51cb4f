"""Exception taxonomy shared across the package.

The CLI maps these onto process exit codes, so every raise site should pick
the subclass that matches what actually went wrong.
"""


class QadvError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ValidationError(QadvError):
    """Input violates a structural contract (shape, Hermiticity, trace, ...)."""

    exit_code = 2


class DomainError(ValidationError):
    """Input is structurally fine but outside the mathematical domain."""

    exit_code = 2


class CapExceededError(QadvError):
    """A hard finite-size cap would be exceeded; we refuse rather than truncate."""

    exit_code = 3


class ConvergenceError(QadvError):
    """An iterative solver finished without meeting its certificate."""

    exit_code = 4
