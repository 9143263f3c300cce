"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: configuration/domain problems exit 2,
capability limits exit 3 and I/O problems exit 4.
"""


class WalkShieldError(Exception):
    pass


class GraphParseError(WalkShieldError, ValueError):
    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class EmptyGraphError(WalkShieldError, ValueError):
    pass


class DomainError(WalkShieldError, ValueError):
    pass


class CapabilityError(WalkShieldError):
    """Requested computation exceeds a configured size/work limit."""


class ConvergenceError(WalkShieldError):
    """Power iteration ran out of iterations.

    ``best`` holds the last (value, vector, residual) triple so callers can
    still inspect or use the iterate.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class WalkOverflowError(CapabilityError, OverflowError):
    """An exact walk count would not fit the integer type in use."""
