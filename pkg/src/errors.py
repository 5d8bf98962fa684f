"""Exception hierarchy for programming and argument errors.

Expected protocol outcomes (aborts, failed verifications) are values, see
`src.models.Result`. Exceptions are reserved for calls that should never have
been made: out-of-range arguments, malformed configuration, broken randomness.
"""


class AnonQError(Exception):
    """Base class for all errors raised by this package."""

    pass


class InvalidArgumentError(AnonQError, ValueError):
    """An argument is outside the domain of the operation."""

    pass


class ConfigError(InvalidArgumentError):
    """A configuration value is missing, contradictory or out of range."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


class ProtocolViolationError(AnonQError):
    """A broadcast round was left incomplete (an announcer never spoke)."""

    pass


class ImprobableFailureError(AnonQError):
    """An event of negligible probability happened; the random stream is suspect."""

    pass
