"""Exception types raised by the library."""


class KacError(Exception):
    """Base class for all library errors."""


class UsageError(KacError, ValueError):
    """Invalid arguments: bad indices, dimensions, or shapes."""


class DegenerateInputError(KacError, ValueError):
    """Input for which the requested construction is undefined."""


class ConfigError(KacError, ValueError):
    """Malformed experiment configuration.

    ``key`` names the offending entry when there is one.
    """

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class InvariantViolation(KacError, AssertionError):
    """A runtime-checked mathematical invariant failed."""
