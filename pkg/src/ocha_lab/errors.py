class OchaLabError(Exception):
    """Base class for library errors."""


class ArgumentError(OchaLabError, ValueError):
    """Malformed input: wrong arity, degree or index."""


class PreconditionError(OchaLabError):
    """An operation's documented precondition does not hold."""


class UnstableTruncationError(OchaLabError):
    """A truncated quotient computation did not stabilise; use more slack."""
