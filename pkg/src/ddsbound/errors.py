"""Exception hierarchy.

Every error carries a short machine-greppable ``code`` used by the CLI.
"""


class DDSError(Exception):
    code = "E_INPUT"


class DomainError(DDSError, ValueError):
    code = "E_DOMAIN"


class SingletonIntervalError(DomainError):
    """An interval with a single value was declared."""

    code = "E_SINGLETON"


class StateError(DDSError, ValueError):
    """A state, direction or index lies outside the domain."""

    code = "E_STATE"


class ParseError(DDSError, ValueError):
    code = "E_PARSE"

    def __init__(self, message, line=1, col=1):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class RangeViolation(DDSError, ValueError):
    code = "E_RANGE"


class CapExceeded(DDSError, RuntimeError):
    code = "E_CAP"


class DomainSizeError(DomainError, CapExceeded):
    """The state space exceeds a tabulation limit."""

    code = "E_SIZE"


class RetriesExhausted(DDSError, RuntimeError):
    code = "E_RETRIES"
