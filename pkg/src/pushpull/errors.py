"""Exception types shared across the package."""


class PushPullError(Exception):
    """Base class for all package errors."""


class ParameterError(PushPullError, ValueError):
    """Invalid or infeasible parameters."""


class PreconditionError(PushPullError, ValueError):
    """An operation was called with inputs outside its domain."""


class DomainError(PushPullError, ValueError):
    """The requested computation is undefined for the given parameters."""


class ParseError(PushPullError, ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class EmptyGraphError(PushPullError, ValueError):
    """Raised when an edge list contains no edges and no nodes."""


class GenerationError(PushPullError, RuntimeError):
    """A random generator exhausted its retry budget."""
