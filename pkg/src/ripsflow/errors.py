"""Exception types shared across the package."""


class InvalidSimplexError(ValueError):
    """Vertex tuple is not strictly decreasing or is out of range."""


class InvalidIndexError(ValueError):
    """Combinatorial index is out of range for the requested dimension."""


class CapacityError(OverflowError):
    """Requested problem size overflows the 64-bit index width."""


class InputParseError(ValueError):
    """Malformed text input. ``lineno`` is 1-based when known."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class DiagramFormatError(InputParseError):
    """Malformed persistence diagram text."""


class NotSupportedError(ValueError):
    """Operation is not defined for this kind of input."""


class InfeasibleNetworkError(ValueError):
    """Supplies cannot be routed through the network."""


class DomainError(ValueError):
    """Parameter outside the domain of a formula."""
