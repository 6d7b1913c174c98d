class ConicratError(Exception):
    """Base class for all library errors."""


class PreconditionError(ConicratError, ValueError):
    pass


class UnsupportedFieldError(ConicratError):
    """An operation needs arithmetic the field tower does not provide."""


class FactorizationBoundError(ConicratError):
    """Degree above the configured factorization bound over Q."""


class ParseError(ConicratError, ValueError):
    def __init__(self, message, text="", pos=None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)


class LatticeError(ConicratError, ValueError):
    pass


class ParityViolation(LatticeError):
    pass


class ConsistencyError(ConicratError):
    """Two independent routes disagree; always indicates a bug."""
