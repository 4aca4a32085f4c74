"""Exception hierarchy shared by the library and the CLI."""


class TautPicError(Exception):
    """Base class for every error raised by tautpic."""


class DomainError(TautPicError, ValueError):
    """Input outside the mathematical domain (non-hyperbolic pair, excluded symbol...)."""


class DimensionError(TautPicError, ValueError):
    """Matrix shapes do not fit together."""


class ParameterError(TautPicError, ValueError):
    pass


class ParseError(TautPicError, ValueError):
    """Syntax error in a divisor-class expression; ``position`` is a 0-based offset."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class PresentationMismatch(TautPicError, ValueError):
    """Two objects belong to different presentations."""


class IntegrityError(TautPicError, RuntimeError):
    """A computed result contradicts a structural fact that must hold."""
