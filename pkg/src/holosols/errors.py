"""Exception types shared across the library."""


class HoloError(Exception):
    """Base class for all library errors."""


class ParseError(HoloError):
    """Raised on malformed operator expressions or problem files."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class NotHolonomicError(HoloError):
    """Raised when an input system fails the holonomicity test."""


class DegreeCapError(HoloError):
    """Raised when a b-function dependence search exceeds its degree cap."""


class MissingPresentationError(HoloError):
    """Raised when an operation needs a module presentation the caller did not supply."""
