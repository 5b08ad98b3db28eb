"""Exception types shared across the package."""


class QaoaBoundError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(QaoaBoundError, ValueError):
    """An argument violates a documented precondition."""


class InvalidInputError(QaoaBoundError, ValueError):
    """A graph or bitstring input violates a documented precondition."""


class GraphParseError(InvalidInputError):
    """An edge-list document is malformed; carries the offending line."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ResourceLimitError(QaoaBoundError):
    """A computation would exceed the configured memory or size budget."""


class NumericError(QaoaBoundError):
    """A numeric result is non-finite or violates a required invariant."""
