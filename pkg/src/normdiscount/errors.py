"""Exception hierarchy shared across the package."""

from __future__ import annotations


class NormDiscountError(Exception):
    """Base class for all errors raised by this package."""


class IngestionError(NormDiscountError):
    """Raised when a corpus stream cannot be read or decoded.

    Carries the approximate byte offset at which ingestion failed.
    """

    def __init__(self, message: str, byte_offset: int | None = None):
        if byte_offset is not None:
            message = f"{message} (byte offset {byte_offset})"
        super().__init__(message)
        self.byte_offset = byte_offset


class ParseError(NormDiscountError):
    """Raised on malformed records in line-oriented input files."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        prefix = ""
        if path is not None:
            prefix += str(path)
        if line is not None:
            prefix += f":{line}"
        if prefix:
            message = f"{prefix}: {message}"
        super().__init__(message)
        self.path = path
        self.line = line


class ValidationError(NormDiscountError):
    """Raised when inputs violate a documented contract."""


class DimensionMismatchError(ValidationError):
    """Raised when vector dimensions disagree; names both dimensions."""

    def __init__(self, expected: int, actual: int, context: str = ""):
        detail = f"expected dimension {expected}, got {actual}"
        if context:
            detail = f"{context}: {detail}"
        super().__init__(detail)
        self.expected = expected
        self.actual = actual


class UndefinedSimilarityError(ValidationError):
    """Raised when cosine similarity is undefined (zero vector)."""


class DegenerateInputError(ValidationError):
    """Raised on statistically degenerate input (zero variance, empty data)."""
