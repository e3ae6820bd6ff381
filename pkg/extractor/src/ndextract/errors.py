"""Exception types for the extraction pipeline."""

from __future__ import annotations


class ExtractError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ExtractError):
    """Malformed line in an input file; carries path and line number."""

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


class ContractError(ExtractError):
    """Invalid configuration, flag combination, or empty input."""


class ModelLoadError(ExtractError):
    """The model or its tokenizer could not be loaded."""
