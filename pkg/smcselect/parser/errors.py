"""Shared exceptions for configuration and data file parsing."""

from pathlib import Path
from typing import Optional, Union


class ParseError(Exception):
    """Error while reading an experiment or data file."""

    def __init__(
        self,
        message: str,
        file_path: Optional[Union[str, Path]] = None,
        line: Optional[int] = None,
    ):
        self.file_path = Path(file_path) if file_path is not None else None
        self.line = line
        super().__init__(self._format_message(message))

    def _format_message(self, message: str) -> str:
        """Format error message with file and line information."""
        parts = []
        if self.file_path:
            parts.append(f"File: {self.file_path}")
        if self.line is not None:
            parts.append(f"Line: {self.line}")
        parts.append(message)
        return " | ".join(parts)


class DataLoadError(ParseError):
    """A csv data file could not be turned into a numeric table.

    ``row`` is the 1-based data row (header excluded), ``column`` the header
    name of the offending cell, when known.
    """

    def __init__(
        self,
        message: str,
        file_path: Optional[Union[str, Path]] = None,
        row: Optional[int] = None,
        column: Optional[str] = None,
    ):
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        # Header occupies the first physical line.
        super().__init__(message, file_path, row + 1 if row is not None else None)
