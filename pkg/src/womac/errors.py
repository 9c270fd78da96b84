"""
Exception types for womac.

Every error carries a machine-readable kind so the CLI can emit error JSON
and pick the exit code without string matching.
"""
from typing import Any, Dict, Optional


class WomacError(Exception):
    """Base class for all womac errors."""

    kind = "internal"

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"error": self.kind, "message": self.message}
        payload.update(self.details)
        return payload


class ValidationError(WomacError, ValueError):
    """Invalid input values, configuration or parameters."""

    kind = "validation"


class DimensionError(ValidationError):
    """Shapes or lengths of paired inputs do not agree."""

    kind = "dimension"


class DataFormatError(ValidationError):
    """A CSV input could not be parsed or violates the schema."""

    kind = "data_format"

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None, **details: Any) -> None:
        if path is not None:
            details["path"] = path
        if line is not None:
            details["line"] = line
            message = f"{message} (line {line})"
        super().__init__(message, **details)
        self.path = path
        self.line = line


class DuplicateCellError(DataFormatError):
    """The same (task, expert) pair appears more than once."""

    kind = "duplicate_cell"


class InputIOError(WomacError, OSError):
    """An input file is missing or unreadable, or an output cannot be written."""

    kind = "io"
