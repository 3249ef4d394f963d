"""Error types and lint diagnostics shared across the package.

Hard failures (bad zone numbers, malformed notation, schema violations)
raise :class:`VrenError` subclasses carrying a stable machine-readable
``code``.  Soft findings produced by validation walk the other route:
they are collected as :class:`Diagnostic` values and never raised.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class VrenError(Exception):
    """Base for all domain errors; ``code`` is stable across releases."""

    def __init__(self, code: str, message: str, line: int | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.line = line

    def __str__(self) -> str:
        if self.line is not None:
            return f"{self.code} (line {self.line}): {self.message}"
        return f"{self.code}: {self.message}"


class ZoneRangeError(VrenError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__("E_ZONE_RANGE", message, line)


class EnumValueError(VrenError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__("E_ENUM_VALUE", message, line)


class NotationSyntaxError(VrenError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__("E_SYNTAX", message, line)


class DuplicateFieldError(VrenError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__("E_DUPLICATE_FIELD", message, line)


class MissingHeaderError(VrenError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__("E_MISSING_HEADER", message, line)


class SchemaError(VrenError):
    def __init__(self, message: str):
        super().__init__("E_SCHEMA", message)


class InvalidModelError(VrenError):
    def __init__(self, message: str):
        super().__init__("E_INVALID_MODEL", message)


class EmptyScopeError(VrenError):
    def __init__(self, message: str = "no qualifying rounds in scope"):
        super().__init__("E_EMPTY_SCOPE", message)


class DegenerateLabelsError(VrenError):
    def __init__(self, message: str):
        super().__init__("E_DEGENERATE_LABELS", message)


class DimMismatchError(VrenError):
    def __init__(self, message: str):
        super().__init__("E_DIM_MISMATCH", message)


class LengthMismatchError(VrenError):
    def __init__(self, message: str):
        super().__init__("E_LENGTH_MISMATCH", message)


class InvalidPerturbationError(VrenError):
    def __init__(self, message: str):
        super().__init__("E_INVALID_PERTURBATION", message)


class BadIndexError(VrenError):
    def __init__(self, message: str):
        super().__init__("E_BAD_INDEX", message)


class BadProfileError(VrenError):
    def __init__(self, message: str):
        super().__init__("E_BAD_PROFILE", message)


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


#: Closed list of diagnostic codes emitted by validation and linting.
DIAGNOSTIC_CODES = frozenset(
    {
        "E_EMPTY_RALLY",
        "E_ROUND_GAP",
        "E_TEAM_ALTERNATION",
        "W_TEAM_ALTERNATION",
        "E_SERVE_NOT_ROUND1",
        "W_SERVE_MISSING",
        "E_OVERPASS_PROPAGATION",
        "W_PASS_RATING_MISMATCH",
        "E_BLOCK_TOUCH_NO_BLOCKERS",
        "E_RALLY_GAP",
    }
)


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding, addressable down to the offending round."""

    code: str
    severity: Severity
    message: str
    rally_no: int | None = None
    round_no: int | None = None
    line: int | None = None

    def __post_init__(self) -> None:
        if self.code not in DIAGNOSTIC_CODES:
            raise ValueError(f"unknown diagnostic code {self.code!r}")

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def to_json(self) -> dict:
        return {
            "code": self.code,
            "severity": self.severity.value,
            "message": self.message,
            "rally_no": self.rally_no,
            "round_no": self.round_no,
            "line": self.line,
        }
