"""Diagnostic codes, severities, and source spans shared by the DSL and the analyses.

Every finding the toolkit can produce carries a code from the catalog below.
P0xx codes come out of the tokenizer/parser, E1xx are semantic errors, and
W2xx are warnings that never fail a model on their own.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


#: code -> (severity, short description). The code alone determines severity.
CATALOG: dict[str, tuple[Severity, str]] = {
    "P001": (Severity.ERROR, "unterminated string literal"),
    "P002": (Severity.ERROR, "illegal character"),
    "P003": (Severity.ERROR, "unexpected token"),
    "P004": (Severity.ERROR, "unknown UCA category keyword"),
    "P005": (Severity.ERROR, "missing required field in block"),
    "E101": (Severity.ERROR, "unknown reference"),
    "E102": (Severity.ERROR, "duplicate identifier"),
    "E103": (Severity.ERROR, "hazard with empty leads_to"),
    "E104": (Severity.ERROR, "control action between non-adjacent levels"),
    "E105": (Severity.ERROR, "control action touching the environment level"),
    "E106": (Severity.ERROR, "scenario referencing a missing or justified-absent UCA"),
    "E107": (Severity.ERROR, "empty or malformed level set"),
    "W201": (Severity.WARNING, "UCA coverage gap"),
    "W202": (Severity.WARNING, "loss referenced by no hazard"),
    "W203": (Severity.WARNING, "control action with no safety constraint"),
    "W204": (Severity.WARNING, "hazard referenced by no UCA"),
}


@dataclass(frozen=True)
class Span:
    """Half-open byte range [start, end) plus the 1-based line/column of start.

    Offsets count UTF-8 bytes; columns count characters within the line.
    """

    start: int
    end: int
    line: int
    column: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"invalid span [{self.start}, {self.end})")
        if self.line < 1 or self.column < 1:
            raise ValueError("line and column are 1-based")


#: Placeholder span for elements that did not come from source text.
ZERO_SPAN = Span(0, 0, 1, 1)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    span: Span

    def __post_init__(self) -> None:
        if self.code not in CATALOG:
            raise ValueError(f"unknown diagnostic code {self.code!r}")
        if not self.message:
            raise ValueError("diagnostic message must be non-empty")

    @property
    def severity(self) -> Severity:
        return CATALOG[self.code][0]

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def render(self, filename: str) -> str:
        """One-line rendering: ``file:line:col: severity[CODE]: message``."""
        return (
            f"{filename}:{self.span.line}:{self.span.column}: "
            f"{self.severity.value}[{self.code}]: {self.message}"
        )


def sort_key(diagnostic: Diagnostic) -> tuple[int, str]:
    """Diagnostics are reported in source order, ties broken by code."""
    return (diagnostic.span.start, diagnostic.code)
