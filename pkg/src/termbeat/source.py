"""Source positions, diagnostics, and the editable-region marker."""

from __future__ import annotations

from dataclasses import dataclass

# A module line whose trimmed content equals this string separates the
# protected header from the region participants may replace.
EDITABLE_MARKER = "-- %%% EDITABLE %%%"


@dataclass(frozen=True, slots=True)
class SourceRange:
    """Half-open is a lie here: both ends are inclusive, 1-based."""

    module: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self) -> None:
        if (self.end_line, self.end_col) < (self.start_line, self.start_col):
            raise ValueError(f"range ends before it starts: {self}")

    def __str__(self) -> str:
        return (
            f"{self.module}:{self.start_line}:{self.start_col}"
            f"-{self.end_line}:{self.end_col}"
        )


@dataclass(frozen=True, slots=True)
class Diagnostic:
    """A problem in submitted module text, pointing at line/col."""

    module: str
    line: int
    col: int
    message: str

    def __str__(self) -> str:
        return f"{self.module}:{self.line}:{self.col}: {self.message}"


class SourceError(Exception):
    """Raised by the lexer/parser/compiler; carries one or more diagnostics."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


def find_marker_line(text: str) -> int | None:
    """Return the 1-based line number of the editable marker, or None."""
    for i, line in enumerate(text.splitlines(), start=1):
        if line.strip() == EDITABLE_MARKER:
            return i
    return None


def split_editable(text: str) -> tuple[str, str | None]:
    """Split module text at the editable marker.

    The protected part ends with (and includes) the marker line.  When the
    text has no marker the whole text is protected and the editable part is
    None.  ``protected + editable == text`` whenever editable is not None.
    """
    marker_line = find_marker_line(text)
    if marker_line is None:
        return text, None
    # Walk to the end of the marker line, including its newline if present.
    pos = 0
    for _ in range(marker_line):
        nl = text.find("\n", pos)
        if nl < 0:
            pos = len(text)
            break
        pos = nl + 1
    return text[:pos], text[pos:]
