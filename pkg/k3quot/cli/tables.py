"""Fixed-width and parsable table rendering for CLI reports.

Default mode prints a header row plus a dash row, every column padded and
followed by a single space. String cells longer than a truncating column
become ``value[:width-1] + "+"``; other cells overflow the column.
``parsable`` joins cells with ``|`` and drops the dash row.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, replace
from typing import Union


@dataclass(frozen=True)
class Column:
    name: str
    width: int  # signed: > 0 right-aligned, < 0 left-aligned
    truncate: bool = False

    @property
    def abs_width(self) -> int:
        return abs(self.width)

    @property
    def right_align(self) -> bool:
        return self.width > 0


Row = Union[dict[str, str], Sequence[str]]


def _cells(row: Row, columns: Sequence[Column]) -> list[str]:
    if isinstance(row, dict):
        return [row.get(c.name, "") for c in columns]
    return [str(cell) for cell in row]


def fit_columns(columns: Sequence[Column], rows: Sequence[Row]) -> list[Column]:
    """Widen non-truncating columns to their longest cell or header."""
    fitted: list[Column] = []
    cells = [_cells(row, columns) for row in rows]
    for i, col in enumerate(columns):
        if col.truncate:
            fitted.append(col)
            continue
        widest = max([len(col.name), col.abs_width, *(len(r[i]) for r in cells)])
        fitted.append(replace(col, width=widest if col.right_align else -widest))
    return fitted


def _clip(value: str, col: Column) -> str:
    if col.truncate and len(value) > col.abs_width:
        return value[: col.abs_width - 1] + "+"
    return value


def _pad(value: str, col: Column) -> str:
    padded = value.rjust(col.abs_width) if col.right_align else value.ljust(col.abs_width)
    return padded + " "


def render_header(columns: Sequence[Column], parsable: bool = False) -> list[str]:
    if parsable:
        return ["|".join(c.name for c in columns)]
    return [
        "".join(_pad(c.name[: c.abs_width], c) for c in columns).rstrip(),
        "".join("-" * c.abs_width + " " for c in columns).rstrip(),
    ]


def render_row(cells: Sequence[str], columns: Sequence[Column], parsable: bool = False) -> str:
    if parsable:
        return "|".join(cells)
    return "".join(_pad(_clip(cell, c), c) for cell, c in zip(cells, columns)).rstrip()


def render_table(
    columns: Sequence[Column],
    rows: Sequence[Row],
    parsable: bool = False,
    noheader: bool = False,
) -> str:
    """Header plus rows; dict rows are keyed by column name, missing keys render blank."""
    if not parsable:
        columns = fit_columns(columns, rows)
    lines = [] if noheader else render_header(columns, parsable)
    lines.extend(render_row(_cells(row, columns), columns, parsable) for row in rows)
    return "\n".join(lines)
