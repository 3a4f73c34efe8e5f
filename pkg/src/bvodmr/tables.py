"""Delimiter-separated table and flat report I/O.

Input tables are comma- or tab-separated text with optional ``#``
comment lines and an optional header naming the columns.  Output tables
carry one header line with column names and units; fit reports are flat
``key = value`` documents.  All output formatting is deterministic so
identical runs produce byte-identical files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable, Sequence

import numpy as np


class TableError(ValueError):
    """Malformed input table; messages carry 1-based file line numbers."""


def _split(line: str, sep: str) -> list[str]:
    return [cell.strip() for cell in line.split(sep)]


def load_table(
    path: str | Path,
    columns: Sequence[str],
    row_check: Callable[[np.ndarray], str | None] | None = None,
) -> np.ndarray:
    """Read numeric rows with the expected column roles.

    A first non-comment line that does not parse as numbers is treated
    as a header; it must contain every name in ``columns``
    (case-insensitive, any order, extra columns allowed) and the data
    is selected and reordered to match.  Without a header, columns are
    positional and the count must match exactly.  ``row_check`` may
    veto a row by returning an error string.

    Raises
    ------
    TableError
        Empty file, missing columns, wrong cell count, non-numeric cell
        or vetoed row, each naming the offending line.
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise TableError(f"cannot read {path}: {exc}") from None

    ncol = len(columns)
    order: list[int] | None = None
    rows: list[np.ndarray] = []
    data_seen = False
    sep = None

    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if sep is None:
            sep = "\t" if "\t" in stripped else ","
        cells = _split(stripped, sep)
        if not data_seen:
            data_seen = True
            try:
                [float(c) for c in cells]
            except ValueError:
                header = [c.lower() for c in cells]
                expected = [c.lower() for c in columns]
                missing = [c for c in expected if c not in header]
                if missing:
                    raise TableError(
                        f"line {lineno}: header {cells} is missing "
                        f"column(s) {missing}"
                    ) from None
                order = [header.index(name) for name in expected]
                ncol = len(header)
                continue
        if len(cells) != ncol:
            raise TableError(
                f"line {lineno}: expected {ncol} columns "
                f"({', '.join(columns) if order is None else 'per header'}), "
                f"got {len(cells)}"
            )
        try:
            row = np.array([float(c) for c in cells], dtype=np.float64)
        except ValueError:
            raise TableError(f"line {lineno}: non-numeric cell in {cells}") from None
        if order is not None:
            row = row[order]
        if row_check is not None:
            problem = row_check(row)
            if problem:
                raise TableError(f"line {lineno}: {problem}")
        rows.append(row)

    if not rows:
        raise TableError(f"{path}: no data rows")
    return np.vstack(rows)


def load_resonance_table(path: str | Path) -> np.ndarray:
    """(b_gauss, f_minus_mhz, f_plus_mhz) rows with invariants enforced."""

    def check(row: np.ndarray) -> str | None:
        if row[0] < 0:
            return f"negative field magnitude {row[0]}"
        if row[1] > row[2]:
            return f"f_minus {row[1]} exceeds f_plus {row[2]}"
        return None

    return load_table(path, ("b_gauss", "f_minus_mhz", "f_plus_mhz"), check)


def load_trace_table(path: str | Path, columns=("tau_ns", "signal")) -> np.ndarray:
    """Two-column (x, y) trace rows."""
    return load_table(path, columns)


def format_number(x: float) -> str:
    return f"{x:.12g}"


def write_table(path: str | Path, columns: Sequence[str], rows: np.ndarray) -> None:
    """Write a comma-separated table with a header line, LF newlines."""
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    lines = [",".join(columns)]
    lines.extend(",".join(format_number(x) for x in row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_report(path: str | Path, entries: dict) -> None:
    """Write a flat ``key = value`` report in insertion order."""
    lines = []
    for key, value in entries.items():
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = format_number(value)
        else:
            text = str(value)
        lines.append(f"{key} = {text}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
