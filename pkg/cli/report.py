"""CSV, gnuplot and JSON artifacts written by the commands.

Floats are written with 17 significant digits so that every artifact is
byte-for-byte reproducible and reads back to the same doubles. A file built
from a sweep with failed entries ends with a ``# partial: <k> failed`` line.
"""

import csv
import json
from pathlib import Path
from typing import Iterable, Optional, Sequence

SPECTRUM_COLUMNS = ("index", "re", "im", "modulus", "residual")
CONVERGENCE_COLUMNS = ("N", "M", "re", "im", "abs_error", "cond_estimate")
COMPARE_COLUMNS = ("index", "re", "im", "other_re", "other_im", "delta")
ROOT_COLUMNS = ("index", "re", "im", "multiplier_re", "multiplier_im")
CHECK_COLUMNS = ("name", "status", "value", "tolerance")


def format_float(value: Optional[float]) -> str:
    """17 significant digits; empty for a missing value."""
    if value is None:
        return ""
    return format(float(value), ".17g")


def _cell(value) -> str:
    if isinstance(value, float):
        return format_float(value)
    return "" if value is None else str(value)


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence], failures: int = 0) -> Path:
    """
    Write a header line and one line per row.

    Parameters:
        path (Path): Output file; parent directories are created.
        columns (Sequence[str]): Header.
        rows (Iterable[Sequence]): Cells; floats get 17 significant digits.
        failures (int): When positive, a partial-artifact trailer is appended.

    Returns:
        Path: The path written.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
        if failures:
            f.write(f"# partial: {failures} failed\n")
    return path


def spectrum_rows(spectrum):
    for k, (value, residual) in enumerate(zip(spectrum.eigenvalues, spectrum.residuals)):
        value = complex(value)
        yield k, value.real, value.imag, abs(value), float(residual)


def convergence_rows(table):
    for row in table.rows:
        value = row.eigenvalue
        yield (row.N, row.M,
               None if value is None else value.real,
               None if value is None else value.imag,
               row.error, row.condition_estimate)


def write_gnuplot(path: Path, rows: Iterable[Sequence]) -> Path:
    """Whitespace-separated columns, one line per row, rows with missing values skipped."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for row in rows:
        if any(value is None for value in row):
            continue
        lines.append(" ".join(_cell(value) for value in row))
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return path


def write_report(path: Path, report: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
