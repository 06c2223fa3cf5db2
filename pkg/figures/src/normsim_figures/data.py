"""CSV loading for run directories written by the normsim CLI.

This package talks to the simulator only through its files: a metadata
comment line, a header row, then data rows.  Nothing here recomputes model
quantities; plotting works off the columns verbatim.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

__all__ = ["SchemaError", "read_csv", "load_table", "floats"]


class SchemaError(ValueError):
    """An input CSV does not match the documented schema."""


def read_csv(path):
    """Parse one CSV into (meta dict, column names, rows of strings).

    The first line may be a '# key=value ...' metadata comment; any other
    leading '#' lines are skipped.
    """
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"missing input file: {path}")
    meta: dict = {}
    columns: list = []
    rows: list = []
    with open(path, newline="", encoding="utf-8") as fh:
        for record in csv.reader(fh):
            if not record:
                continue
            if record[0].startswith("#"):
                if not meta:
                    text = ",".join(record).lstrip("#").strip()
                    for part in text.split():
                        if "=" in part:
                            key, _, val = part.partition("=")
                            meta[key] = val
                continue
            if not columns:
                columns = record
            else:
                rows.append(record)
    return meta, columns, rows


def load_table(path, required=()):
    """Read a CSV into a column -> list-of-strings mapping.

    Raises SchemaError naming the first missing required column, or when
    the file holds a header but no data rows.
    """
    _, columns, rows = read_csv(path)
    for column in required:
        if column not in columns:
            raise SchemaError(f"{Path(path).name}: missing column '{column}'")
    if not rows:
        raise SchemaError(f"{Path(path).name}: no data rows")
    table = {c: [] for c in columns}
    for row in rows:
        if len(row) != len(columns):
            raise SchemaError(f"{Path(path).name}: row width {len(row)} != {len(columns)} columns")
        for c, cell in zip(columns, row):
            table[c].append(cell)
    return table


def floats(table, column) -> np.ndarray:
    """One column as float64; empty cells become NaN."""
    return np.array([float(cell) if cell != "" else np.nan for cell in table[column]])
