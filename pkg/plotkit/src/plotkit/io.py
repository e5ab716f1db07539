"""Header-validated loading of the simulation CSV formats.

Each loader checks the header columns exactly and reports the first offending
column by name, so a mismatched or corrupted file fails loudly instead of
producing a silently wrong figure.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

__all__ = ["HeaderError", "load_table", "HEADERS"]

HEADERS = {
    "trajectory": ["t", "i", "x", "u", "K"],
    "moments": ["n", "p", "functional", "estimate", "stderr", "paths",
                "stopped", "clamps"],
    "convergence": ["n_coarse", "n_fine", "gap", "stderr", "paths"],
    "stickiness": ["n", "epsilon", "prob", "ci_lo", "ci_hi", "paths"],
}

_TEXT_COLUMNS = {"functional"}


class HeaderError(ValueError):
    def __init__(self, path, column, expected):
        super().__init__(f"{path}: bad column {column!r}, expected header "
                         f"{','.join(expected)}")
        self.column = column


def load_table(path: str | Path, kind: str) -> dict[str, np.ndarray]:
    """Read a CSV of the given kind into one array per column."""
    expected = HEADERS[kind]
    path = Path(path)
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise HeaderError(path, "<empty file>", expected) from None
        for j, name in enumerate(expected):
            got = header[j] if j < len(header) else "<missing>"
            if got != name:
                raise HeaderError(path, got, expected)
        if len(header) > len(expected):
            raise HeaderError(path, header[len(expected)], expected)
        rows = [row for row in reader if row]
    cols: dict[str, np.ndarray] = {}
    for j, name in enumerate(expected):
        vals = [row[j] for row in rows]
        if name in _TEXT_COLUMNS:
            cols[name] = np.array(vals, dtype=object)
        else:
            try:
                cols[name] = np.array(vals, dtype=float)
            except ValueError as exc:
                raise ValueError(f"{path}: non-numeric value in column "
                                 f"{name!r}: {exc}") from None
    return cols
