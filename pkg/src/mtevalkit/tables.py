"""Deterministic plain-text table rendering for CLI reports."""

from __future__ import annotations

from typing import Sequence

__all__ = ["render_table"]


def render_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """Render an aligned table: first column left-aligned, rest right.

    Output is a pure function of the inputs (byte-identical across runs).
    """
    cells = [list(map(str, headers))] + [list(map(str, row)) for row in rows]
    ncols = max(len(row) for row in cells)
    for row in cells:
        row.extend([""] * (ncols - len(row)))
    widths = [max(len(row[c]) for row in cells) for c in range(ncols)]

    def fmt(row: Sequence[str]) -> str:
        parts = [row[0].ljust(widths[0])]
        parts += [row[c].rjust(widths[c]) for c in range(1, ncols)]
        return "  ".join(parts).rstrip()

    lines = [fmt(cells[0]), "  ".join("-" * w for w in widths)]
    lines += [fmt(row) for row in cells[1:]]
    return "\n".join(lines)
