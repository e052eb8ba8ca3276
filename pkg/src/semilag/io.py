"""CSV writing and reading for solver outputs.

Files are comma separated with a header row and LF line endings. Floats are
written with 17 significant digits so they parse back bit-for-bit. A file
may hold several tables separated by a blank line (``orders.csv`` does).
"""

from __future__ import annotations

import numpy as np


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def format_table(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_csv(path, header, rows, *more_tables):
    """Write one or more ``(header, rows)`` tables to ``path``."""
    blocks = [format_table(header, rows)]
    blocks.extend(format_table(h, r) for h, r in more_tables)
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(blocks))


def _parse(cell: str):
    if cell in ("true", "false"):
        return cell == "true"
    try:
        return int(cell)
    except ValueError:
        pass
    try:
        return float(cell)
    except ValueError:
        return cell


def read_csv(path):
    """Parse a file written by :func:`write_csv`.

    Returns a list of tables, each a dict mapping column name to a list of
    values (ints, floats, booleans or strings).
    """
    with open(path, newline="") as fh:
        text = fh.read()
    tables = []
    for block in text.split("\n\n"):
        lines = [ln for ln in block.split("\n") if ln]
        if not lines:
            continue
        header = lines[0].split(",")
        cols = {name: [] for name in header}
        for ln in lines[1:]:
            cells = ln.split(",")
            if len(cells) != len(header):
                raise ValueError(f"{path}: row {ln!r} has {len(cells)} cells, expected {len(header)}")
            for name, cell in zip(header, cells):
                cols[name].append(_parse(cell))
        tables.append(cols)
    return tables


def read_table(path, index=0) -> dict:
    """One table of a CSV file with numeric columns as float arrays."""
    table = read_csv(path)[index]
    out = {}
    for name, values in table.items():
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
            out[name] = np.array(values, dtype=float)
        else:
            out[name] = values
    return out
