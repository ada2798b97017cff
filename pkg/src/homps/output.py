"""Table serialisation for the command-line tools.

CSV output is locale-independent: comma separated, decimal points, floats
rendered with repr (shortest round-trip form).  The first line is a schema
comment, the second the column headers.
"""

from __future__ import annotations

import json
import sys
from typing import List, Sequence

SCHEMA_VERSION = 1

FORMATS = ("csv", "json")


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        # plain float repr (numpy scalars would otherwise render as np.float64(...))
        return repr(float(value))
    return str(value)


def render_csv(columns: Sequence[str], rows: Sequence[Sequence]) -> str:
    lines = [f"# schema={SCHEMA_VERSION}", ",".join(columns)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def render_json(columns: Sequence[str], rows: Sequence[Sequence]) -> str:
    records = [dict(zip(columns, row)) for row in rows]
    return json.dumps({"schema": SCHEMA_VERSION, "rows": records}, indent=2) + "\n"


def write_table(path, columns: Sequence[str], rows: List[Sequence], fmt: str) -> None:
    """Write rows to path (or stdout when path is None) as CSV or JSON."""
    text = render_csv(columns, rows) if fmt == "csv" else render_json(columns, rows)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
