"""Shared delimited-output helpers: fixed float formatting and CSV
emission with '#' comment headers, so identical inputs produce identical
bytes."""
from __future__ import annotations

import os


def fmt(value) -> str:
    """Render one CSV cell: floats as %.17g, quoting where RFC 4180
    requires it, everything else via str."""
    if isinstance(value, bool):
        text = str(value).lower()
    elif isinstance(value, float):
        text = "%.17g" % value
    else:
        text = str(value)
    if any(ch in text for ch in (',', '"', '\n')):
        text = '"' + text.replace('"', '""') + '"'
    return text


def write_csv(path: str, header, rows, comments=()) -> None:
    """Write comment lines, a header row, then data rows, LF-terminated."""
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(fmt(h) for h in header))
    for row in rows:
        lines.append(",".join(fmt(cell) for cell in row))
    payload = "\n".join(lines) + "\n"
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(payload)
