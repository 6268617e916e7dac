"""CSV writing with ``#``-prefixed metadata lines."""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Iterable, Mapping, Optional, Sequence

import numpy as np


def fmt(value: Any) -> str:
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def render(
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    config: Optional[Mapping[str, Any]] = None,
    footer: Optional[Mapping[str, Any]] = None,
) -> str:
    """CSV text: a config comment, the header, the rows, then optional summary comments."""
    buf = io.StringIO()
    if config is not None:
        buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    for key, value in (footer or {}).items():
        buf.write(f"# {key}: {fmt(value)}\n")
    return buf.getvalue()


def read(text: str):
    """Parse text produced by :func:`render` into (columns, rows, comments)."""
    comments = [line[1:].strip() for line in text.splitlines() if line.startswith("#")]
    body = [line for line in text.splitlines() if line and not line.startswith("#")]
    reader = csv.reader(body)
    columns = next(reader)
    return columns, [row for row in reader], comments
