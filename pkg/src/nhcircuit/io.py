"""Deterministic CSV / JSON emission with a parameter header."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


def fmt(value) -> str:
    """Locale-independent, round-trippable text for one cell."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(value)


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if math.isfinite(v) else fmt(v)
    if isinstance(value, np.integer):
        return int(value)
    return value


def header_lines(params: dict) -> list[str]:
    lines = []
    for key in sorted(params):
        lines.append(f"# {key} = {json.dumps(_jsonable(params[key]), sort_keys=True)}")
    return lines


@dataclass
class Table:
    columns: tuple[str, ...]
    rows: list = field(default_factory=list)

    def to_csv(self, params: dict) -> str:
        out = header_lines(params)
        out.append(",".join(self.columns))
        for row in self.rows:
            out.append(",".join(fmt(v) for v in row))
        return "\n".join(out) + "\n"

    def to_json(self, params: dict) -> str:
        doc = {
            "header": _jsonable(params),
            "columns": list(self.columns),
            "rows": [[_jsonable(v) for v in row] for row in self.rows],
        }
        return json.dumps(doc, sort_keys=False, indent=1) + "\n"

    def render(self, params: dict, format: str = "csv") -> str:
        if format == "csv":
            return self.to_csv(params)
        if format == "json":
            return self.to_json(params)
        raise ValueError(f"unknown format {format!r}")

    def write(self, path, params: dict, format: str = "csv"):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.render(params, format))
        return path


def read_csv(path_or_text):
    """Parse a file written by :meth:`Table.to_csv` into (header dict, columns, float rows)."""
    text = Path(path_or_text).read_text() if not str(path_or_text).count("\n") else str(path_or_text)
    header, rows, cols = {}, [], None
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].partition("=")
            header[key.strip()] = json.loads(val.strip())
        elif cols is None:
            cols = tuple(line.split(","))
        elif line:
            rows.append([_parse_cell(c) for c in line.split(",")])
    return header, cols, rows


def _parse_cell(c):
    try:
        return float(c)
    except ValueError:
        return c
