"""On-disk formats: triangular metric tables, JSON tables, edge lists.

Text metric table: line 1 holds n, then n lines of space-separated
integers give the lower triangle row by row including the diagonal, so
line i+1 carries d(i, 0) ... d(i, i).  Integer-valued metrics only.

JSON metric table: {"n": n, "dist": [[{"units": u, "eps_count": e},
...], ...]} with the full square matrix, for metrics that carry eps
components.

Edge list: one "u v" pair per line, vertices 1-based, blank lines and
'#' comments ignored.
"""

from __future__ import annotations

import json
from typing import Iterable

import numpy as np

from .metric import MetricTable

__all__ = [
    "read_metric_file",
    "write_metric_file",
    "read_metric_json",
    "write_metric_json",
    "read_edge_list",
    "write_edge_list",
    "load_metric_any",
]


def read_metric_file(path: str) -> MetricTable:
    with open(path, "r", encoding="utf-8") as fh:
        tokens_by_line = [line.split() for line in fh if line.strip()]
    if not tokens_by_line:
        raise ValueError(f"{path}: empty metric file")
    n = int(tokens_by_line[0][0])
    if len(tokens_by_line) != n + 1:
        raise ValueError(f"{path}: expected {n} rows, found {len(tokens_by_line) - 1}")
    units = np.zeros((n, n), dtype=np.int64)
    for i, row in enumerate(tokens_by_line[1:]):
        if len(row) != i + 1:
            raise ValueError(f"{path}: row {i} should hold {i + 1} entries, found {len(row)}")
        for j, tok in enumerate(row):
            units[i, j] = units[j, i] = int(tok)
    return MetricTable(units)


def write_metric_file(path: str, table: MetricTable) -> None:
    if table.has_eps():
        raise ValueError("triangular text format holds integer metrics only; use JSON")
    lines = [str(table.n)]
    for i in range(table.n):
        lines.append(" ".join(str(int(table.units[i, j])) for j in range(i + 1)))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def write_metric_json(path: str, table: MetricTable) -> None:
    dist = [
        [
            {"units": int(table.units[i, j]), "eps_count": int(table.eps[i, j])}
            for j in range(table.n)
        ]
        for i in range(table.n)
    ]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"n": table.n, "dist": dist}, fh)
        fh.write("\n")


def read_metric_json(path: str) -> MetricTable:
    with open(path, "r", encoding="utf-8") as fh:
        blob = json.load(fh)
    n = int(blob["n"])
    units = np.zeros((n, n), dtype=np.int64)
    eps = np.zeros((n, n), dtype=np.int64)
    rows = blob["dist"]
    if len(rows) != n:
        raise ValueError(f"{path}: expected {n} rows")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValueError(f"{path}: row {i} has {len(row)} entries, expected {n}")
        for j, cell in enumerate(row):
            units[i, j] = int(cell["units"])
            eps[i, j] = int(cell["eps_count"])
    return MetricTable(units, eps)


def load_metric_any(path: str) -> MetricTable:
    """Dispatch on extension: .json goes to the JSON reader."""
    if path.endswith(".json"):
        return read_metric_json(path)
    return read_metric_file(path)


def read_edge_list(path: str) -> tuple[int, list[tuple[int, int]]]:
    """Read 1-based edges; returns (max vertex count, 0-based edge list)."""
    edges: list[tuple[int, int]] = []
    hi = 0
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}: malformed edge line {raw!r}")
            u, v = int(parts[0]), int(parts[1])
            if u < 1 or v < 1:
                raise ValueError(f"{path}: vertices are 1-based, got {raw!r}")
            hi = max(hi, u, v)
            edges.append((u - 1, v - 1))
    return hi, edges


def write_edge_list(path: str, edges: Iterable[tuple[int, int]], header: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(f"# {header}\n")
        for u, v in edges:
            fh.write(f"{u + 1} {v + 1}\n")
