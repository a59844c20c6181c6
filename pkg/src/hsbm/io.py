"""Plain-text file formats.

Hypergraph: header ``n k m`` then ``m`` lines of ``k`` ascending 1-based ids.
Partition: ``n`` lines, each ``+1`` or ``-1``.
Matrix dump (debug only): header ``n`` then ``n`` rows of ``n`` values.
All UTF-8 with LF line endings.
"""
from __future__ import annotations

import io
import os

import numpy as np

from .core import Hypergraph, PartitionVector
from .errors import InvalidParams


def _open_write(path):
    return open(path, "w", encoding="utf-8", newline="\n")


def format_hypergraph(H: Hypergraph) -> str:
    lines = [f"{H.n} {H.k} {len(H)}"]
    lines += [" ".join(map(str, e)) for e in H.sorted_edges()]
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> Hypergraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 3:
        raise InvalidParams("hypergraph header must be 'n k m'")
    n, k, m = (int(v) for v in rows[0])
    if len(rows) - 1 != m:
        raise InvalidParams(f"header declares {m} edges, found {len(rows) - 1}")
    edges = []
    for row in rows[1:]:
        e = tuple(int(v) for v in row)
        if list(e) != sorted(e):
            raise InvalidParams(f"edge {e} is not in ascending order")
        edges.append(e)
    if len(set(edges)) != len(edges):
        raise InvalidParams("duplicate edges in file")
    return Hypergraph(n, k, frozenset(edges))


def format_partition(x: PartitionVector) -> str:
    return "".join("+1\n" if v > 0 else "-1\n" for v in x.labels)


def parse_partition(text: str) -> PartitionVector:
    labels = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln:
            continue
        if ln not in ("+1", "-1"):
            raise InvalidParams(f"partition line must be '+1' or '-1', got {ln!r}")
        labels.append(1 if ln == "+1" else -1)
    return PartitionVector(labels)


def write_hypergraph(H: Hypergraph, path: str | os.PathLike) -> None:
    with _open_write(path) as fh:
        fh.write(format_hypergraph(H))


def read_hypergraph(path: str | os.PathLike) -> Hypergraph:
    with open(path, encoding="utf-8") as fh:
        return parse_hypergraph(fh.read())


def write_partition(x: PartitionVector, path: str | os.PathLike) -> None:
    with _open_write(path) as fh:
        fh.write(format_partition(x))


def read_partition(path: str | os.PathLike) -> PartitionVector:
    with open(path, encoding="utf-8") as fh:
        return parse_partition(fh.read())


def format_matrix(M: np.ndarray) -> str:
    buf = io.StringIO()
    buf.write(f"{M.shape[0]}\n")
    for row in np.asarray(M):
        buf.write(" ".join(repr(v.item()) for v in row) + "\n")
    return buf.getvalue()


def parse_matrix(text: str) -> np.ndarray:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    n = int(rows[0][0])
    M = np.array([[float(v) for v in row] for row in rows[1:]])
    if M.shape != (n, n):
        raise InvalidParams(f"matrix body has shape {M.shape}, header says {n}")
    return M
