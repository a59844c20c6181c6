"""Pair-multiplicity projection, objective scores, degrees and Laplacians.

Everything here except :func:`projector` stays in exact integer arithmetic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import Hypergraph, PartitionVector
from .errors import InvalidParams


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """``W[i, j]`` = number of hyperedges containing both ``i`` and ``j`` (0-based)."""

    W: np.ndarray

    def __post_init__(self):
        W = np.asarray(self.W)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise InvalidParams("W must be square")
        if not np.array_equal(W, W.T) or np.any(np.diag(W) != 0) or np.any(W < 0):
            raise InvalidParams("W must be symmetric, nonnegative, zero on the diagonal")
        W = W.copy()
        W.setflags(write=False)
        object.__setattr__(self, "W", W)

    @property
    def n(self) -> int:
        return self.W.shape[0]


def _labels(x: PartitionVector, n: int) -> np.ndarray:
    if x.n != n:
        raise InvalidParams(f"labeling has length {x.n}, expected {n}")
    return x.labels


def weighted_projection(H: Hypergraph) -> WeightedGraph:
    W = np.zeros((H.n, H.n), dtype=np.int64)
    E = H.edge_array
    for a, b in itertools.combinations(range(H.k), 2):
        np.add.at(W, (E[:, a], E[:, b]), 1)
        np.add.at(W, (E[:, b], E[:, a]), 1)
    return WeightedGraph(W)


def in_cluster_score(H: Hypergraph, x: PartitionVector) -> int:
    """Number of edges whose vertices all share a label under ``x``."""
    lab = _labels(x, H.n)[H.edge_array]
    return int(np.count_nonzero(np.abs(lab.sum(axis=1)) == H.k))


def quadratic_score(Wg: WeightedGraph, x: PartitionVector) -> int:
    """``sum_{i<j} W_ij x_i x_j``."""
    s = _labels(x, Wg.n)
    return int(s @ Wg.W @ s) // 2


def in_out_degree(H: Hypergraph, sigma: PartitionVector, v: int) -> tuple[int, int]:
    """(in-degree, out-degree) of 1-based vertex ``v``.

    Out-degree counts cross edges through ``v`` whose remaining vertices all share
    one label; edges that are neither kind are not counted.
    """
    if not 1 <= v <= H.n:
        raise InvalidParams(f"vertex {v} outside [1, {H.n}]")
    s = _labels(sigma, H.n)
    indeg = outdeg = 0
    for e in H.edges:
        if v not in e:
            continue
        rest = [s[u - 1] for u in e if u != v]
        if all(r == rest[0] for r in rest):
            if rest[0] == s[v - 1]:
                indeg += 1
            else:
                outdeg += 1
    return indeg, outdeg


def laplacian(Wg: WeightedGraph) -> np.ndarray:
    W = Wg.W
    return np.diag(W.sum(axis=1)) - W


def signed_laplacian(Wg: WeightedGraph, sigma: PartitionVector) -> np.ndarray:
    """``L_Gamma = D_Gamma - Gamma`` with ``Gamma = diag(sigma) W diag(sigma)``."""
    s = _labels(sigma, Wg.n)
    gamma = s[:, None] * Wg.W * s[None, :]
    return np.diag(gamma.sum(axis=1)) - gamma


def projector(sigma: PartitionVector) -> np.ndarray:
    """Orthogonal projector onto the complement of ``span{1, sigma}``."""
    n = sigma.n
    s = sigma.labels.astype(np.float64)
    return np.eye(n) - np.full((n, n), 1.0 / n) - np.outer(s, s) / n


def hamming_error(x: PartitionVector, sigma: PartitionVector) -> int:
    """Mismatches up to a global sign flip."""
    if x.n != sigma.n:
        raise InvalidParams("labelings differ in length")
    d = int(np.count_nonzero(x.labels != sigma.labels))
    return min(d, x.n - d)
