"""Recovery procedures: brute-force ML, truncated min-bisection, spectral bisection.

Brute-force routines enumerate one representative per sign class, namely the
balanced vectors whose first label is -1, and return the whole tie set.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .certificate import EigenRequest, eig_sym
from .core import Hypergraph, PartitionVector
from .errors import DegenerateModel, InvalidParams, TooLarge
from .graph_ops import WeightedGraph, in_cluster_score, laplacian
from .rng import as_generator

MAX_BRUTEFORCE_N = 20


@dataclass(frozen=True)
class EstimateResult:
    candidates: frozenset
    objective: float
    method: str
    trace: tuple = ()

    @property
    def unique(self) -> bool:
        return len(self.candidates) == 1


def _check_bruteforce(n: int) -> None:
    if n > MAX_BRUTEFORCE_N:
        raise TooLarge(f"brute force is capped at n <= {MAX_BRUTEFORCE_N}, got {n}")


def balanced_classes(n: int, chunk: int = 8192):
    """Yield ``(c, n)`` int8 arrays covering every balanced sign class exactly once."""
    if n % 2 or n < 2:
        raise InvalidParams(f"n must be a positive even number, got {n}")
    combos = itertools.combinations(range(1, n), n // 2)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            return
        X = -np.ones((len(block), n), dtype=np.int8)
        X[np.repeat(np.arange(len(block)), n // 2), np.asarray(block).ravel()] = 1
        yield X


def _argbest(score_blocks, maximize: bool):
    best = None
    winners: list[np.ndarray] = []
    for X, scores in score_blocks:
        target = scores.max() if maximize else scores.min()
        if best is None or (target > best if maximize else target < best):
            best, winners = target, []
        if target == best:
            winners.extend(X[scores == best])
    cands = frozenset(PartitionVector(x) for x in winners)
    return cands, best


def _in_cluster_blocks(H: Hypergraph):
    E = H.edge_array
    chunk = max(1, min(8192, 20_000_000 // max(1, E.size)))
    for X in balanced_classes(H.n, chunk):
        lab = X[:, E].sum(axis=2, dtype=np.int64)
        yield X, np.count_nonzero(np.abs(lab) == H.k, axis=1)


def ml_bruteforce(H: Hypergraph, assortative: bool | None = True) -> EstimateResult:
    """Maximum-likelihood labelings by enumeration.

    ``assortative`` is ``p > q``; pass ``None`` for ``p == q`` (rejected).
    """
    if assortative is None:
        raise DegenerateModel("p == q: the likelihood does not depend on the labeling")
    _check_bruteforce(H.n)
    cands, best = _argbest(_in_cluster_blocks(H), maximize=bool(assortative))
    return EstimateResult(cands, int(best), "ml")


def ml_likelihood(H: Hypergraph, x: PartitionVector, p: float, q: float) -> float:
    """``log Pr(H | sigma = x)`` including the labeling-independent constant."""
    if not (0 < p < 1 and 0 < q < 1):
        raise DegenerateModel(f"log-likelihood needs 0 < p, q < 1, got p={p}, q={q}")
    n, k = H.n, H.k
    n_in = 2 * math.comb(n // 2, k)
    const = n_in * math.log1p(-p) + (math.comb(n, k) - n_in) * math.log1p(-q)
    s = in_cluster_score(H, x)
    return (const + math.log(p / (1 - p)) * s
            + math.log(q / (1 - q)) * (len(H) - s))


def trunc_bruteforce(Wg: WeightedGraph) -> EstimateResult:
    """Balanced maximizers of ``sum_{i<j} W_ij x_i x_j``."""
    _check_bruteforce(Wg.n)
    W = Wg.W.astype(np.int64)

    def blocks():
        for X in balanced_classes(Wg.n):
            Xi = X.astype(np.int64)
            yield X, ((Xi @ W) * Xi).sum(axis=1) // 2

    cands, best = _argbest(blocks(), maximize=True)
    return EstimateResult(cands, int(best), "trunc")


def _descend(W: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Steepest pair-swap ascent of the quadratic score from ``x``."""
    x = x.copy()
    f = W @ x
    score = int(x @ f) // 2
    trace = [score]
    while True:
        plus = np.flatnonzero(x > 0)
        minus = np.flatnonzero(x < 0)
        # gain of swapping plus[a] (to -1) with minus[b] (to +1)
        gain = -2 * f[plus][:, None] + 2 * f[minus][None, :] - 4 * W[np.ix_(plus, minus)]
        a, b = np.unravel_index(np.argmax(gain), gain.shape)
        if gain[a, b] <= 0:
            return x, trace
        i, j = plus[a], minus[b]
        x[i], x[j] = -1, 1
        f += 2 * W[:, j] - 2 * W[:, i]
        score += int(gain[a, b])
        trace.append(score)


def trunc_local_search(Wg: WeightedGraph, restarts: int, seed,
                       init: PartitionVector | None = None) -> EstimateResult:
    """Best balanced labeling over random-restart pair-swap ascents (no optimality guarantee).

    ``init``, when given, is used as the first starting point.  ``trace`` holds
    the objective along the winning run.
    """
    if restarts < 1:
        raise InvalidParams("restarts must be >= 1")
    rng = as_generator(seed, "local-search")
    W = Wg.W.astype(np.int64)
    n = Wg.n
    base = np.repeat(np.array([1, -1], dtype=np.int64), n // 2)
    best, best_trace, found = None, (), set()
    for r in range(restarts):
        x0 = init.labels.astype(np.int64) if (r == 0 and init is not None) else rng.permutation(base)
        x, trace = _descend(W, x0)
        if best is None or trace[-1] > best:
            best, best_trace, found = trace[-1], tuple(trace), set()
        if trace[-1] == best:
            found.add(PartitionVector(x).canonical())
    return EstimateResult(frozenset(found), int(best), "trunc-local", best_trace)


def spectral_bisection(Wg: WeightedGraph) -> PartitionVector:
    """Median split of the Fiedler vector of ``L_W``.

    The ``n/2`` largest entries get +1; ties go to the lower vertex id.
    """
    n = Wg.n
    if n < 4 or n % 2:
        raise InvalidParams(f"spectral bisection needs even n >= 4, got {n}")
    _, V = eig_sym(EigenRequest(laplacian(Wg).astype(np.float64)), vectors=True, count=2)
    xi = V[:, 1]
    order = np.lexsort((np.arange(n), -xi))
    x = -np.ones(n, dtype=np.int64)
    x[order[: n // 2]] = 1
    return PartitionVector(x)
