"""Model parameters, labelings, hypergraphs and the planted-partition sampler."""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InvalidParams, OutOfRange, TooLarge
from .rng import as_generator

# slack for rates chosen to hit p == 1 exactly in exact arithmetic
_PROB_SLACK = 1e-12


def _check_shape(n: int, k: int) -> None:
    if k < 2:
        raise InvalidParams(f"k must be >= 2, got {k}")
    if n % 2:
        raise InvalidParams(f"n must be even, got {n}")
    if n < 2 * k:
        raise InvalidParams(f"need n >= 2k, got n={n}, k={k}")


def _to_probability(value: float, name: str) -> float:
    if value > 1.0 + _PROB_SLACK:
        raise OutOfRange(f"{name} = {value} exceeds 1")
    return 1.0 if abs(value - 1.0) <= _PROB_SLACK else value


def derive_probabilities(n: int, k: int, alpha: float, beta: float) -> tuple[float, float]:
    """Edge probabilities ``p = alpha ln n / C(n-1, k-1)`` and likewise ``q``."""
    _check_shape(n, k)
    if alpha < 0 or beta < 0:
        raise InvalidParams(f"rates must be nonnegative, got alpha={alpha}, beta={beta}")
    scale = math.log(n) / math.comb(n - 1, k - 1)
    return _to_probability(alpha * scale, "p"), _to_probability(beta * scale, "q")


@dataclass(frozen=True)
class ModelParams:
    n: int
    k: int
    alpha: float
    beta: float
    p: float = field(init=False)
    q: float = field(init=False)

    def __post_init__(self):
        p, q = derive_probabilities(self.n, self.k, self.alpha, self.beta)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def from_probabilities(cls, n: int, k: int, p: float, q: float) -> "ModelParams":
        """Build params whose derived (p, q) equal the given probabilities."""
        _check_shape(n, k)
        if not (0 <= p <= 1 and 0 <= q <= 1):
            raise OutOfRange(f"probabilities must lie in [0, 1], got p={p}, q={q}")
        scale = math.comb(n - 1, k - 1) / math.log(n)
        params = cls(n, k, p * scale, q * scale)
        # bypass round-trip error so p, q are bit-exact
        object.__setattr__(params, "p", float(p))
        object.__setattr__(params, "q", float(q))
        return params

    @property
    def n_in_cluster_sets(self) -> int:
        return 2 * math.comb(self.n // 2, self.k)

    @property
    def n_cross_cluster_sets(self) -> int:
        return math.comb(self.n, self.k) - self.n_in_cluster_sets


@dataclass(frozen=True, eq=False)
class PartitionVector:
    """A balanced +-1 labeling of vertices ``1..n`` (stored 0-based)."""

    labels: np.ndarray

    def __post_init__(self):
        arr = np.array(self.labels, dtype=np.int64).ravel()
        if arr.size == 0 or not np.all(np.abs(arr) == 1):
            raise InvalidParams("labels must be a nonempty sequence over {-1, +1}")
        if arr.sum() != 0:
            raise InvalidParams(f"labeling is not balanced (sum = {arr.sum()})")
        arr.setflags(write=False)
        object.__setattr__(self, "labels", arr)

    @property
    def n(self) -> int:
        return self.labels.size

    def __len__(self) -> int:
        return self.labels.size

    def __neg__(self) -> "PartitionVector":
        return PartitionVector(-self.labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartitionVector):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)

    def __hash__(self) -> int:
        return hash(self.labels.tobytes())

    def __repr__(self) -> str:
        return "PartitionVector(" + "".join("+" if v > 0 else "-" for v in self.labels) + ")"

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.labels)

    def canonical(self) -> "PartitionVector":
        """Lexicographically smaller member of ``{x, -x}`` (first label -1)."""
        return self if self.labels[0] < 0 else -self


class EdgeClass(enum.Enum):
    IN_CLUSTER = "in-cluster"
    CROSS_CLUSTER = "cross-cluster"


@dataclass(frozen=True)
class Hypergraph:
    """k-uniform hypergraph on vertices ``1..n``; edges are ascending tuples."""

    n: int
    k: int
    edges: frozenset

    def __post_init__(self):
        if self.k < 2 or self.n < self.k:
            raise InvalidParams(f"invalid hypergraph shape n={self.n}, k={self.k}")
        canon = set()
        for e in self.edges:
            t = tuple(sorted(int(v) for v in e))
            if len(t) != self.k or len(set(t)) != self.k:
                raise InvalidParams(f"edge {e} does not have {self.k} distinct vertices")
            if t[0] < 1 or t[-1] > self.n:
                raise InvalidParams(f"edge {e} has a vertex outside [1, {self.n}]")
            canon.add(t)
        if len(canon) != len(self.edges):
            raise InvalidParams("duplicate edges")
        object.__setattr__(self, "edges", frozenset(canon))

    def __len__(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, ...]]:
        return sorted(self.edges)

    @cached_property
    def edge_array(self) -> np.ndarray:
        """0-based ``(m, k)`` int array of edges in canonical order."""
        if not self.edges:
            return np.zeros((0, self.k), dtype=np.int64)
        return np.array(self.sorted_edges(), dtype=np.int64) - 1


def classify_edge(e, sigma: PartitionVector) -> EdgeClass:
    idx = np.asarray(tuple(e), dtype=np.int64) - 1
    if idx.min() < 0 or idx.max() >= sigma.n or len(set(idx.tolist())) != idx.size:
        raise InvalidParams(f"invalid edge {e} for n={sigma.n}")
    lab = sigma.labels[idx]
    return EdgeClass.IN_CLUSTER if np.all(lab == lab[0]) else EdgeClass.CROSS_CLUSTER


def sample_partition(n: int, seed) -> PartitionVector:
    """Uniformly random balanced labeling."""
    if n <= 0 or n % 2:
        raise InvalidParams(f"n must be a positive even number, got {n}")
    rng = as_generator(seed, "partition")
    labels = np.repeat(np.array([1, -1], dtype=np.int64), n // 2)
    return PartitionVector(rng.permutation(labels))


# ---------------------------------------------------------------------------
# exact binomial counts

_MAX_LOGCOMB_TERMS = 10_000_000


def _log_binom_pmf(trials: int, p: float, x: int) -> float:
    if x > _MAX_LOGCOMB_TERMS and trials - x > _MAX_LOGCOMB_TERMS:
        raise TooLarge(f"binomial mode {x} too large for exact inversion")
    j = min(x, trials - x)
    i = np.arange(j, dtype=np.float64)
    log_comb = float(np.sum(np.log(trials - i) - np.log1p(i)))
    return log_comb + x * math.log(p) + (trials - x) * math.log1p(-p)


def sample_binomial(rng: np.random.Generator, trials: int, p: float) -> int:
    """Exact Binomial(trials, p) draw by CDF inversion searched outward from the mode.

    Works for ``trials`` far beyond int64 as long as ``trials * p`` stays moderate.
    """
    if trials < 0 or not 0.0 <= p <= 1.0:
        raise InvalidParams(f"invalid binomial parameters ({trials}, {p})")
    if trials == 0 or p == 0.0:
        return 0
    if p == 1.0:
        return trials
    mode = min(int(math.floor((trials + 1) * p)), trials)
    f_mode = math.exp(_log_binom_pmf(trials, p, mode))
    odds = p / (1.0 - p)
    while True:
        u = rng.random()
        acc = f_mode
        if u < acc:
            return mode
        lo = hi = mode
        f_lo = f_hi = f_mode
        while True:
            if hi < trials and f_hi > 0.0:
                f_hi *= (trials - hi) / (hi + 1) * odds
                hi += 1
                acc += f_hi
                if u < acc:
                    return hi
            if lo > 0 and f_lo > 0.0:
                f_lo *= lo / (trials - lo + 1) / odds
                lo -= 1
                acc += f_lo
                if u < acc:
                    return lo
            if (hi == trials or f_hi == 0.0) and (lo == 0 or f_lo == 0.0):
                break  # rounding left u beyond the accumulated mass; redraw


# ---------------------------------------------------------------------------
# distinct k-set drawing

_ENUMERATION_LIMIT = 2_000_000


def _distinct_rows(rng: np.random.Generator, pool: int, k: int, size: int) -> np.ndarray:
    """Uniform k-subsets of ``range(pool)`` as sorted rows (duplicates-in-row rejected)."""
    rows = np.sort(rng.integers(0, pool, size=(size, k)), axis=1)
    ok = np.all(np.diff(rows, axis=1) > 0, axis=1)
    return rows[ok]


def _draw_in_cluster(rng, sides, k, count, out):
    target = len(out) + count
    half = sides.shape[1]
    while len(out) < target:
        need = target - len(out)
        batch = int(need * 1.3) + 16
        side = rng.integers(0, 2, size=batch)
        rows = _distinct_rows(rng, half, k, batch)
        side = side[: rows.shape[0]]
        verts = np.sort(sides[side[:, None], rows], axis=1) + 1
        for row in map(tuple, verts.tolist()):
            out.add(row)
            if len(out) == target:
                break


def _draw_cross_cluster(rng, labels, n, k, count, out):
    target = len(out) + count
    while len(out) < target:
        need = target - len(out)
        batch = int(need * 1.5) + 16
        rows = _distinct_rows(rng, n, k, batch)
        lab = labels[rows]
        rows = rows[np.any(lab != lab[:, :1], axis=1)] + 1
        for row in map(tuple, rows.tolist()):
            out.add(row)
            if len(out) == target:
                break


def _enumerate_class(labels: np.ndarray, k: int, in_cluster: bool) -> np.ndarray:
    n = labels.size
    if in_cluster:
        parts = []
        for s in (1, -1):
            side = np.flatnonzero(labels == s)
            parts.append(np.array(list(itertools.combinations(side, k)), dtype=np.int64))
        return np.concatenate(parts)
    combos = np.array(list(itertools.combinations(range(n), k)), dtype=np.int64)
    lab = labels[combos]
    return combos[np.any(lab != lab[:, :1], axis=1)]


def _sample_class(rng, labels, k, total, count, in_cluster, out):
    if count == 0:
        return
    if total <= _ENUMERATION_LIMIT and 4 * count > total:
        # dense regime: choose a uniform subset of the enumerated class
        pool = _enumerate_class(labels, k, in_cluster)
        chosen = pool[rng.choice(pool.shape[0], size=count, replace=False)] + 1
        out.update(map(tuple, chosen.tolist()))
    elif in_cluster:
        sides = np.stack([np.flatnonzero(labels == 1), np.flatnonzero(labels == -1)])
        _draw_in_cluster(rng, sides, k, count, out)
    else:
        _draw_cross_cluster(rng, labels, labels.size, k, count, out)


def sample_hypergraph(params: ModelParams, sigma: PartitionVector, seed) -> Hypergraph:
    """Draw H from the planted model given the labeling ``sigma``.

    Equivalent in law to independent Bernoulli(p / q) per k-set: class counts are
    drawn first, then that many distinct uniform k-sets of each class.
    """
    if sigma.n != params.n:
        raise InvalidParams(f"sigma has length {sigma.n}, expected {params.n}")
    rng = as_generator(seed, "hypergraph")
    n, k = params.n, params.k
    m_in = sample_binomial(rng, params.n_in_cluster_sets, params.p)
    m_cr = sample_binomial(rng, params.n_cross_cluster_sets, params.q)
    edges: set[tuple[int, ...]] = set()
    _sample_class(rng, sigma.labels, k, params.n_in_cluster_sets, m_in, True, edges)
    _sample_class(rng, sigma.labels, k, params.n_cross_cluster_sets, m_cr, False, edges)
    return Hypergraph(n, k, frozenset(edges))
