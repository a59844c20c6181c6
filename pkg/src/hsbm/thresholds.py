"""Recovery thresholds and the large-deviation exponent for weighted binomial sums.

For ``X = sum_i c_i Y_i`` with ``Y_i ~ Bin(N_i, p_i)``, ``N_i p_i ~ alpha_i rho_i h ln n``,
the lower tail ``Pr(X <= delta h ln n)`` decays like ``exp(-I* h ln n)`` with

    I* = max_{t >= 0}  phi(t),   phi(t) = -delta t + sum_i alpha_i rho_i (1 - exp(-c_i t)).

``phi`` is concave, so ``I*`` is found by bisection on the decreasing ``phi'``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.stats import binom

from .errors import InvalidParams, InvalidSpec, TooLarge


@dataclass(frozen=True)
class TailSpec:
    """Terms ``(c, alpha, rho)`` plus the slope ``delta`` and scale ``h``."""

    terms: tuple
    delta: float = 0.0
    h: float = 1.0

    def __post_init__(self):
        terms = tuple((float(c), float(a), float(r)) for c, a, r in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise InvalidSpec("at least one term is required")
        for c, a, r in terms:
            if c == 0:
                raise InvalidSpec("weights must be nonzero")
            if not a > 0:
                raise InvalidSpec(f"rates must be positive, got {a}")
            if not 0 < r <= 1:
                raise InvalidSpec(f"densities must lie in (0, 1], got {r}")
        if all(c > 0 for c, _, _ in terms):
            raise InvalidSpec("at least one weight must be negative")
        if not self.drift > self.delta:
            raise InvalidSpec(f"need sum c*alpha*rho = {self.drift} > delta = {self.delta}")
        if not self.h > 0:
            raise InvalidSpec("h must be positive")

    @property
    def drift(self) -> float:
        return sum(c * a * r for c, a, r in self.terms)

    def phi(self, t: float) -> float:
        return -self.delta * t + sum(a * r * -math.expm1(-c * t) for c, a, r in self.terms)

    def phi_prime(self, t: float) -> float:
        return -self.delta + sum(c * a * r * math.exp(-c * t) for c, a, r in self.terms)


@dataclass(frozen=True)
class ExponentResult:
    value: float
    t_star: float


def generic_exponent(spec: TailSpec, t_tol: float = 1e-12) -> ExponentResult:
    lo, hi = 0.0, 1.0
    while spec.phi_prime(hi) >= 0:
        lo, hi = hi, 2 * hi
        if hi > 1e6:
            raise InvalidSpec("phi' does not change sign")
    while hi - lo > t_tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if spec.phi_prime(mid) > 0:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    return ExponentResult(spec.phi(t), t)


def exponent_I(alpha: float, beta: float, k: int) -> float:
    """Statistical threshold ``(sqrt(alpha) - sqrt(beta))^2 / 2^(k-1)``."""
    if alpha < 0 or beta < 0:
        raise InvalidParams("rates must be nonnegative")
    return (math.sqrt(alpha) - math.sqrt(beta)) ** 2 / 2 ** (k - 1)


def i2_spec(alpha: float, beta: float, k: int) -> TailSpec:
    """Tail spec of the single-vertex swap statistic for the truncated objective.

    The ``a = (k-1)/2`` term has zero weight for odd ``k`` and is left out.
    """
    terms = []
    for a in range(k):
        c = k - 1 - 2 * a
        if c == 0:
            continue
        terms.append((c, alpha if a == 0 else beta, math.comb(k - 1, a) / 2 ** (k - 1)))
    return TailSpec(tuple(terms))


def exponent_I2(alpha: float, beta: float, k: int) -> float:
    if not alpha > beta >= 0:
        raise InvalidParams(f"I2 needs alpha > beta >= 0, got alpha={alpha}, beta={beta}")
    if beta == 0:
        # only the positive-weight term survives; the max is its t -> inf limit
        return alpha / 2 ** (k - 1)
    return generic_exponent(i2_spec(alpha, beta, k)).value


def exponent_Isdp(alpha: float, beta: float, k: int) -> float:
    if not alpha > beta >= 0:
        raise InvalidParams(f"I_sdp needs alpha > beta >= 0, got alpha={alpha}, beta={beta}")
    frac = k / 2**k
    denom = frac * alpha + (1 - frac) * beta
    return (k - 1) / 2 ** (2 * k) * (alpha - beta) ** 2 / denom


def threshold_values(alpha: float, beta: float, k: int) -> dict[str, float]:
    """``I``, ``I2``, ``Isdp`` at one point; ``I2`` and ``Isdp`` read 0 when ``alpha <= beta``."""
    out = {"I": exponent_I(alpha, beta, k), "I2": 0.0, "Isdp": 0.0}
    if alpha > beta:
        out["I2"] = exponent_I2(alpha, beta, k)
        out["Isdp"] = exponent_Isdp(alpha, beta, k)
    return out


THRESHOLD_FUNCTIONS: dict[str, Callable[[float, float, int], float]] = {
    "I": exponent_I,
    "I2": exponent_I2,
    "Isdp": exponent_Isdp,
}


# ---------------------------------------------------------------------------
# exact tail oracle

MAX_SUPPORT = 1_000_000
PRUNE = 1e-300


def _rational(c) -> Fraction:
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    f = Fraction(str(c)).limit_denominator(10**6)
    if float(f) != float(c):
        raise InvalidSpec(f"weight {c} is not a small-denominator rational")
    return f


def tail_oracle_exact(counts: Sequence[tuple[int, float, float]], threshold: float) -> float:
    """``Pr(sum_i c_i Y_i <= threshold)`` for independent ``Y_i ~ Bin(N_i, p_i)``.

    ``counts`` holds ``(N, p, c)`` triples.  Weights are scaled to a common
    integer lattice and the distribution is convolved exactly.
    """
    if not counts:
        raise InvalidSpec("no terms")
    weights = [_rational(c) for _, _, c in counts]
    denom = math.lcm(*(w.denominator for w in weights))
    ints = [int(w * denom) for w in weights]
    if sum(abs(c) * N for (N, _, _), c in zip(counts, ints)) > MAX_SUPPORT:
        raise TooLarge(f"support exceeds {MAX_SUPPORT}")
    offset = 0  # lattice value of index 0
    dist = np.ones(1)
    for (N, p, _), c in zip(counts, ints):
        if not 0 <= p <= 1 or N < 0:
            raise InvalidSpec(f"invalid binomial ({N}, {p})")
        if c == 0:
            continue
        pmf = binom.pmf(np.arange(N + 1), N, p)
        spread = np.zeros(abs(c) * N + 1)
        if c > 0:
            spread[::c] = pmf
        else:
            spread[::-c] = pmf[::-1]
            offset += c * N
        dist = np.convolve(dist, spread)
        keep = np.flatnonzero(dist >= PRUNE)
        if keep.size == 0:
            raise InvalidSpec("all mass pruned")
        dist = dist[keep[0]: keep[-1] + 1]
        offset += int(keep[0])
    cutoff = math.floor(Fraction(threshold) * denom) - offset
    if cutoff < 0:
        return 0.0
    if cutoff >= dist.size - 1:
        return 1.0
    return float(min(1.0, dist[: cutoff + 1].sum()))


# ---------------------------------------------------------------------------
# contour tracing


@dataclass(frozen=True)
class Contour:
    fn: str
    level: float
    k: int
    points: tuple  # (alpha, beta)
    missing: tuple  # beta rows with no crossing


def contour(fn: str, level: float, alpha_range: tuple[float, float],
            beta_range: tuple[float, float], steps: int, k: int,
            tol: float = 1e-6) -> Contour:
    """Per beta row, the alpha >= beta where ``fn`` crosses ``level``."""
    if fn not in THRESHOLD_FUNCTIONS:
        raise InvalidParams(f"unknown threshold function {fn!r}")
    if steps < 1:
        raise InvalidParams("steps must be >= 1")
    f = THRESHOLD_FUNCTIONS[fn]

    def value(a, b):
        return f(a, b, k) if a > b else 0.0

    points, missing = [], []
    a_max = alpha_range[1]
    for beta in np.linspace(beta_range[0], beta_range[1], steps):
        beta = float(beta)
        lo = max(beta, alpha_range[0])
        if lo > a_max or value(a_max, beta) < level:
            missing.append(beta)
            continue
        if value(lo, beta) >= level:
            points.append((lo, beta))
            continue
        hi = a_max
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if value(mid, beta) < level:
                lo = mid
            else:
                hi = mid
        points.append((0.5 * (lo + hi), beta))
    return Contour(fn, float(level), k, tuple(points), tuple(missing))
