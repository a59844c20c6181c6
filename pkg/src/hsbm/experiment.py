"""Seeded Monte-Carlo trials and (alpha, beta) phase-diagram sweeps.

Trial ``t`` of grid cell ``(i, j)`` uses seed ``mix_seed(base_seed, i, j, t)``,
so a sweep gives identical output for any worker count or scheduling order.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from .certificate import certify
from .core import ModelParams, sample_hypergraph, sample_partition
from .errors import HSBMError, InvalidParams
from .estimators import (MAX_BRUTEFORCE_N, ml_bruteforce, spectral_bisection,
                         trunc_bruteforce, trunc_local_search)
from .graph_ops import hamming_error, weighted_projection
from .rng import mix_seed
from .thresholds import threshold_values

log = logging.getLogger(__name__)

METHODS = ("certificate", "spectral", "ml", "trunc", "trunc-local")
CSV_COLUMNS = ("alpha", "beta", "trials", "successes", "success_rate",
               "mean_lambda3", "mean_hamming_error", "I", "I2", "Isdp")


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one trial; ``(n, k, alpha, beta, method, seed)`` replays it exactly."""

    n: int
    k: int
    alpha: float
    beta: float
    method: str
    seed: int
    success: bool
    lambda3: float | None = None
    hamming: int | None = None
    error: str | None = None


def _estimate(method: str, H, params: ModelParams, seed: int, restarts: int):
    if method == "spectral":
        return {spectral_bisection(weighted_projection(H))}
    if method == "ml":
        assortative = None if params.p == params.q else params.p > params.q
        return ml_bruteforce(H, assortative).candidates
    if method == "trunc":
        return trunc_bruteforce(weighted_projection(H)).candidates
    return trunc_local_search(weighted_projection(H), restarts, seed).candidates


def run_trial(params: ModelParams, method: str, seed: int, tol: float | None = None,
              restarts: int = 4) -> TrialRecord:
    """Sample ``(sigma, H)`` from ``seed`` and apply ``method``.

    Estimator methods succeed only on a unique output equal to ``+-sigma``.
    Model errors are caught and stored on the record.
    """
    if method not in METHODS:
        raise InvalidParams(f"unknown method {method!r}")
    base = dict(n=params.n, k=params.k, alpha=params.alpha, beta=params.beta,
                method=method, seed=seed)
    try:
        sigma = sample_partition(params.n, seed)
        H = sample_hypergraph(params, sigma, seed)
        if method == "certificate":
            rep = certify(H, sigma, tol)
            return TrialRecord(**base, success=rep.success, lambda3=rep.lambda3)
        cands = _estimate(method, H, params, seed, restarts)
        ham = min(hamming_error(x, sigma) for x in cands)
        return TrialRecord(**base, success=(len(cands) == 1 and ham == 0), hamming=ham)
    except HSBMError as exc:
        return TrialRecord(**base, success=False, error=f"{type(exc).__name__}: {exc}")


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 500
    k: int = 6
    alpha_range: tuple[float, float] = (0.0, 180.0)
    beta_range: tuple[float, float] = (0.0, 10.0)
    alpha_steps: int = 20
    beta_steps: int = 20
    trials: int = 30
    base_seed: int = 0
    method: str = "certificate"
    tol: float | None = None
    restarts: int = 4
    out: str | None = None
    fmt: str = "csv"
    workers: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "alpha_range", tuple(float(v) for v in self.alpha_range))
        object.__setattr__(self, "beta_range", tuple(float(v) for v in self.beta_range))
        if self.alpha_steps < 1 or self.beta_steps < 1:
            raise InvalidParams("steps must be >= 1")
        if self.trials < 1:
            raise InvalidParams("trials must be >= 1")
        for lo, hi in (self.alpha_range, self.beta_range):
            if hi < lo:
                raise InvalidParams(f"empty range ({lo}, {hi})")
        if self.method not in METHODS:
            raise InvalidParams(f"unknown method {self.method!r}")
        if self.method in ("ml", "trunc") and self.n > MAX_BRUTEFORCE_N:
            raise InvalidParams(f"method {self.method} requires n <= {MAX_BRUTEFORCE_N}")
        if self.fmt not in ("csv", "json"):
            raise InvalidParams(f"unknown format {self.fmt!r}")

    def alphas(self) -> list[float]:
        return [float(a) for a in np.linspace(*self.alpha_range, self.alpha_steps)]

    def betas(self) -> list[float]:
        return [float(b) for b in np.linspace(*self.beta_range, self.beta_steps)]


@dataclass(frozen=True)
class CellResult:
    alpha: float
    beta: float
    trials: int
    successes: int
    success_rate: float
    mean_lambda3: float | None
    mean_hamming_error: float | None
    I: float
    I2: float
    Isdp: float
    records: tuple = ()

    @property
    def errors(self) -> list[str]:
        return [r.error for r in self.records if r.error]

    def as_row(self) -> dict:
        return {name: getattr(self, name) for name in CSV_COLUMNS}


def trial_seed(base_seed: int, i: int, j: int, t: int) -> int:
    return mix_seed(base_seed, i, j, t)


def _trial_task(task):
    n, k, alpha, beta, method, seed, tol, restarts = task
    try:
        params = ModelParams(n, k, alpha, beta)
    except HSBMError as exc:
        return TrialRecord(n, k, alpha, beta, method, seed, False,
                           error=f"{type(exc).__name__}: {exc}")
    return run_trial(params, method, seed, tol, restarts)


_LIMITER = None


def _init_worker():
    # one BLAS thread per process; parallelism comes from the pool
    global _LIMITER
    from threadpoolctl import threadpool_limits
    _LIMITER = threadpool_limits(1)


def default_workers() -> int:
    env = os.environ.get("HSBM_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _aggregate(alpha, beta, k, records) -> CellResult:
    successes = sum(r.success for r in records)
    lams = [r.lambda3 for r in records if r.lambda3 is not None]
    hams = [r.hamming for r in records if r.hamming is not None]
    th = threshold_values(alpha, beta, k)
    return CellResult(alpha, beta, len(records), successes, successes / len(records),
                      float(np.mean(lams)) if lams else None,
                      float(np.mean(hams)) if hams else None,
                      th["I"], th["I2"], th["Isdp"], tuple(records))


def phase_diagram(config: ExperimentConfig, progress=None) -> list[CellResult]:
    """Run every cell of the grid; cells come back alpha-major."""
    alphas, betas = config.alphas(), config.betas()
    tasks = []
    for i, a in enumerate(alphas):
        for j, b in enumerate(betas):
            for t in range(config.trials):
                tasks.append((config.n, config.k, a, b, config.method,
                              trial_seed(config.base_seed, i, j, t), config.tol, config.restarts))
    workers = config.workers or default_workers()
    if workers == 1:
        records = []
        for idx, task in enumerate(tasks):
            records.append(_trial_task(task))
            if progress:
                progress(idx + 1, len(tasks))
    else:
        with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker) as pool:
            chunk = max(1, len(tasks) // (8 * workers))
            records = list(pool.map(_trial_task, tasks, chunksize=chunk))
    cells = []
    per_cell = config.trials
    for c, (a, b) in enumerate((a, b) for a in alphas for b in betas):
        cell_records = records[c * per_cell:(c + 1) * per_cell]
        cells.append(_aggregate(a, b, config.k, cell_records))
        for err in cells[-1].errors:
            log.warning("cell alpha=%s beta=%s: %s", a, b, err)
    return cells


# ---------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def cells_to_csv(cells: list[CellResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for cell in cells:
        row = cell.as_row()
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def cells_to_json(cells: list[CellResult]) -> str:
    return json.dumps([cell.as_row() for cell in cells], indent=1) + "\n"


def read_cells_csv(text: str) -> list[dict]:
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        rows.append({k: (float(v) if v != "" else None) for k, v in row.items()})
    return rows


# ---------------------------------------------------------------------------
# flat key=value config files

_CONFIG_KEYS = {
    "n": int, "k": int, "alpha_min": float, "alpha_max": float, "beta_min": float,
    "beta_max": float, "steps": int, "alpha_steps": int, "beta_steps": int,
    "trials": int, "seed": int, "method": str, "tol": float, "restarts": int,
    "out": str, "format": str, "workers": int,
}


def parse_config_text(text: str) -> dict:
    """Parse ``key=value`` lines (``#`` comments) into typed values."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParams(f"config line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise InvalidParams(f"config line {lineno}: unknown key {key!r}")
        try:
            out[key] = _CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise InvalidParams(f"config line {lineno}: bad value for {key}: {value!r}") from exc
    return out


def config_from_mapping(values: dict, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Apply flat settings (config-file or CLI names) on top of ``base``."""
    cur = asdict(base or ExperimentConfig())
    a_lo, a_hi = cur["alpha_range"]
    b_lo, b_hi = cur["beta_range"]
    for key, value in values.items():
        if value is None:
            continue
        if key == "alpha_min":
            a_lo = value
        elif key == "alpha_max":
            a_hi = value
        elif key == "beta_min":
            b_lo = value
        elif key == "beta_max":
            b_hi = value
        elif key == "steps":
            cur["alpha_steps"] = cur["beta_steps"] = value
        elif key == "seed":
            cur["base_seed"] = value
        elif key == "format":
            cur["fmt"] = value
        elif key in {f.name for f in fields(ExperimentConfig)}:
            cur[key] = value
        else:
            raise InvalidParams(f"unknown setting {key!r}")
    cur["alpha_range"] = (a_lo, a_hi)
    cur["beta_range"] = (b_lo, b_hi)
    return ExperimentConfig(**cur)
