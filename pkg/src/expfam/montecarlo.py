"""Monte Carlo bias/MSE study over distribution x method x sample size.

Replication i of a cell draws its sample from ``RngStream(cell_seed, i)``;
the cell seed is a SplitMix64 mix of (seed, distribution index, method index,
n).  Results are therefore identical for any worker count.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, EstimationError, ExpFamError
from .estimators import estimate_power
from .fitting import FIT_METHODS, fit
from .generators import REGISTRY, spec_from_canonical
from .sampling import RngStream, sample_family
from .statistics import HyperParams

__all__ = [
    "DEFAULT_N_GRID",
    "SimDistribution",
    "SimConfig",
    "MetricRow",
    "CellError",
    "GridResult",
    "relative_bias",
    "mse",
    "summarize",
    "cell_seed",
    "run_cell",
    "run_grid",
    "default_workers",
]

DEFAULT_N_GRID = (15, 30, 60, 120, 240, 480, 760)
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SimDistribution:
    """A registry row with its known shape constants.

    ``s`` selects the power-generator closed form x^(-s); left as None it is
    taken from the generator when that is a pure power.
    """

    name: str
    shape_params: tuple[tuple[str, float], ...] = ()
    s: float | None = None

    def __post_init__(self):
        if self.name not in REGISTRY:
            raise ConfigError(f"unknown distribution {self.name!r}")

    @property
    def label(self) -> str:
        if not self.shape_params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v:g}" for k, v in self.shape_params)

    def spec(self, mu: float, sigma: float):
        return spec_from_canonical(self.name, dict(self.shape_params), mu, sigma)

    def power_s(self) -> float | None:
        if self.s is not None:
            return self.s
        return self.spec(1.0, 1.0).generator.s


@dataclass(frozen=True)
class SimConfig:
    distributions: tuple[SimDistribution, ...]
    true_mu: float = 2.0
    true_sigma: float = 1.0
    n_grid: tuple[int, ...] = DEFAULT_N_GRID
    replications: int = 10_000
    hp: HyperParams = field(default_factory=HyperParams)
    methods: tuple[str, ...] = ("closed_form",)
    seed: int = 20250101

    def __post_init__(self):
        if not self.distributions:
            raise ConfigError("at least one distribution is required")
        if not self.n_grid or any(n < 2 for n in self.n_grid):
            raise ConfigError("n_grid must be a nonempty list of sample sizes >= 2")
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ConfigError("n_grid must be strictly increasing")
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")
        if not (self.true_mu > 0 and self.true_sigma > 0):
            raise ConfigError("true_mu and true_sigma must be positive")
        if not self.methods:
            raise ConfigError("at least one method is required")
        for m in self.methods:
            if m not in FIT_METHODS:
                raise ConfigError(f"unknown method {m!r}; choose from {', '.join(FIT_METHODS)}")
        if not 0 <= self.seed <= _MASK64:
            raise ConfigError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class MetricRow:
    distribution: str
    method: str
    parameter: str
    n: int
    rel_bias: float
    mc_se_bias: float
    mse: float
    mc_se_mse: float
    failures: int
    seed: int
    replications: int


@dataclass(frozen=True)
class CellError:
    distribution: str
    method: str
    n: int
    message: str


@dataclass
class GridResult:
    rows: list[MetricRow]
    errors: list[CellError]
    failure_reasons: dict[str, dict[str, int]]

    @property
    def ok(self) -> bool:
        return not self.errors


# ---------------------------------------------------------------------------
# metrics


def _checked(estimates, truth: float) -> np.ndarray:
    est = np.asarray(estimates, dtype=float).ravel()
    if est.size == 0:
        raise ConfigError("no estimates to summarise")
    if truth == 0:
        raise ConfigError("truth must be nonzero")
    return est


def relative_bias(estimates, truth: float) -> float:
    """Mean of |estimate - truth| / |truth| (an absolute relative error)."""
    est = _checked(estimates, truth)
    return math.fsum(np.abs((est - truth) / truth).tolist()) / est.size


def mse(estimates, truth: float) -> float:
    est = _checked(estimates, truth)
    return math.fsum(((est - truth) ** 2).tolist()) / est.size


def _se(values: np.ndarray) -> float:
    if values.size < 2:
        return math.nan
    return float(np.std(values, ddof=1) / math.sqrt(values.size))


def summarize(estimates, truth: float) -> tuple[float, float, float, float]:
    """(rel_bias, its MC standard error, mse, its MC standard error)."""
    est = _checked(estimates, truth)
    abs_rel = np.abs((est - truth) / truth)
    sq = (est - truth) ** 2
    return relative_bias(est, truth), _se(abs_rel), mse(est, truth), _se(sq)


# ---------------------------------------------------------------------------
# execution


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def cell_seed(seed: int, dist_index: int, method_index: int, n: int) -> int:
    h = _splitmix64(seed)
    for part in (dist_index, method_index, n):
        h = _splitmix64(h ^ part)
    return h


def default_workers() -> int:
    env = os.environ.get("EXPFAM_THREADS")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"EXPFAM_THREADS must be an integer, got {env!r}") from None
        if value < 1:
            raise ConfigError("EXPFAM_THREADS must be >= 1")
        return value
    return os.cpu_count() or 1


def _replicate(task):
    dist, mu, sigma, method, n, hp, seed, start, stop = task
    spec = dist.spec(mu, sigma)
    s = dist.power_s() if method == "closed_form" else None
    out = []
    for i in range(start, stop):
        try:
            x = sample_family(RngStream(seed, i), spec, n)
            if s is not None:
                est = estimate_power(x, s, hp)
            else:
                est = fit(spec, x, method, hp)
            out.append((est.mu_hat, est.sigma_hat))
        except (EstimationError, ArithmeticError, ExpFamError) as exc:
            out.append(getattr(exc, "reason", type(exc).__name__))
    return out


def _chunks(replications: int, workers: int) -> list[tuple[int, int]]:
    # stream ids run 1..N
    pieces = 1 if workers <= 1 else min(replications, 4 * workers)
    edges = np.linspace(1, replications + 1, pieces + 1).round().astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def _reduce(label, method, n, seed, replications, truth, results):
    ests = [r for r in results if not isinstance(r, str)]
    reasons = Counter(r for r in results if isinstance(r, str))
    failures = replications - len(ests)
    if not ests:
        raise EstimationError(f"all {replications} replications failed: {dict(reasons)}")
    arr = np.asarray(ests, dtype=float)
    rows = []
    for j, (param, true_value) in enumerate((("mu", truth[0]), ("sigma", truth[1]))):
        rb, se_rb, m, se_m = summarize(arr[:, j], true_value)
        rows.append(MetricRow(label, method, param, n, rb, se_rb, m, se_m, failures, seed, replications))
    return rows, dict(reasons)


def _execute(tasks, workers):
    if workers <= 1:
        return [_replicate(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_replicate, tasks))


def run_cell(
    dist: SimDistribution,
    method: str,
    n: int,
    replications: int,
    truth: tuple[float, float],
    hp: HyperParams,
    seed: int,
    workers: int = 1,
) -> tuple[MetricRow, MetricRow]:
    """Run one (distribution, method, n) cell; ``seed`` is used as the cell seed."""
    if method not in FIT_METHODS:
        raise ConfigError(f"unknown method {method!r}")
    tasks = [
        (dist, truth[0], truth[1], method, n, hp, seed, a, b)
        for a, b in _chunks(replications, workers)
    ]
    results = [r for part in _execute(tasks, workers) for r in part]
    rows, _ = _reduce(dist.label, method, n, seed, replications, truth, results)
    return rows[0], rows[1]


def run_grid(config: SimConfig, workers: int | None = None) -> GridResult:
    """Every cell of the config; rows sorted by (distribution, method, parameter, n)."""
    workers = default_workers() if workers is None else workers
    truth = (config.true_mu, config.true_sigma)
    cells = []
    tasks = []
    for di, dist in enumerate(config.distributions):
        for mi, method in enumerate(config.methods):
            for n in config.n_grid:
                seed = cell_seed(config.seed, di, mi, n)
                chunks = _chunks(config.replications, workers)
                cells.append((dist, method, n, seed, len(chunks)))
                tasks.extend(
                    (dist, truth[0], truth[1], method, n, config.hp, seed, a, b) for a, b in chunks
                )
    outputs = iter(_execute(tasks, workers))

    rows, errors, reasons = [], [], {}
    for dist, method, n, seed, n_chunks in cells:
        results = [r for _ in range(n_chunks) for r in next(outputs)]
        key = f"{dist.label}|{method}|{n}"
        try:
            cell_rows, cell_reasons = _reduce(
                dist.label, method, n, seed, config.replications, truth, results
            )
        except EstimationError as exc:
            errors.append(CellError(dist.label, method, n, str(exc)))
            reasons[key] = dict(Counter(r for r in results if isinstance(r, str)))
            continue
        rows.extend(cell_rows)
        if cell_reasons:
            reasons[key] = cell_reasons
    rows.sort(key=lambda r: (r.distribution, r.method, r.parameter, r.n))
    return GridResult(rows, errors, reasons)
