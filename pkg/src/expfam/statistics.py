"""h-functions and the five sample averages consumed by the closed-form estimators.

For a generator T the per-observation transforms are

    h1(x) = T(x)
    h2(x) = log x + [T''(x)/T'(x) - T'(x)/T(x)] * x log x
    h3(x) = T'(x)/T(x) * x log x
    h4(x) = T'(x) * x log x

and X5 = beta2 * X3 + (alpha2 - 1) * X4.  For a power generator T = x^k,
h2 vanishes identically and the others reduce to x^k, k log x, x^k k log x;
those closed forms are used directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, NumericRangeError
from .generators import Generator

__all__ = ["HyperParams", "SampleStats", "h_values", "compute_stats"]

DEFAULT_HYPER = 0.01


@dataclass(frozen=True)
class HyperParams:
    """Gamma(alpha, beta) prior hyperparameters for mu (1) and sigma (2).

    The closed-form estimators only ever read ``alpha2`` and ``beta2``; the
    mu-prior pair is carried for the numeric MAP baseline.
    """

    alpha2: float = DEFAULT_HYPER
    beta2: float = DEFAULT_HYPER
    alpha1: float = DEFAULT_HYPER
    beta1: float = DEFAULT_HYPER

    def __post_init__(self):
        for name in ("alpha1", "beta1", "alpha2", "beta2"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(f"hyperparameter {name} must be a positive finite number, got {v!r}")


@dataclass(frozen=True)
class SampleStats:
    n: int
    xbar1: float
    xbar2: float
    xbar3: float
    xbar4: float
    xbar5: float


def _sample_array(sample) -> np.ndarray:
    x = np.asarray(sample, dtype=float).ravel()
    if x.size == 0:
        raise ConfigError("sample is empty")
    bad = ~(x > 0) | ~np.isfinite(x)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise DomainError(f"observation must be finite and positive, got {x[i]!r}", index=i)
    return x


def _h_arrays(g: Generator, x: np.ndarray, analytic_power: bool = True):
    logx = np.log(x)
    with np.errstate(all="ignore"):
        if analytic_power and g.power is not None:
            k = g.power
            t = np.power(x, k)
            h3 = k * logx
            h4 = t * h3
            h2 = np.zeros_like(x)
            checks = (("T(x)", t, True),)
        else:
            t = g.T(x)
            dt = g.dT(x)
            d2t = g.d2T(x)
            xlogx = x * logx
            ratio = dt / t
            h2 = logx + (d2t / dt - ratio) * xlogx
            h3 = ratio * xlogx
            h4 = dt * xlogx
            checks = (("T(x)", t, True), ("T'(x)", dt, True), ("T''(x)", d2t, False))
    for what, values, nonzero in checks:
        bad = ~np.isfinite(values)
        if nonzero:
            bad |= values == 0
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise NumericRangeError(f"{g.name}: {what} is not finite/nonzero", index=i)
    for h in (h2, h3, h4):
        bad = ~np.isfinite(h)
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise NumericRangeError(f"{g.name}: h-function is not finite", index=i)
    return t, h2, h3, h4


def h_values(g: Generator, x: float) -> tuple[float, float, float, float]:
    """(h1, h2, h3, h4) at a single point."""
    arr = _sample_array([x])
    return tuple(float(h[0]) for h in _h_arrays(g, arr))


def compute_stats(
    g: Generator, sample, hp: HyperParams, *, analytic_power: bool = True
) -> SampleStats:
    """Sample averages X1..X5 of the h-functions.

    Each mean is an exactly rounded sum (``math.fsum``) divided by n, so the
    result does not depend on the order of the sample.  ``analytic_power=False``
    forces the generic derivative-based h-functions even for power generators
    (used to cross-check the two routes).
    """
    x = _sample_array(sample)
    n = x.size
    h1, h2, h3, h4 = _h_arrays(g, x, analytic_power)
    xbar1 = math.fsum(h1.tolist()) / n
    xbar2 = math.fsum(h2.tolist()) / n
    xbar3 = math.fsum(h3.tolist()) / n
    xbar4 = math.fsum(h4.tolist()) / n
    xbar5 = hp.beta2 * xbar3 + (hp.alpha2 - 1.0) * xbar4
    return SampleStats(n, xbar1, xbar2, xbar3, xbar4, xbar5)
