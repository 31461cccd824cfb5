"""Closed-form (mu, sigma) estimators derived from the MAP stationarity system.

With data on the X scale, the sigma-score and the prior-limit p-score are

    d/dsigma:  n mu / sigma - mu n X1 + (alpha2 - 1) / sigma - beta2 = 0
    p-limit:   1 + X2 - mu (sigma X4 - X3) = 0

The second gives mu as a function of sigma; substituting it in the first
leaves the quadratic

    q(sigma) = (beta2/n) X4 sigma^2 - [X5/n - (1 + X2) X1] sigma
               + [(alpha2 - 1)/n X3 - (1 + X2)]

whose '+' root is sigma-hat.  Only (alpha2, beta2) enter; the mu-prior
hyperparameters drop out entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from scipy.optimize import brentq

from .errors import (
    DegenerateDenominator,
    NegativeDiscriminant,
    NonpositiveRoot,
    NoSignChange,
    ZeroQuadraticCoefficient,
)
from .generators import Generator, SigmaLink, power_generator
from .statistics import HyperParams, SampleStats, compute_stats

__all__ = [
    "METHODS",
    "Diagnostics",
    "Estimate",
    "SigmaRoot",
    "sigma_quadratic",
    "mu_of_sigma",
    "estimate_sigma",
    "estimate_mu",
    "stationarity_residuals",
    "closed_form",
    "estimate_general",
    "estimate_power",
    "estimate_sigma_fixed_mu",
    "estimate_mu_fixed_sigma",
    "estimate_mu_linked",
]

METHODS = (
    "closed_form",
    "closed_form_power",
    "fixed_mu",
    "fixed_sigma",
    "linked",
    "map_numeric",
    "ml_numeric",
)

# Below this the sigma-prior rate is treated as zero and q is solved as linear.
BETA2_LINEAR_CUTOFF = 1e-14


@dataclass(frozen=True)
class Diagnostics:
    discriminant: float = math.nan
    residual_sigma_eq: float = math.nan
    residual_mu_eq: float = math.nan


@dataclass(frozen=True)
class Estimate:
    mu_hat: float | None
    sigma_hat: float | None
    method: str
    diagnostics: Diagnostics = field(default_factory=Diagnostics)

    def as_dict(self) -> dict:
        return {
            "mu": self.mu_hat,
            "sigma": self.sigma_hat,
            "method": self.method,
            "diagnostics": {
                "discriminant": self.diagnostics.discriminant,
                "residual_sigma_eq": self.diagnostics.residual_sigma_eq,
                "residual_mu_eq": self.diagnostics.residual_mu_eq,
            },
        }


class SigmaRoot(NamedTuple):
    sigma: float
    discriminant: float


def sigma_quadratic(stats: SampleStats, hp: HyperParams) -> tuple[float, float, float]:
    """Coefficients (a, b, c) of q(sigma) = a sigma^2 - b sigma + c."""
    n = stats.n
    one_plus = 1.0 + stats.xbar2
    a = hp.beta2 / n * stats.xbar4
    b = stats.xbar5 / n - one_plus * stats.xbar1
    c = (hp.alpha2 - 1.0) / n * stats.xbar3 - one_plus
    return a, b, c


def _positive_ratio(num: float, den: float, what: str) -> float:
    if den == 0.0:
        raise DegenerateDenominator(f"{what}: denominator is zero")
    value = num / den
    if not (value > 0.0 and math.isfinite(value)):
        raise DegenerateDenominator(
            f"{what}: numerator {num!r} / denominator {den!r} is not a positive number"
        )
    return value


def mu_of_sigma(stats: SampleStats, sigma: float) -> float:
    """mu = (1 + X2) / (sigma X4 - X3)."""
    return _positive_ratio(1.0 + stats.xbar2, sigma * stats.xbar4 - stats.xbar3, "mu(sigma)")


def estimate_sigma(stats: SampleStats, hp: HyperParams) -> SigmaRoot:
    """Positive ('+') root of the sigma quadratic.

    The root is evaluated in whichever of the two algebraically identical
    forms avoids cancellation:

        (b + sqrt(D)) / (2a)   or   2c / (b - sqrt(D))

    With the near-flat hyperparameters used in practice a is O(1e-2/n) and the
    first form loses most of its digits.
    """
    if stats.xbar4 == 0.0:
        raise ZeroQuadraticCoefficient("X4 is zero; the sigma quadratic is degenerate")
    a, b, c = sigma_quadratic(stats, hp)
    disc = b * b - 4.0 * a * c
    if hp.beta2 < BETA2_LINEAR_CUTOFF:
        if b == 0.0:
            raise ZeroQuadraticCoefficient("linear sigma equation has zero slope")
        root = c / b
        if not (root > 0.0 and math.isfinite(root)):
            raise NonpositiveRoot(root)
        return SigmaRoot(root, b * b)
    if not disc >= 0.0:
        raise NegativeDiscriminant(disc)
    r = math.sqrt(disc)
    if b < 0.0:
        plus = 2.0 * c / (b - r)
    else:
        plus = (b + r) / (2.0 * a)
    if not (plus > 0.0 and math.isfinite(plus)):
        minus = (b - r) / (2.0 * a)
        raise NonpositiveRoot(plus, minus)
    return SigmaRoot(plus, disc)


def estimate_mu(stats: SampleStats, sigma_hat: float) -> float:
    return mu_of_sigma(stats, sigma_hat)


def stationarity_residuals(
    stats: SampleStats, hp: HyperParams, mu: float, sigma: float
) -> tuple[float, float]:
    """(d/dsigma score, p-limit score), both in summed (times-n) form."""
    n = stats.n
    sigma_eq = n * mu / sigma - mu * n * stats.xbar1 + (hp.alpha2 - 1.0) / sigma - hp.beta2
    p_eq = n * (1.0 + stats.xbar2 - mu * (sigma * stats.xbar4 - stats.xbar3))
    return sigma_eq, p_eq


def closed_form(stats: SampleStats, hp: HyperParams, method: str = "closed_form") -> Estimate:
    """(mu-hat, sigma-hat) from precomputed statistics."""
    sigma_hat, disc = estimate_sigma(stats, hp)
    mu_hat = estimate_mu(stats, sigma_hat)
    res_sigma, res_p = stationarity_residuals(stats, hp, mu_hat, sigma_hat)
    return Estimate(mu_hat, sigma_hat, method, Diagnostics(disc, res_sigma, res_p))


def estimate_general(g: Generator, sample, hp: HyperParams) -> Estimate:
    """Closed form for an arbitrary generator."""
    return closed_form(compute_stats(g, sample, hp), hp)


def estimate_power(sample, s: float, hp: HyperParams) -> Estimate:
    """Closed form for T(x) = x^(-s) (gamma s=-1, inverse gamma s=1,
    Weibull s=-delta, inverse Weibull s=delta)."""
    stats = compute_stats(power_generator(s), sample, hp)
    return closed_form(stats, hp, method="closed_form_power")


def estimate_sigma_fixed_mu(stats: SampleStats, mu0: float) -> float:
    """sigma-hat = [(1 + X2)/mu0 + X3] / X4 when mu = mu0 is known."""
    if stats.xbar4 == 0.0:
        raise ZeroQuadraticCoefficient("X4 is zero; sigma is not identified with mu fixed")
    return _positive_ratio((1.0 + stats.xbar2) / mu0 + stats.xbar3, stats.xbar4, "sigma(mu0)")


def estimate_mu_fixed_sigma(stats: SampleStats, sigma0: float) -> float:
    return _positive_ratio(
        1.0 + stats.xbar2, sigma0 * stats.xbar4 - stats.xbar3, "mu(sigma0)"
    )


def estimate_mu_linked(stats: SampleStats, link: SigmaLink) -> float:
    """Solve mu [g(mu) X4 - X3] = 1 + X2 for mu.

    Reciprocal links g(mu) = c/mu give mu = (c X4 - 1 - X2) / X3 directly;
    anything else is bracketed on [1e-8, 1e8].
    """
    one_plus = 1.0 + stats.xbar2
    if link.c is not None:
        if stats.xbar3 == 0.0:
            raise DegenerateDenominator("X3 is zero; reciprocal-link estimator undefined")
        return _positive_ratio(link.c * stats.xbar4 - one_plus, stats.xbar3, "linked mu")

    def f(mu):
        return mu * (link.g(mu) * stats.xbar4 - stats.xbar3) - one_plus

    lo, hi = 1e-8, 1e8
    f_lo, f_hi = f(lo), f(hi)
    if not (math.isfinite(f_lo) and math.isfinite(f_hi)) or f_lo * f_hi > 0:
        raise NoSignChange(f"linked-mu equation has no sign change on [{lo}, {hi}]")
    return brentq(f, lo, hi, xtol=1e-300, rtol=1e-15, maxiter=500)
