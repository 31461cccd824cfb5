"""Iterative MAP and ML fitters used as comparison baselines.

The log-likelihood of an i.i.d. sample depends on the data only through
n, sum T(x_i), sum log T(x_i) and sum log|T'(x_i)|, so those sums are formed
once and every objective/score evaluation afterwards is O(1).

Optimisation runs in (log mu, log sigma): Nelder-Mead from the closed-form
estimate (moment heuristic if that fails), then Newton steps using the
analytic score and a central-difference Hessian of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import ConfigError, EstimationError
from .estimators import Diagnostics, Estimate, closed_form
from .generators import DistributionSpec, Generator, eval_T, eval_T_prime
from .special import digamma, ln_gamma
from .statistics import HyperParams, compute_stats

__all__ = [
    "OptimizerReport",
    "SufficientSums",
    "sufficient_sums",
    "log_likelihood",
    "log_posterior",
    "score",
    "fit_map_numeric",
    "fit_ml_numeric",
]

GRAD_TOL = 1e-8
MAX_ITER = 500


@dataclass(frozen=True)
class OptimizerReport:
    converged: bool
    iterations: int
    final_gradient_norm: float
    objective: float


@dataclass(frozen=True)
class SufficientSums:
    n: int
    sum_T: float
    sum_log_T: float
    sum_log_abs_dT: float


def _generator(spec) -> Generator:
    return spec.generator if isinstance(spec, DistributionSpec) else spec


def sufficient_sums(spec, sample) -> SufficientSums:
    g = _generator(spec)
    x = np.asarray(sample, dtype=float).ravel()
    if x.size == 0:
        raise ConfigError("sample is empty")
    t = np.atleast_1d(eval_T(g, x))
    dt = np.atleast_1d(eval_T_prime(g, x))
    return SufficientSums(
        n=x.size,
        sum_T=math.fsum(t.tolist()),
        sum_log_T=math.fsum(np.log(t).tolist()),
        sum_log_abs_dT=math.fsum(np.log(np.abs(dt)).tolist()),
    )


def _sums(spec, sample) -> SufficientSums:
    return sample if isinstance(sample, SufficientSums) else sufficient_sums(spec, sample)


def _check_params(mu: float, sigma: float):
    if not (mu > 0 and sigma > 0):
        raise ConfigError(f"mu and sigma must be positive, got {mu!r}, {sigma!r}")


def _loglik(s: SufficientSums, mu: float, sigma: float) -> float:
    return (
        s.n * (mu * math.log(mu * sigma) - ln_gamma(mu))
        + s.sum_log_abs_dT
        + (mu - 1.0) * s.sum_log_T
        - mu * sigma * s.sum_T
    )


def _logprior(hp: HyperParams, mu: float, sigma: float) -> float:
    return (
        (hp.alpha1 - 1.0) * math.log(mu)
        - hp.beta1 * mu
        + (hp.alpha2 - 1.0) * math.log(sigma)
        - hp.beta2 * sigma
    )


def _score(s: SufficientSums, hp: HyperParams | None, mu: float, sigma: float):
    n = s.n
    d_mu = n * (math.log(mu) + math.log(sigma) + 1.0 - digamma(mu)) - sigma * s.sum_T + s.sum_log_T
    d_sigma = n * mu / sigma - mu * s.sum_T
    if hp is not None:
        d_mu += (hp.alpha1 - 1.0) / mu - hp.beta1
        d_sigma += (hp.alpha2 - 1.0) / sigma - hp.beta2
    return d_mu, d_sigma


def log_likelihood(spec, sample, mu: float, sigma: float) -> float:
    """Log-likelihood of the sample (data on the X scale)."""
    _check_params(mu, sigma)
    value = _loglik(_sums(spec, sample), mu, sigma)
    if not math.isfinite(value):
        raise EstimationError("log-likelihood is not finite")
    return value


def log_posterior(spec, sample, mu: float, sigma: float, hp: HyperParams) -> float:
    """Log-likelihood plus independent gamma log-priors on mu and sigma.

    Normalising constants of the priors are dropped.
    """
    _check_params(mu, sigma)
    return log_likelihood(spec, sample, mu, sigma) + _logprior(hp, mu, sigma)


def score(spec, sample, mu: float, sigma: float, hp: HyperParams | None) -> tuple[float, float]:
    """Gradient of :func:`log_posterior` (or of the log-likelihood if hp is None)."""
    _check_params(mu, sigma)
    return _score(_sums(spec, sample), hp, mu, sigma)


def _initial_guess(spec, sample, s: SufficientSums, hp: HyperParams) -> tuple[float, float]:
    if not isinstance(sample, SufficientSums):
        try:
            est = closed_form(compute_stats(_generator(spec), sample, hp), hp)
            return est.mu_hat, est.sigma_hat
        except (EstimationError, ArithmeticError):
            pass
        t = np.atleast_1d(eval_T(_generator(spec), np.asarray(sample, dtype=float)))
        mean, var = float(t.mean()), float(t.var())
        if mean > 0 and var > 0:
            return mean * mean / var, 1.0 / mean
    return 1.0, s.n / s.sum_T


def _optimize(s: SufficientSums, hp: HyperParams | None, init, tol: float, max_iter: int):
    def objective(mu, sigma):
        value = _loglik(s, mu, sigma)
        if hp is not None:
            value += _logprior(hp, mu, sigma)
        return value

    def neg_obj(theta):
        mu, sigma = math.exp(theta[0]), math.exp(theta[1])
        try:
            value = objective(mu, sigma)
        except (ValueError, OverflowError):
            return math.inf
        return -value if math.isfinite(value) else math.inf

    def grad_theta(theta):
        mu, sigma = math.exp(theta[0]), math.exp(theta[1])
        d_mu, d_sigma = _score(s, hp, mu, sigma)
        return np.array([mu * d_mu, sigma * d_sigma]), math.hypot(d_mu, d_sigma)

    theta = np.log(np.asarray(init, dtype=float))
    g, gnorm = grad_theta(theta)
    iterations = 0
    if gnorm > tol:
        res = minimize(
            neg_obj,
            theta,
            method="Nelder-Mead",
            options={"xatol": 1e-9, "fatol": 1e-13, "maxiter": max_iter // 2},
        )
        iterations += int(res.nit)
        if np.all(np.isfinite(res.x)) and res.fun <= neg_obj(theta):
            theta = res.x
        g, gnorm = grad_theta(theta)

    h = 1e-5
    while gnorm > tol and iterations < max_iter:
        iterations += 1
        hess = np.empty((2, 2))
        for j in range(2):
            step = np.zeros(2)
            step[j] = h
            hess[:, j] = (grad_theta(theta + step)[0] - grad_theta(theta - step)[0]) / (2 * h)
        hess = 0.5 * (hess + hess.T)
        try:
            delta = -np.linalg.solve(hess, g)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(delta)) or g @ delta <= 0:
            # not an ascent direction: fall back to a scaled gradient step
            delta = g / max(1.0, float(np.abs(g).max()))
        f0 = neg_obj(theta)
        t = 1.0
        for _ in range(40):
            candidate = theta + t * delta
            if neg_obj(candidate) <= f0 + 1e-12 * abs(f0):
                break
            t *= 0.5
        theta = candidate
        g, gnorm = grad_theta(theta)

    mu, sigma = math.exp(theta[0]), math.exp(theta[1])
    report = OptimizerReport(gnorm <= tol, iterations, gnorm, objective(mu, sigma))
    return mu, sigma, report


def _fit(spec, sample, hp, init, method, tol, max_iter):
    s = _sums(spec, sample)
    if s.n < 2:
        raise ConfigError("numeric fitting needs at least two observations")
    if init is None:
        init = _initial_guess(spec, sample, s, hp if hp is not None else HyperParams(1.0, 1e-300, 1.0, 1e-300))
    mu, sigma, report = _optimize(s, hp, init, tol, max_iter)
    d_mu, d_sigma = _score(s, hp, mu, sigma)
    est = Estimate(mu, sigma, method, Diagnostics(math.nan, d_sigma, d_mu))
    return est, report


def fit_map_numeric(
    spec,
    sample,
    hp: HyperParams,
    init: tuple[float, float] | None = None,
    *,
    tol: float = GRAD_TOL,
    max_iter: int = MAX_ITER,
) -> tuple[Estimate, OptimizerReport]:
    """Posterior mode over (mu, sigma)."""
    return _fit(spec, sample, hp, init, "map_numeric", tol, max_iter)


def fit_ml_numeric(
    spec,
    sample,
    init: tuple[float, float] | None = None,
    *,
    tol: float = GRAD_TOL,
    max_iter: int = MAX_ITER,
) -> tuple[Estimate, OptimizerReport]:
    """Maximum-likelihood (mu, sigma)."""
    return _fit(spec, sample, None, init, "ml_numeric", tol, max_iter)
