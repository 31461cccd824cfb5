import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import optimize
from scipy import special as sp

from expfam.baselines import (
    fit_map_numeric,
    fit_ml_numeric,
    log_likelihood,
    log_posterior,
    score,
)
from expfam.generators import fit_spec, spec_from_canonical
from expfam.sampling import RngStream, sample_family
from expfam.statistics import HyperParams

GAMMA = fit_spec("gamma")
HP = HyperParams()


def classical_gamma_mle(x):
    """Shape from log(a) - digamma(a) = log(mean) - mean(log); rate = a/mean."""
    x = np.asarray(x)
    s = math.log(x.mean()) - np.log(x).mean()
    a = optimize.brentq(lambda a: math.log(a) - sp.digamma(a) - s, 1e-6, 1e8, xtol=1e-14, rtol=1e-15)
    return a, 1.0 / x.mean()  # (mu, sigma): rate mu*sigma = a/mean


def gamma_sample(seed, n, mu=2.0, sigma=1.0):
    return sample_family(RngStream(seed, 1), spec_from_canonical("gamma", {}, mu, sigma), n)


class TestLikelihood:
    def test_unit_exponential(self):
        assert log_likelihood(GAMMA, [1.0], 1.0, 1.0) == pytest.approx(-1.0, abs=1e-15)

    def test_gamma_point(self):
        assert log_likelihood(GAMMA, [1.0], 2.0, 1.0) == pytest.approx(2 * math.log(2) - 2, abs=1e-14)

    def test_permutation(self, rng):
        x = rng.gamma(2.0, 0.5, 200)
        a = log_likelihood(GAMMA, x, 1.7, 0.9)
        b = log_likelihood(GAMMA, rng.permutation(x), 1.7, 0.9)
        assert abs(a - b) <= 1e-12 * abs(a)

    def test_unit_priors(self, rng):
        x = rng.gamma(2.0, 0.5, 30)
        ones = HyperParams(1.0, 1.0, 1.0, 1.0)
        for mu, sigma in [(0.5, 2.0), (3.0, 0.4)]:
            diff = log_posterior(GAMMA, x, mu, sigma, ones) - log_likelihood(GAMMA, x, mu, sigma)
            assert diff == pytest.approx(-mu - sigma, abs=1e-12)

    def test_flat_prior_nesting(self, rng):
        x = rng.gamma(2.0, 0.5, 30)
        # alpha = 1, beta = 0 is the improper flat prior; not a valid HyperParams
        flat = SimpleNamespace(alpha1=1.0, beta1=0.0, alpha2=1.0, beta2=0.0)
        for mu, sigma in rng.uniform(0.1, 5.0, size=(20, 2)):
            a = log_posterior(GAMMA, x, mu, sigma, flat)
            b = log_likelihood(GAMMA, x, mu, sigma)
            assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


class TestScore:
    @given(st.floats(0.2, 8.0), st.floats(0.2, 5.0))
    def test_matches_finite_differences(self, mu, sigma):
        x = gamma_sample(1, 40)
        d_mu, d_sigma = score(GAMMA, x, mu, sigma, HP)
        h_mu, h_sigma = 1e-6 * mu, 1e-6 * sigma
        fd_mu = (log_posterior(GAMMA, x, mu + h_mu, sigma, HP) - log_posterior(GAMMA, x, mu - h_mu, sigma, HP)) / (2 * h_mu)
        fd_sigma = (log_posterior(GAMMA, x, mu, sigma + h_sigma, HP) - log_posterior(GAMMA, x, mu, sigma - h_sigma, HP)) / (2 * h_sigma)
        scale = abs(log_posterior(GAMMA, x, mu, sigma, HP))
        assert abs(d_mu - fd_mu) <= 1e-6 * max(abs(fd_mu), 1e-3 * scale)
        assert abs(d_sigma - fd_sigma) <= 1e-6 * max(abs(fd_sigma), 1e-3 * scale)

    def test_sigma_root_given_mu(self, rng):
        x = rng.gamma(2.0, 0.5, 25)
        mu = 1.6
        sigma = (len(x) * mu + HP.alpha2 - 1) / (mu * x.sum() + HP.beta2)
        assert abs(score(GAMMA, x, mu, sigma, HP)[1]) <= 1e-12 * len(x)


class TestNumericFits:
    def test_map_near_truth(self):
        x = gamma_sample(2, 760)
        est, report = fit_map_numeric(GAMMA, x, HP)
        assert report.converged
        assert report.final_gradient_norm <= 1e-8
        assert est.mu_hat == pytest.approx(2.0, rel=0.2)
        assert est.sigma_hat == pytest.approx(1.0, rel=0.1)
        assert max(abs(v) for v in score(GAMMA, x, est.mu_hat, est.sigma_hat, HP)) <= 1e-8

    def test_init_at_optimum(self):
        x = gamma_sample(3, 200)
        est, _ = fit_map_numeric(GAMMA, x, HP)
        again, report = fit_map_numeric(GAMMA, x, HP, init=(est.mu_hat, est.sigma_hat))
        assert report.iterations <= 1
        assert again.mu_hat == pytest.approx(est.mu_hat, rel=1e-10)
        assert again.sigma_hat == pytest.approx(est.sigma_hat, rel=1e-10)

    @pytest.mark.parametrize("seed", range(50))
    def test_ml_matches_classical_mle(self, seed):
        x = gamma_sample(100 + seed, 30 + 7 * seed, mu=0.5 + 0.1 * seed, sigma=0.5 + 0.05 * seed)
        mu_ref, sigma_ref = classical_gamma_mle(x)
        est, report = fit_ml_numeric(GAMMA, x)
        assert report.converged
        assert est.mu_hat == pytest.approx(mu_ref, rel=1e-6)
        assert est.sigma_hat == pytest.approx(sigma_ref, rel=1e-6)

    def test_exponential_profile(self, rng):
        x = rng.exponential(2.0, 100)
        # with mu = 1 the ML sigma solves 1/sigma = mean(x)
        sigma = optimize.brentq(lambda s: score(GAMMA, x, 1.0, s, None)[1], 1e-3, 1e3, rtol=1e-15)
        assert sigma == pytest.approx(1.0 / x.mean(), rel=1e-12)

    @pytest.mark.parametrize("fitter", ["map", "ml"])
    def test_perturbation_decreases_objective(self, fitter):
        x = gamma_sample(4, 120)
        if fitter == "map":
            est, _ = fit_map_numeric(GAMMA, x, HP)
            obj = lambda m, s: log_posterior(GAMMA, x, m, s, HP)  # noqa: E731
        else:
            est, _ = fit_ml_numeric(GAMMA, x)
            obj = lambda m, s: log_likelihood(GAMMA, x, m, s)  # noqa: E731
        best = obj(est.mu_hat, est.sigma_hat)
        for f in (0.99, 1.01):
            assert obj(est.mu_hat * f, est.sigma_hat) < best
            assert obj(est.mu_hat, est.sigma_hat * f) < best

    def test_small_sample_convergence_rate(self):
        failures = 0
        for i in range(1, 501):
            _, report = fit_ml_numeric(GAMMA, gamma_sample(i, 15))
            failures += not report.converged
        assert failures <= 5

    def test_weibull_row(self):
        spec = spec_from_canonical("weibull", {"delta": 2.0}, 2.0, 1.0)
        x = sample_family(RngStream(6, 1), spec, 300)
        est, report = fit_ml_numeric(spec, x)
        assert report.converged
        t = x**2
        mu_ref, sigma_ref = classical_gamma_mle(t)
        assert est.mu_hat == pytest.approx(mu_ref, rel=1e-6)
        assert est.sigma_hat == pytest.approx(sigma_ref, rel=1e-6)
