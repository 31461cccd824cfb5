import math

import mpmath
import numpy as np
import pytest
from scipy import stats as ss

from expfam.errors import ConfigError, DomainError, InverseError, NumericRangeError
from expfam.generators import (
    REGISTRY,
    eval_T,
    eval_T_inverse,
    eval_T_prime,
    eval_T_second,
    fit_spec,
    generator_for,
    log_pdf,
    power_generator,
    registry_lookup,
    spec_from_canonical,
)

# known constants for every row that needs them
SHAPES = {
    "delta_gamma": {"delta": 1.7},
    "weibull": {"delta": 2.0},
    "inverse_weibull": {"delta": 2.0},
    "generalized_gamma": {"delta": 1.5},
    "generalized_inverse_gamma": {"delta": 1.5},
    "log_generalized_gamma": {"delta": 0.8},
    "log_generalized_inverse_gamma": {"delta": 0.8},
    "exponentiated_generalized_gamma": {"delta": 1.3},
    "exponentiated_generalized_inverse_gamma": {"delta": 1.3},
    "modified_log_generalized_gamma": {"delta": 0.9},
    "extended_log_generalized_gamma": {"delta": 1.2},
    "gompertz": {"delta": 0.7},
    "modified_weibull_extension": {"alpha": 2.0, "beta": 1.5},
    "traditional_weibull": {"b": 1.5, "c": 0.5, "d": 0.3},
    "flexible_weibull": {"b": 0.8, "c": 1.2},
    "burr_xii": {"c": 2.0},
    "dagum": {"c": 2.0},
}

ALL_ROWS = sorted(REGISTRY)


def gen(name):
    return generator_for(name, SHAPES.get(name, {}))


def grid(g, count=100):
    lo, hi = g.domain
    return np.geomspace(lo, hi, count + 2)[1:-1]


class TestRegistry:
    def test_all_rows_present(self):
        expected = {
            "nakagami", "maxwell_boltzmann", "rayleigh", "gamma", "inverse_gamma", "delta_gamma",
            "weibull", "inverse_weibull", "generalized_gamma", "generalized_inverse_gamma",
            "log_generalized_gamma", "log_generalized_inverse_gamma",
            "exponentiated_generalized_gamma", "exponentiated_generalized_inverse_gamma",
            "modified_log_generalized_gamma", "extended_log_generalized_gamma", "chi_squared",
            "scaled_inverse_chi_squared", "gompertz", "modified_weibull_extension",
            "traditional_weibull", "flexible_weibull", "burr_xii", "dagum",
        }
        assert set(REGISTRY) == expected

    def test_gamma_mapping(self):
        spec = registry_lookup("gamma", {"alpha": 2, "beta": 0.5})
        assert spec.canonical.mu == 2.0
        assert spec.canonical.sigma == pytest.approx(1.0)
        assert eval_T(spec.generator, 3.7) == 3.7
        assert spec.mu_fixed is None and spec.sigma_fixed is None and spec.sigma_link is None

    def test_rayleigh_mapping(self):
        spec = registry_lookup("rayleigh", {"beta": 1})
        assert eval_T(spec.generator, 3.0) == pytest.approx(9.0)
        assert spec.mu_fixed == 1.0
        assert spec.canonical.sigma == pytest.approx(0.5)

    def test_nonpositive_rejected(self):
        with pytest.raises(ConfigError):
            registry_lookup("gamma", {"alpha": -1, "beta": 1})

    def test_missing_rejected(self):
        with pytest.raises(ConfigError):
            registry_lookup("gamma", {"alpha": 1})

    def test_unknown_rejected(self):
        with pytest.raises(ConfigError):
            registry_lookup("lognormal", {})

    def test_nakagami_m_floor(self):
        with pytest.raises(ConfigError):
            registry_lookup("nakagami", {"m": 0.4, "omega": 1.0})
        assert registry_lookup("nakagami", {"m": 0.5, "omega": 1.0}).canonical.mu == 0.5

    def test_reciprocal_links(self):
        chi = registry_lookup("chi_squared", {"nu": 4})
        assert chi.sigma_link.c == 0.5
        assert chi.sigma_link.g(chi.canonical.mu) == pytest.approx(chi.canonical.sigma)
        dg = registry_lookup("delta_gamma", {"beta": 3.0, "delta": 2.0})
        assert dg.sigma_link.g(dg.canonical.mu) == pytest.approx(dg.canonical.sigma)

    def test_sigma_fixed_row(self):
        spec = registry_lookup("modified_weibull_extension", {"lambda": 0.5, "alpha": 2.0, "beta": 1.5})
        assert spec.sigma_fixed == 1.0
        assert spec.canonical.sigma == 1.0

    def test_fit_spec_constraints(self):
        assert fit_spec("weibull", {"delta": 2}).mu_fixed == 1.0
        assert fit_spec("weibull", {"delta": 2}, free=True).mu_fixed is None
        assert fit_spec("gamma").canonical is None

    def test_simulation_spec_is_unconstrained(self):
        spec = spec_from_canonical("weibull", {"delta": 2}, 2.0, 1.0)
        assert spec.mu_fixed is None and spec.canonical.mu == 2.0


class TestEvaluators:
    def test_nakagami_T(self):
        assert eval_T(generator_for("nakagami"), 3.0) == pytest.approx(9.0)

    def test_gompertz_limit_at_zero(self):
        g = generator_for("gompertz", {"delta": 1.0})
        assert eval_T(g, 1e-300) == pytest.approx(1e-300, rel=1e-12)

    def test_burr_T(self):
        g = generator_for("burr_xii", {"c": 2.0})
        ref = float(mpmath.log(mpmath.mpf(1) ** 2 + 1))
        assert eval_T(g, 1.0) == pytest.approx(ref, rel=1e-14)

    def test_square_derivatives(self):
        g = generator_for("nakagami")
        assert eval_T_prime(g, 3.0) == pytest.approx(6.0)
        assert eval_T_second(g, 1.7) == pytest.approx(2.0)

    def test_identity_second_derivative(self):
        assert eval_T_second(generator_for("gamma"), 4.2) == 0.0

    def test_flexible_weibull_derivative(self):
        g = generator_for("flexible_weibull", {"b": 1.0, "c": 1.0})
        assert eval_T_prime(g, 1.0) == pytest.approx(2.0, rel=1e-14)
        fd = (eval_T(g, 1 + 1e-6) - eval_T(g, 1 - 1e-6)) / 2e-6
        assert fd == pytest.approx(2.0, rel=1e-6)

    def test_gompertz_second_derivative(self):
        g = generator_for("gompertz", {"delta": 2.0})
        assert eval_T_second(g, 1.0) == pytest.approx(4 * math.e**2, rel=1e-14)

    def test_inverse_examples(self):
        assert eval_T_inverse(generator_for("nakagami"), 4.0) == pytest.approx(2.0)
        assert eval_T_inverse(generator_for("gamma"), 7.5) == 7.5
        g = generator_for("burr_xii", {"c": 2.0})
        assert eval_T_inverse(g, math.log(2.0)) == pytest.approx(1.0, rel=1e-14)

    @pytest.mark.parametrize("fn", [eval_T, eval_T_prime, eval_T_second])
    @pytest.mark.parametrize("bad", [0.0, -2.0, math.nan])
    def test_domain_errors(self, fn, bad):
        with pytest.raises(DomainError):
            fn(generator_for("gamma"), bad)

    def test_domain_error_carries_index(self):
        with pytest.raises(DomainError) as info:
            eval_T(generator_for("gamma"), np.array([1.0, 2.0, -3.0]))
        assert info.value.index == 2

    def test_overflow_is_signalled(self):
        g = generator_for("gompertz", {"delta": 5.0})
        with pytest.raises(NumericRangeError):
            eval_T(g, 1e3)

    def test_inverse_rejects_nonpositive(self):
        with pytest.raises(InverseError):
            eval_T_inverse(generator_for("gamma"), -1.0)


@pytest.mark.parametrize("name", ALL_ROWS)
class TestGeneratorProperties:
    def test_round_trip(self, name):
        g = gen(name)
        x = grid(g)
        back = eval_T_inverse(g, eval_T(g, x))
        np.testing.assert_allclose(back, x, rtol=1e-10)

    def test_inverse_residual(self, name):
        g = gen(name)
        u = eval_T(g, grid(g, 40))
        np.testing.assert_allclose(eval_T(g, eval_T_inverse(g, u)), u, rtol=1e-12)

    def test_first_derivative(self, name):
        g = gen(name)
        x = grid(g, 30)
        x = x[(x > 0.02) & (x < 20)]
        h = 1e-6 * x
        fd = (eval_T(g, x + h) - eval_T(g, x - h)) / (2 * h)
        np.testing.assert_allclose(eval_T_prime(g, x), fd, rtol=1e-6)

    def test_second_derivative(self, name):
        g = gen(name)
        x = grid(g, 30)
        x = x[(x > 0.02) & (x < 20)]
        h = 1e-5 * x
        fd = (eval_T_prime(g, x + h) - eval_T_prime(g, x - h)) / (2 * h)
        scale = np.maximum(np.abs(eval_T_second(g, x)), np.abs(eval_T_prime(g, x)) / x)
        assert np.all(np.abs(eval_T_second(g, x) - fd) <= 1e-5 * scale)

    def test_monotone(self, name):
        g = gen(name)
        t = eval_T(g, grid(g, 200))
        assert np.all(t > 0)
        steps = np.diff(t)
        assert np.all(steps > 0) if g.increasing else np.all(steps < 0)
        assert np.all(np.sign(eval_T_prime(g, grid(g, 50))) == (1 if g.increasing else -1))


class TestPowerGenerator:
    @pytest.mark.parametrize("s", [-3.0, -1.0, 0.5, 2.0])
    def test_power_form(self, s):
        g = power_generator(s)
        assert g.s == s
        x = np.array([0.3, 1.0, 2.5])
        np.testing.assert_allclose(eval_T(g, x), x ** (-s), rtol=1e-15)
        assert g.increasing == (s < 0)

    def test_zero_rejected(self):
        with pytest.raises(ConfigError):
            power_generator(0.0)


def _family_pdf(name, params, x):
    spec = registry_lookup(name, params)
    c = spec.canonical
    return np.exp(log_pdf(spec.generator, x, c.mu, c.sigma))


class TestTableFidelity:
    """The canonical mapping reproduces the textbook densities."""

    x = np.geomspace(0.05, 6.0, 20)

    def test_gamma(self):
        got = _family_pdf("gamma", {"alpha": 2.5, "beta": 0.7}, self.x)
        np.testing.assert_allclose(got, ss.gamma(a=2.5, scale=0.7).pdf(self.x), rtol=1e-10)

    def test_nakagami(self):
        got = _family_pdf("nakagami", {"m": 1.7, "omega": 2.0}, self.x)
        np.testing.assert_allclose(got, ss.nakagami(1.7, scale=math.sqrt(2.0)).pdf(self.x), rtol=1e-10)

    def test_weibull(self):
        got = _family_pdf("weibull", {"delta": 1.8, "beta": 1.3}, self.x)
        np.testing.assert_allclose(got, ss.weibull_min(1.8, scale=1.3).pdf(self.x), rtol=1e-10)

    def test_chi_squared(self):
        got = _family_pdf("chi_squared", {"nu": 5.0}, self.x)
        np.testing.assert_allclose(got, ss.chi2(5.0).pdf(self.x), rtol=1e-10)

    def test_rayleigh(self):
        got = _family_pdf("rayleigh", {"beta": 0.9}, self.x)
        np.testing.assert_allclose(got, ss.rayleigh(scale=0.9).pdf(self.x), rtol=1e-10)

    def test_inverse_gamma_uses_abs_derivative(self):
        got = _family_pdf("inverse_gamma", {"alpha": 3.0, "beta": 0.5}, self.x)
        # T = 1/x, U = 1/X ~ Gamma(alpha, rate 1/beta): X ~ invgamma(alpha, scale 1/beta)
        np.testing.assert_allclose(got, ss.invgamma(3.0, scale=2.0).pdf(self.x), rtol=1e-10)
