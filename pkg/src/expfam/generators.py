"""Generators T(x) and the registry of named distributions built on them.

A distribution in the family has density

    f(x; mu, sigma) = (mu*sigma)^mu / Gamma(mu) * |T'(x)| * T(x)^(mu-1) * exp(-mu*sigma*T(x))

on x > 0, so that T(X) ~ Gamma(shape=mu, rate=mu*sigma).  Each registry row
pairs a generator with the map from the row's conventional parameters to the
canonical pair (mu, sigma).

All evaluators are numpy-vectorised.  Generators are immutable; the registry
rebuilds them from ``(name, shape_params)`` so they never need pickling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import ConfigError, DomainError, InverseError, NumericRangeError

__all__ = [
    "Generator",
    "CanonicalParams",
    "SigmaLink",
    "DistributionSpec",
    "Family",
    "REGISTRY",
    "power_generator",
    "generator_for",
    "registry_lookup",
    "spec_from_canonical",
    "fit_spec",
    "eval_T",
    "eval_T_prime",
    "eval_T_second",
    "eval_T_inverse",
    "log_pdf",
]

Fn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Generator:
    """A monotone map T on (0, inf) with its first two derivatives and inverse.

    ``power`` is set to k when T(x) = x**k exactly; the statistics module uses
    it to evaluate the h-functions analytically.  ``domain`` is the range of
    x on which the evaluators are well conditioned in double precision; it is
    advisory (used by tests and bracket searches), not enforced.
    """

    name: str
    shape_params: tuple[tuple[str, float], ...]
    T: Fn = field(repr=False)
    dT: Fn = field(repr=False)
    d2T: Fn = field(repr=False)
    inv: Fn = field(repr=False)
    increasing: bool = True
    power: float | None = None
    domain: tuple[float, float] = (1e-3, 1e3)

    @property
    def s(self) -> float | None:
        """The exponent s of T(x) = x^(-s), or None for non-power generators."""
        return None if self.power is None else -self.power


@dataclass(frozen=True)
class CanonicalParams:
    mu: float
    sigma: float

    def __post_init__(self):
        if not (self.mu > 0 and self.sigma > 0):
            raise ConfigError(f"canonical parameters must be positive, got {self}")


@dataclass(frozen=True)
class SigmaLink:
    """sigma = g(mu).  ``c`` is set for reciprocal links g(mu) = c / mu."""

    g: Callable[[float], float] = field(repr=False)
    c: float | None = None

    @classmethod
    def reciprocal(cls, c: float) -> "SigmaLink":
        return cls(g=lambda mu: c / mu, c=c)


@dataclass(frozen=True)
class DistributionSpec:
    name: str
    conventional_params: Mapping[str, float]
    generator: Generator
    canonical: CanonicalParams | None
    mu_fixed: float | None = None
    sigma_fixed: float | None = None
    sigma_link: SigmaLink | None = None

    def __post_init__(self):
        set_count = sum(v is not None for v in (self.mu_fixed, self.sigma_fixed, self.sigma_link))
        if set_count > 1:
            raise ConfigError("at most one of mu_fixed, sigma_fixed, sigma_link may be set")

    @property
    def label(self) -> str:
        shape = ",".join(f"{k}={v:g}" for k, v in self.generator.shape_params)
        return f"{self.name}:{shape}" if shape else self.name


# ---------------------------------------------------------------------------
# building blocks


def _power(k: float, name: str, shape: tuple[tuple[str, float], ...]) -> Generator:
    if k == 0:
        raise ConfigError("power generator needs a nonzero exponent")
    return Generator(
        name=name,
        shape_params=shape,
        T=lambda x: np.power(x, k),
        dT=lambda x: k * np.power(x, k - 1.0),
        d2T=lambda x: k * (k - 1.0) * np.power(x, k - 2.0),
        inv=lambda u: np.power(u, 1.0 / k),
        increasing=k > 0,
        power=float(k),
    )


def power_generator(s: float) -> Generator:
    """T(x) = x^(-s), s != 0."""
    s = float(s)
    if s == 0 or not math.isfinite(s):
        raise ConfigError(f"power exponent s must be finite and nonzero, got {s!r}")
    return _power(-s, "power", (("s", s),))


def _powered(G: Fn, dG: Fn, d2G: Fn, Ginv: Fn, delta: float, **kw) -> Generator:
    """T = G^delta for an increasing positive inner map G."""

    def T(x):
        return np.power(G(x), delta)

    def dT(x):
        g = G(x)
        return delta * np.power(g, delta - 1.0) * dG(x)

    def d2T(x):
        g = G(x)
        dg = dG(x)
        return delta * (delta - 1.0) * np.power(g, delta - 2.0) * dg * dg + delta * np.power(
            g, delta - 1.0
        ) * d2G(x)

    return Generator(T=T, dT=dT, d2T=d2T, inv=lambda u: Ginv(np.power(u, 1.0 / delta)), **kw)


def _reciprocal(inner: Generator, name: str, domain: tuple[float, float]) -> Generator:
    """T(x) = F(1/x) for an increasing F; the result is decreasing."""
    F, dF, d2F, Finv = inner.T, inner.dT, inner.d2T, inner.inv

    def dT(x):
        w = 1.0 / x
        return -dF(w) * w * w

    def d2T(x):
        w = 1.0 / x
        w2 = w * w
        return d2F(w) * w2 * w2 + 2.0 * dF(w) * w2 * w

    return Generator(
        name=name,
        shape_params=inner.shape_params,
        T=lambda x: F(1.0 / x),
        dT=dT,
        d2T=d2T,
        inv=lambda u: 1.0 / Finv(u),
        increasing=False,
        domain=domain,
    )


def _bisect_inverse(T: Fn, dT: Fn, lo: float = 1e-12, hi: float = 1e12) -> Fn:
    """Inverse of an increasing T by geometric bisection plus Newton polish."""

    def inv(u):
        u = np.asarray(u, dtype=float)
        a = np.full(u.shape, lo)
        b = np.full(u.shape, hi)
        with np.errstate(all="ignore"):
            for _ in range(8):
                low = T(a) > u
                if not low.any():
                    break
                a = np.where(low, a * 1e-6, a)
            for _ in range(8):
                high = T(b) < u
                if not high.any():
                    break
                b = np.where(high, b * 1e6, b)
            if (T(a) > u).any() or (T(b) < u).any():
                raise InverseError("could not bracket T^{-1}(u); u outside the range of T")
            for _ in range(120):
                m = np.sqrt(a * b)
                below = T(m) < u
                a = np.where(below, m, a)
                b = np.where(below, b, m)
                if np.all(b / a - 1.0 < 4e-16):
                    break
            x = np.sqrt(a * b)
            for _ in range(2):
                step = (T(x) - u) / dT(x)
                x_new = x - step
                x = np.where(np.isfinite(x_new) & (x_new > 0), x_new, x)
        return x

    return inv


# inner maps ---------------------------------------------------------------

def _expm1_parts():
    return np.expm1, np.exp, np.exp, np.log1p


def _log1p_parts():
    return (
        np.log1p,
        lambda x: 1.0 / (1.0 + x),
        lambda x: -1.0 / ((1.0 + x) * (1.0 + x)),
        np.expm1,
    )


def _xexpm1_parts():
    G = lambda x: x * np.expm1(x)  # noqa: E731
    dG = lambda x: np.expm1(x) + x * np.exp(x)  # noqa: E731
    d2G = lambda x: (2.0 + x) * np.exp(x)  # noqa: E731
    return G, dG, d2G, _bisect_inverse(G, dG)


def _exp_x_minus_inv_parts():
    def G(x):
        return np.exp(x - 1.0 / x)

    def dG(x):
        return (1.0 + 1.0 / (x * x)) * G(x)

    def d2G(x):
        q = 1.0 + 1.0 / (x * x)
        return (q * q - 2.0 / (x * x * x)) * G(x)

    def Ginv(v):
        L = np.log(v)
        # root of x^2 - L x - 1 = 0, cancellation-free for either sign of L
        r = np.sqrt(L * L + 4.0)
        return np.where(L >= 0, 0.5 * (L + r), 2.0 / (r - L))

    return G, dG, d2G, Ginv


def _gompertz(delta: float, shape) -> Generator:
    return Generator(
        name="gompertz",
        shape_params=shape,
        T=lambda x: np.expm1(delta * x),
        dT=lambda x: delta * np.exp(delta * x),
        d2T=lambda x: delta * delta * np.exp(delta * x),
        inv=lambda u: np.log1p(u) / delta,
        domain=(1e-3, 30.0 / delta),
    )


def _modified_weibull_extension(alpha: float, beta: float, shape) -> Generator:
    def z(x):
        return np.power(x / alpha, beta)

    def dT(x):
        zz = z(x)
        return np.exp(zz) * beta * zz / x

    def d2T(x):
        zz = z(x)
        dz = beta * zz / x
        d2z = beta * (beta - 1.0) * zz / (x * x)
        return np.exp(zz) * (dz * dz + d2z)

    return Generator(
        name="modified_weibull_extension",
        shape_params=shape,
        T=lambda x: np.expm1(z(x)),
        dT=dT,
        d2T=d2T,
        inv=lambda u: alpha * np.power(np.log1p(u), 1.0 / beta),
        domain=(1e-3 * alpha, alpha * 30.0 ** (1.0 / beta)),
    )


def _traditional_weibull(b: float, c: float, d: float, shape) -> Generator:
    def T(x):
        return np.power(x, b) * np.expm1(c * np.power(x, d))

    def dT(x):
        xd = np.power(x, d)
        e = np.exp(c * xd)
        return b * np.power(x, b - 1.0) * np.expm1(c * xd) + np.power(x, b) * e * c * d * xd / x

    def d2T(x):
        xd = np.power(x, d)
        e = np.exp(c * xd)
        q = np.expm1(c * xd)
        p = np.power(x, b)
        dp = b * p / x
        d2p = b * (b - 1.0) * p / (x * x)
        dq = e * c * d * xd / x
        d2q = e * ((c * d * xd / x) ** 2 + c * d * (d - 1.0) * xd / (x * x))
        return d2p * q + 2.0 * dp * dq + p * d2q

    hi = (30.0 / c) ** (1.0 / d)
    return Generator(
        name="traditional_weibull",
        shape_params=shape,
        T=T,
        dT=dT,
        d2T=d2T,
        inv=_bisect_inverse(T, dT),
        domain=(1e-3 * hi, hi),
    )


def _flexible_weibull(b: float, c: float, shape) -> Generator:
    def T(x):
        return np.exp(b * x - c / x)

    def dT(x):
        return (b + c / (x * x)) * T(x)

    def d2T(x):
        q = b + c / (x * x)
        return (q * q - 2.0 * c / (x * x * x)) * T(x)

    def inv(u):
        L = np.log(u)
        r = np.sqrt(L * L + 4.0 * b * c)
        return np.where(L >= 0, (L + r) / (2.0 * b), 2.0 * c / (r - L))

    return Generator(
        name="flexible_weibull",
        shape_params=shape,
        T=T,
        dT=dT,
        d2T=d2T,
        inv=inv,
        domain=(c / 30.0, 30.0 / b),
    )


def _burr(c: float, shape, name="burr_xii") -> Generator:
    def dT(x):
        xc = np.power(x, c)
        return c * xc / (x * (1.0 + xc))

    def d2T(x):
        xc = np.power(x, c)
        return c * xc / (x * x) * ((c - 1.0) - xc) / ((1.0 + xc) ** 2)

    return Generator(
        name=name,
        shape_params=shape,
        T=lambda x: np.log1p(np.power(x, c)),
        dT=dT,
        d2T=d2T,
        inv=lambda u: np.power(np.expm1(u), 1.0 / c),
    )


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Family:
    """One registry row.

    ``params`` lists every conventional parameter, ``shape`` the subset that
    appears inside T (known constants, never estimated).
    """

    name: str
    params: tuple[str, ...]
    shape: tuple[str, ...]
    build: Callable[[dict], Generator] = field(repr=False)
    canonical: Callable[[dict], tuple[float, float]] = field(repr=False)
    mu_fixed: float | None = None
    sigma_fixed: float | None = None
    link_c: Callable[[dict], float] | None = field(default=None, repr=False)
    min_values: Mapping[str, float] = field(default_factory=dict)

    def generator(self, shape_params: Mapping[str, float]) -> Generator:
        shape = _validate(self, shape_params, self.shape)
        return self.build(shape)

    def sigma_link(self, shape_params: Mapping[str, float]) -> SigmaLink | None:
        if self.link_c is None:
            return None
        return SigmaLink.reciprocal(self.link_c(dict(shape_params)))


def _validate(fam: Family, given: Mapping[str, float], required: tuple[str, ...]) -> dict:
    out = {}
    for key in required:
        if key not in given:
            raise ConfigError(f"{fam.name}: missing parameter {key!r} (needs {', '.join(required)})")
        try:
            value = float(given[key])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{fam.name}: parameter {key!r} is not a number: {given[key]!r}") from exc
        if not (value > 0 and math.isfinite(value)):
            raise ConfigError(f"{fam.name}: parameter {key!r} must be positive, got {value!r}")
        floor = fam.min_values.get(key)
        if floor is not None and value < floor:
            raise ConfigError(f"{fam.name}: parameter {key!r} must be >= {floor}, got {value!r}")
        out[key] = value
    return out


def _shape_tuple(p: dict, names: tuple[str, ...]) -> tuple[tuple[str, float], ...]:
    return tuple((k, p[k]) for k in names)


def _pow_row(name, k_of):
    def build(p):
        return _power(k_of(p), name, _shape_tuple(p, tuple(p)))

    return build


def _gg_canonical(p):
    a, b, d = p["alpha"], p["beta"], p["delta"]
    return a / d, d / (a * b**d)


def _new_row(name, parts, reciprocal, domain):
    def build(p):
        delta = p["delta"]
        G, dG, d2G, Ginv = parts()
        shape = (("delta", delta),)
        if reciprocal:
            inner = _powered(G, dG, d2G, Ginv, delta, name=name, shape_params=shape)
            return _reciprocal(inner, name, domain)
        return _powered(G, dG, d2G, Ginv, delta, name=name, shape_params=shape, domain=domain)

    return build


def _families() -> dict[str, Family]:
    GG = ("alpha", "beta", "delta")
    rows = [
        Family("nakagami", ("m", "omega"), (), _pow_row("nakagami", lambda p: 2.0),
               lambda p: (p["m"], 1.0 / p["omega"]), min_values={"m": 0.5}),
        Family("maxwell_boltzmann", ("beta",), (), _pow_row("maxwell_boltzmann", lambda p: 2.0),
               lambda p: (1.5, 1.0 / (3.0 * p["beta"] ** 2)), mu_fixed=1.5),
        Family("rayleigh", ("beta",), (), _pow_row("rayleigh", lambda p: 2.0),
               lambda p: (1.0, 1.0 / (2.0 * p["beta"] ** 2)), mu_fixed=1.0),
        Family("gamma", ("alpha", "beta"), (), _pow_row("gamma", lambda p: 1.0),
               lambda p: (p["alpha"], 1.0 / (p["alpha"] * p["beta"]))),
        Family("inverse_gamma", ("alpha", "beta"), (), _pow_row("inverse_gamma", lambda p: -1.0),
               lambda p: (p["alpha"], 1.0 / (p["alpha"] * p["beta"]))),
        Family("delta_gamma", ("beta", "delta"), ("delta",),
               _pow_row("delta_gamma", lambda p: p["delta"]),
               lambda p: (p["beta"] / p["delta"], 1.0 / p["beta"]),
               link_c=lambda p: 1.0 / p["delta"]),
        Family("weibull", ("delta", "beta"), ("delta",), _pow_row("weibull", lambda p: p["delta"]),
               lambda p: (1.0, 1.0 / p["beta"] ** p["delta"]), mu_fixed=1.0),
        Family("inverse_weibull", ("delta", "beta"), ("delta",),
               _pow_row("inverse_weibull", lambda p: -p["delta"]),
               lambda p: (1.0, 1.0 / p["beta"] ** p["delta"]), mu_fixed=1.0),
        Family("generalized_gamma", GG, ("delta",),
               _pow_row("generalized_gamma", lambda p: p["delta"]), _gg_canonical),
        Family("generalized_inverse_gamma", GG, ("delta",),
               _pow_row("generalized_inverse_gamma", lambda p: -p["delta"]), _gg_canonical),
        Family("log_generalized_gamma", GG, ("delta",),
               _new_row("log_generalized_gamma", _expm1_parts, False, (1e-3, 30.0)), _gg_canonical),
        Family("log_generalized_inverse_gamma", GG, ("delta",),
               _new_row("log_generalized_inverse_gamma", _expm1_parts, True, (1.0 / 30.0, 1e3)),
               _gg_canonical),
        Family("exponentiated_generalized_gamma", GG, ("delta",),
               _new_row("exponentiated_generalized_gamma", _log1p_parts, False, (1e-3, 1e3)),
               _gg_canonical),
        Family("exponentiated_generalized_inverse_gamma", GG, ("delta",),
               _new_row("exponentiated_generalized_inverse_gamma", _log1p_parts, True, (1e-3, 1e3)),
               _gg_canonical),
        Family("modified_log_generalized_gamma", GG, ("delta",),
               _new_row("modified_log_generalized_gamma", _exp_x_minus_inv_parts, False, (0.05, 20.0)),
               _gg_canonical),
        Family("extended_log_generalized_gamma", GG, ("delta",),
               _new_row("extended_log_generalized_gamma", _xexpm1_parts, False, (1e-3, 30.0)),
               _gg_canonical),
        Family("chi_squared", ("nu",), (), _pow_row("chi_squared", lambda p: 1.0),
               lambda p: (p["nu"] / 2.0, 1.0 / p["nu"]), link_c=lambda p: 0.5),
        Family("scaled_inverse_chi_squared", ("nu", "tau2"), (),
               _pow_row("scaled_inverse_chi_squared", lambda p: -1.0),
               lambda p: (p["nu"] / 2.0, p["tau2"])),
        Family("gompertz", ("alpha", "delta"), ("delta",),
               lambda p: _gompertz(p["delta"], (("delta", p["delta"]),)),
               lambda p: (1.0, p["alpha"]), mu_fixed=1.0),
        Family("modified_weibull_extension", ("lambda", "alpha", "beta"), ("alpha", "beta"),
               lambda p: _modified_weibull_extension(
                   p["alpha"], p["beta"], (("alpha", p["alpha"]), ("beta", p["beta"]))),
               lambda p: (p["lambda"] * p["alpha"], 1.0), sigma_fixed=1.0),
        Family("traditional_weibull", ("a", "b", "c", "d"), ("b", "c", "d"),
               lambda p: _traditional_weibull(p["b"], p["c"], p["d"], _shape_tuple(p, ("b", "c", "d"))),
               lambda p: (1.0, p["a"]), mu_fixed=1.0),
        Family("flexible_weibull", ("a", "b", "c"), ("b", "c"),
               lambda p: _flexible_weibull(p["b"], p["c"], _shape_tuple(p, ("b", "c"))),
               lambda p: (1.0, p["a"]), mu_fixed=1.0),
        Family("burr_xii", ("c", "k"), ("c",),
               lambda p: _burr(p["c"], (("c", p["c"]),)),
               lambda p: (1.0, p["k"]), mu_fixed=1.0),
        Family("dagum", ("c", "k"), ("c",),
               lambda p: _reciprocal(_burr(p["c"], (("c", p["c"]),), name="dagum"), "dagum", (1e-3, 1e3)),
               lambda p: (1.0, p["k"]), mu_fixed=1.0),
    ]
    return {f.name: f for f in rows}


REGISTRY: dict[str, Family] = _families()


def _family(name: str) -> Family:
    try:
        return REGISTRY[name]
    except KeyError:
        raise ConfigError(f"unknown distribution {name!r}; choose from {', '.join(REGISTRY)}") from None


def generator_for(name: str, shape_params: Mapping[str, float] | None = None) -> Generator:
    """Generator of registry row ``name`` given only its known shape constants."""
    return _family(name).generator(shape_params or {})


def registry_lookup(name: str, conventional_params: Mapping[str, float]) -> DistributionSpec:
    """Build the full spec of a registry row from its conventional parameters.

    >>> spec = registry_lookup("gamma", {"alpha": 2, "beta": 0.5})
    >>> spec.canonical
    CanonicalParams(mu=2.0, sigma=1.0)
    """
    fam = _family(name)
    params = _validate(fam, conventional_params, fam.params)
    mu, sigma = fam.canonical(params)
    shape = {k: params[k] for k in fam.shape}
    return DistributionSpec(
        name=fam.name,
        conventional_params=params,
        generator=fam.build(shape),
        canonical=CanonicalParams(float(mu), float(sigma)),
        mu_fixed=fam.mu_fixed,
        sigma_fixed=fam.sigma_fixed,
        sigma_link=fam.sigma_link(shape),
    )


def spec_from_canonical(
    name: str, shape_params: Mapping[str, float] | None, mu: float, sigma: float
) -> DistributionSpec:
    """Spec with free canonical (mu, sigma) and no fixed/linked constraint.

    This is how the Monte Carlo study uses rows such as Weibull, whose table
    entry pins mu = 1, at arbitrary (mu, sigma).
    """
    fam = _family(name)
    shape = _validate(fam, shape_params or {}, fam.shape)
    return DistributionSpec(
        name=fam.name,
        conventional_params=shape,
        generator=fam.build(shape),
        canonical=CanonicalParams(float(mu), float(sigma)),
    )


def fit_spec(name: str, shape_params: Mapping[str, float] | None = None, *, free: bool = False) -> DistributionSpec:
    """Spec for estimation: known shape constants, unknown canonical values.

    The row's fixed/linked classification is kept unless ``free`` is set.
    """
    fam = _family(name)
    shape = _validate(fam, shape_params or {}, fam.shape)
    return DistributionSpec(
        name=fam.name,
        conventional_params=shape,
        generator=fam.build(shape),
        canonical=None,
        mu_fixed=None if free else fam.mu_fixed,
        sigma_fixed=None if free else fam.sigma_fixed,
        sigma_link=None if free else fam.sigma_link(shape),
    )


# ---------------------------------------------------------------------------
# checked evaluation


def _as_domain_array(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    bad = ~(arr > 0) | ~np.isfinite(arr)
    if bad.any():
        idx = int(np.flatnonzero(bad.ravel())[0])
        raise DomainError(
            f"generator argument must be finite and positive, got {arr.ravel()[idx]!r}",
            index=idx if arr.ndim else None,
        )
    return arr


def _finite(values: np.ndarray, what: str, nonzero: bool = False, scalar: bool = False):
    bad = ~np.isfinite(values)
    if nonzero:
        bad |= values == 0
    if bad.any():
        idx = int(np.flatnonzero(np.ravel(bad))[0])
        raise NumericRangeError(
            f"{what} is not finite/nonzero", index=None if scalar else idx
        )
    return float(values) if scalar else values


def _evaluate(fn: Fn, x, what: str, nonzero: bool):
    arr = _as_domain_array(x)
    with np.errstate(all="ignore"):
        out = np.asarray(fn(arr), dtype=float)
    return _finite(out, what, nonzero=nonzero, scalar=arr.ndim == 0)


def eval_T(g: Generator, x):
    """T(x); raises on x <= 0 or on overflow/underflow to 0."""
    return _evaluate(g.T, x, f"{g.name} T(x)", nonzero=True)


def eval_T_prime(g: Generator, x):
    """Signed T'(x); negative for decreasing rows."""
    return _evaluate(g.dT, x, f"{g.name} T'(x)", nonzero=True)


def eval_T_second(g: Generator, x):
    return _evaluate(g.d2T, x, f"{g.name} T''(x)", nonzero=False)


def eval_T_inverse(g: Generator, u):
    """x with T(x) = u."""
    arr = np.asarray(u, dtype=float)
    if (~(arr > 0) | ~np.isfinite(arr)).any():
        raise InverseError("T^{-1} needs finite positive arguments")
    with np.errstate(all="ignore"):
        x = np.asarray(g.inv(arr), dtype=float)
    bad = ~np.isfinite(x) | ~(x > 0)
    if bad.any():
        raise InverseError(f"{g.name}: T^(-1)(u) is not a finite positive number")
    return float(x) if arr.ndim == 0 else x


def log_pdf(g: Generator, x, mu: float, sigma: float):
    """Log-density of the family at x (uses |T'| so decreasing rows work)."""
    t = eval_T(g, x)
    dt = eval_T_prime(g, x)
    return (
        mu * math.log(mu * sigma)
        - math.lgamma(mu)
        + np.log(np.abs(dt))
        + (mu - 1.0) * np.log(t)
        - mu * sigma * t
    )
