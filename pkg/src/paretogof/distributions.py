"""Pareto null family, the alternative families, and the shape MLE.

Every distribution here lives on ``[1, inf)``. Alternatives are small frozen
dataclasses sharing one interface (``cdf``, ``ppf``, ``rvs``, ``sample``);
``alt_cdf``, ``alt_quantile`` and ``alt_sample`` are thin functional wrappers.
"""

import math
import warnings
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from scipy import stats

from .projections import psi, psi_limit_at_infinity, upsilon


class DomainError(ValueError):
    """Argument outside the support ``[1, inf)``."""


class DegenerateSampleError(ValueError):
    """Sample carries no information about the shape (all values equal 1)."""


class InvalidDensityError(ValueError):
    """A perturbed density takes negative values."""


class TiesWarning(UserWarning):
    """Sample contains exact duplicates; ranks use ``<=`` counting."""


# --------------------------------------------------------------------------
# Sample
# --------------------------------------------------------------------------


class Sample:
    """Validated observations on ``[1, inf)``.

    Values are stored sorted ascending; ``order`` is the permutation with
    ``raw == values[inverse]``, i.e. ``values == raw[order]``.
    """

    def __init__(self, values):
        raw = np.asarray(values, dtype=float).ravel()
        if raw.size == 0:
            raise ValueError("sample is empty")
        if not np.all(np.isfinite(raw)):
            raise ValueError("sample contains non-finite values")
        if np.any(raw < 1):
            bad = raw[raw < 1][0]
            raise DomainError(
                f"value {bad!r} is below 1; observations must lie in the "
                "Pareto support [1, inf) (rescale by the known minimum first)"
            )
        self.order = np.argsort(raw, kind="stable")
        self.values = raw[self.order]
        self.values.setflags(write=False)
        self.has_ties = bool(np.any(self.values[1:] == self.values[:-1]))

    @property
    def n(self):
        return self.values.size

    @property
    def raw(self):
        """Observations in their original order."""
        out = np.empty_like(self.values)
        out[self.order] = self.values
        return out

    def __len__(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __repr__(self):
        return f"Sample(n={self.n}, min={self.values[0]:.4g}, max={self.values[-1]:.4g})"


def as_sample(s):
    return s if isinstance(s, Sample) else Sample(s)


def warn_if_ties(s):
    if s.has_ties:
        warnings.warn(
            "sample has tied values; statistics use '<=' rank counting",
            TiesWarning,
            stacklevel=3,
        )


# --------------------------------------------------------------------------
# Pareto null family
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ParetoParams:
    alpha: float

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"Pareto shape must be positive, got {self.alpha}")


def _shape(p):
    return p.alpha if isinstance(p, ParetoParams) else ParetoParams(float(p)).alpha


def _check_support(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 1):
        raise DomainError("argument below 1 is outside the support [1, inf)")
    return x


def _scalar(a):
    return a[()] if a.ndim == 0 else a


def pareto_cdf(x, p):
    """``1 - x**-alpha`` on ``[1, inf)``."""
    alpha = _shape(p)
    x = _check_support(x)
    return _scalar(-np.expm1(-alpha * np.log(x)))


def pareto_pdf(x, p):
    alpha = _shape(p)
    x = _check_support(x)
    return _scalar(alpha * x ** (-alpha - 1.0))


def pareto_ppf(q, p):
    alpha = _shape(p)
    q = np.asarray(q, dtype=float)
    return _scalar(np.exp(-np.log1p(-q) / alpha))


def pareto_from_uniform(u, p):
    """Inverse transform ``u**(-1/alpha)``; ``u`` in ``(0, 1]``."""
    alpha = _shape(p)
    return np.exp(-np.log(np.asarray(u, dtype=float)) / alpha)


def pareto_rvs(p, size, rng):
    # 1 - random() lies in (0, 1], so the draw is finite
    return pareto_from_uniform(1.0 - rng.random(size), p)


def pareto_sample(p, n, rng):
    """``n`` i.i.d. Pareto draws as a :class:`Sample`."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return Sample(pareto_rvs(p, n, rng))


def mle_alpha(s):
    """Maximum-likelihood shape estimate ``n / sum(log x)``."""
    x = np.asarray(s.values if isinstance(s, Sample) else s, dtype=float)
    if x.size == 0:
        raise ValueError("sample is empty")
    total = np.log(x).sum()
    if total <= 0:
        raise DegenerateSampleError("all observations equal 1; shape MLE undefined")
    return x.size / total


# --------------------------------------------------------------------------
# Generic inversion
# --------------------------------------------------------------------------


def invert_cdf_log(cdf_log, q, max_iter=200):
    """Solve ``cdf_log(u) = q`` for ``u = ln x >= 0`` by vectorised bisection.

    The upper bracket starts at 1 and doubles until it covers every target;
    bisection then runs until the bracket stops shrinking in floating point.
    """
    q = np.atleast_1d(np.asarray(q, dtype=float))
    if np.any((q < 0) | (q >= 1)):
        raise ValueError("probabilities must lie in [0, 1)")
    lo = np.zeros_like(q)
    hi = np.ones_like(q)
    for _ in range(1100):
        short = cdf_log(hi) < q
        if not short.any():
            break
        hi = np.where(short, 2.0 * hi, hi)
    else:
        raise RuntimeError("could not bracket the quantile")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        moving = (mid > lo) & (mid < hi)
        if not moving.any():
            break
        below = cdf_log(mid) < q
        lo = np.where(moving & below, mid, lo)
        hi = np.where(moving & ~below, mid, hi)
    return hi


# --------------------------------------------------------------------------
# Alternatives
# --------------------------------------------------------------------------


def _unit_interval(name, theta, closed_low=True):
    ok = (0 <= theta < 1) if closed_low else (0 < theta < 1)
    if not ok:
        raise ValueError(f"{name}: theta must lie in [0, 1), got {theta}")


@dataclass(frozen=True)
class Alternative:
    """Common interface. Subclasses provide ``_cdf_log`` (CDF of ``ln x``)."""

    tag: ClassVar[str] = ""

    def _cdf_log(self, u):
        raise NotImplementedError

    def cdf(self, x):
        x = _check_support(x)
        return _scalar(self._cdf_log(np.log(x)))

    def ppf(self, q):
        q = np.asarray(q, dtype=float)
        return _scalar(np.exp(invert_cdf_log(self._cdf_log, q)).reshape(q.shape))

    def rvs(self, size, rng):
        return self.ppf(rng.random(size))

    def sample(self, n, rng):
        if n < 1:
            raise ValueError("n must be at least 1")
        return Sample(self.rvs(n, rng))


@dataclass(frozen=True)
class Pareto(Alternative):
    """The null itself, for size rows of power tables."""

    alpha: float = 1.0
    tag: ClassVar[str] = "pareto"

    def __post_init__(self):
        ParetoParams(self.alpha)

    def _cdf_log(self, u):
        return -np.expm1(-self.alpha * u)

    def pdf(self, x):
        return pareto_pdf(x, self.alpha)

    def ppf(self, q):
        return pareto_ppf(q, self.alpha)

    def rvs(self, size, rng):
        return pareto_rvs(self.alpha, size, rng)


@dataclass(frozen=True)
class LogWeibull(Alternative):
    """``G(x) = 1 - exp(-alpha (ln x)**(theta + 1))``."""

    alpha: float = 1.0
    theta: float = 0.0
    tag: ClassVar[str] = "log-weibull"

    def __post_init__(self):
        ParetoParams(self.alpha)
        _unit_interval("LogWeibull", self.theta)

    def _cdf_log(self, u):
        return -np.expm1(-self.alpha * u ** (self.theta + 1.0))

    def pdf(self, x):
        x = _check_support(x)
        u = np.log(x)
        a, th = self.alpha, self.theta
        return _scalar(a * (th + 1.0) * u**th / x * np.exp(-a * u ** (th + 1.0)))

    def ppf(self, q):
        e = -np.log1p(-np.asarray(q, dtype=float))
        return _scalar(np.exp((e / self.alpha) ** (1.0 / (self.theta + 1.0))))

    def rvs(self, size, rng):
        e = rng.standard_exponential(size)
        return np.exp((e / self.alpha) ** (1.0 / (self.theta + 1.0)))


@dataclass(frozen=True)
class LogLinearExponent(Alternative):
    """``G(x) = 1 - exp(-alpha ln x - theta (ln x)**beta)``, beta > 1."""

    alpha: float = 1.0
    beta: float = 2.0
    theta: float = 0.0
    tag: ClassVar[str] = "log-linear-exponent"

    def __post_init__(self):
        ParetoParams(self.alpha)
        if not self.beta > 1:
            raise ValueError(f"LogLinearExponent: beta must exceed 1, got {self.beta}")
        _unit_interval("LogLinearExponent", self.theta)

    def _cdf_log(self, u):
        return -np.expm1(-self.alpha * u - self.theta * u**self.beta)

    def pdf(self, x):
        x = _check_support(x)
        u = np.log(x)
        a, b, th = self.alpha, self.beta, self.theta
        return _scalar((a + th * b * u ** (b - 1.0)) / x * np.exp(-a * u - th * u**b))


@dataclass(frozen=True)
class ParetoMixture(Alternative):
    """``(1 - theta) Pareto(alpha) + theta Pareto(beta)``, beta > alpha."""

    alpha: float = 1.0
    beta: float = 2.0
    theta: float = 0.0
    tag: ClassVar[str] = "pareto-mixture"

    def __post_init__(self):
        ParetoParams(self.alpha)
        if not self.beta > self.alpha:
            raise ValueError("ParetoMixture: beta must exceed alpha")
        _unit_interval("ParetoMixture", self.theta)

    def _cdf_log(self, u):
        return (1.0 - self.theta) * -np.expm1(-self.alpha * u) + self.theta * -np.expm1(
            -self.beta * u
        )

    def pdf(self, x):
        x = _check_support(x)
        a, b, th = self.alpha, self.beta, self.theta
        return _scalar((1 - th) * a * x ** (-a - 1) + th * b * x ** (-b - 1))

    def rvs(self, size, rng):
        pick = rng.random(size) < self.theta
        shape = np.where(pick, self.beta, self.alpha)
        return np.exp(-np.log(1.0 - rng.random(size)) / shape)


# Locally optimal perturbations ------------------------------------------------

_GRID_POINTS = 10_000


def _check_perturbed_density(alpha, theta, C, D, direction, limit_at_inf, name):
    """Raise unless ``alpha + theta*(C*alpha*direction + D*(alpha ln x - 1)) >= 0``.

    Grid: 10^4 log-spaced points on ``[1, 10**(6/alpha)]`` (null survival
    1e-6 at the top). Beyond the grid the D-term dominates, so its sign
    decides; with ``theta*D == 0`` the limit of the bracket must be >= 0.
    """
    if C <= 0:
        raise ValueError(f"{name}: C must be positive")
    u = np.linspace(0.0, 6.0 * math.log(10.0) / alpha, _GRID_POINTS)
    x = np.exp(u)
    bracket = alpha + theta * (C * alpha * direction(x) + D * (alpha * u - 1.0))
    if np.min(bracket) < 0:
        raise InvalidDensityError(
            f"{name}: density negative at x={x[np.argmin(bracket)]:.6g} "
            f"for theta={theta}; decrease theta"
        )
    td = theta * D
    if td < 0:
        raise InvalidDensityError(f"{name}: theta*D < 0 makes the density negative in the tail")
    if td == 0 and alpha + theta * C * alpha * limit_at_inf < 0:
        raise InvalidDensityError(f"{name}: density negative in the tail")


def locally_optimal_density_t(x, alpha, theta, C, D):
    """Density of the family for which T_n is locally Bahadur optimal."""
    _check_perturbed_density(
        alpha, theta, C, D, lambda s: upsilon(s, alpha), -1.0 / 6.0, "LocallyOptimalT"
    )
    x = _check_support(x)
    u = np.log(x)
    br = alpha + theta * (C * alpha * upsilon(x, alpha) + D * (alpha * u - 1.0))
    return _scalar(np.asarray(br * x ** (-alpha - 1.0)))


def optimal_threshold(alpha):
    """``(sqrt(7) - 1)**(1/alpha)``, the maximiser of Var psi(X; t)."""
    return (math.sqrt(7.0) - 1.0) ** (1.0 / alpha)


def locally_optimal_density_v(x, alpha, theta, C, D):
    """Density of the family for which V_n is locally Bahadur optimal."""
    t0 = optimal_threshold(alpha)
    _check_perturbed_density(
        alpha,
        theta,
        C,
        D,
        lambda s: psi(s, t0, alpha),
        psi_limit_at_infinity(t0, alpha),
        "LocallyOptimalV",
    )
    x = _check_support(x)
    u = np.log(x)
    br = alpha + theta * (C * alpha * psi(x, t0, alpha) + D * (alpha * u - 1.0))
    return _scalar(np.asarray(br * x ** (-alpha - 1.0)))


@dataclass(frozen=True)
class LocallyOptimalT(Alternative):
    alpha: float = 1.0
    theta: float = 0.0
    C: float = 1.0
    D: float = 0.0
    tag: ClassVar[str] = "locally-optimal-t"

    def __post_init__(self):
        ParetoParams(self.alpha)
        _check_perturbed_density(
            self.alpha,
            self.theta,
            self.C,
            self.D,
            lambda s: upsilon(s, self.alpha),
            -1.0 / 6.0,
            "LocallyOptimalT",
        )

    def _cdf_log(self, u):
        a = self.alpha
        w = np.exp(-a * u)
        ups = (w - w * w * (1.0 + 2.0 * a * u)) / 6.0
        return -np.expm1(-a * u) + self.theta * (self.C * ups - self.D * u * w)

    def pdf(self, x):
        return locally_optimal_density_t(x, self.alpha, self.theta, self.C, self.D)


@dataclass(frozen=True)
class LocallyOptimalV(Alternative):
    alpha: float = 1.0
    theta: float = 0.0
    C: float = 1.0
    D: float = 0.0
    tag: ClassVar[str] = "locally-optimal-v"

    def __post_init__(self):
        ParetoParams(self.alpha)
        t0 = optimal_threshold(self.alpha)
        _check_perturbed_density(
            self.alpha,
            self.theta,
            self.C,
            self.D,
            lambda s: psi(s, t0, self.alpha),
            psi_limit_at_infinity(t0, self.alpha),
            "LocallyOptimalV",
        )

    def _cdf_log(self, u):
        a = self.alpha
        big = math.sqrt(7.0) - 1.0  # t0**alpha
        w = np.exp(-a * u)
        wc = np.maximum(w, 1.0 / big)
        psi_part = (
            (big - 1.0 / big) * (1.0 - w * w) / 2.0
            + (-0.5 + 0.5 / big) * (1.0 - w)
            + 0.5 * (1.0 - wc)
            - big * (1.0 - wc * wc) / 2.0
        )
        return -np.expm1(-a * u) + self.theta * (self.C * psi_part - self.D * u * w)

    def pdf(self, x):
        return locally_optimal_density_v(x, self.alpha, self.theta, self.C, self.D)


# Power-study alternatives, moved onto [1, inf) ------------------------------


@dataclass(frozen=True)
class _Shifted(Alternative):
    """``1 + Y`` for a scipy-frozen base law ``Y`` on ``[0, inf)``."""

    def _base(self):
        raise NotImplementedError

    def cdf(self, x):
        x = _check_support(x)
        return _scalar(np.asarray(self._base().cdf(x - 1.0)))

    def pdf(self, x):
        x = _check_support(x)
        return _scalar(np.asarray(self._base().pdf(x - 1.0)))

    def ppf(self, q):
        return _scalar(1.0 + np.asarray(self._base().ppf(q)))


@dataclass(frozen=True)
class ShiftedLogNormal(_Shifted):
    m: float = 0.0
    sigma: float = 1.0
    tag: ClassVar[str] = "log-normal"

    def _base(self):
        return stats.lognorm(s=self.sigma, scale=math.exp(self.m))

    def rvs(self, size, rng):
        return 1.0 + rng.lognormal(self.m, self.sigma, size)


@dataclass(frozen=True)
class ShiftedHalfNormal(_Shifted):
    sigma: float = 1.0
    tag: ClassVar[str] = "half-normal"

    def _base(self):
        return stats.halfnorm(scale=self.sigma)

    def rvs(self, size, rng):
        return 1.0 + np.abs(rng.normal(0.0, self.sigma, size))


@dataclass(frozen=True)
class ShiftedWeibull(_Shifted):
    shape: float = 2.0
    tag: ClassVar[str] = "weibull"

    def _base(self):
        return stats.weibull_min(c=self.shape)

    def rvs(self, size, rng):
        return 1.0 + rng.weibull(self.shape, size)


@dataclass(frozen=True)
class ShiftedGamma(_Shifted):
    shape: float = 2.0
    rate: float = 1.0
    tag: ClassVar[str] = "gamma"

    def _base(self):
        return stats.gamma(a=self.shape, scale=1.0 / self.rate)

    def rvs(self, size, rng):
        return 1.0 + rng.gamma(self.shape, 1.0 / self.rate, size)


@dataclass(frozen=True)
class LogGamma(Alternative):
    """``exp(Y)`` with ``Y ~ Gamma(shape, rate)``; already on ``[1, inf)``."""

    shape: float = 2.0
    rate: float = 1.0
    tag: ClassVar[str] = "log-gamma"

    def _base(self):
        return stats.gamma(a=self.shape, scale=1.0 / self.rate)

    def _cdf_log(self, u):
        return self._base().cdf(u)

    def pdf(self, x):
        x = _check_support(x)
        return _scalar(np.asarray(self._base().pdf(np.log(x)) / x))

    def ppf(self, q):
        return _scalar(np.exp(np.asarray(self._base().ppf(q))))

    def rvs(self, size, rng):
        return np.exp(rng.gamma(self.shape, 1.0 / self.rate, size))


POWER_ALTERNATIVES = {
    "log-normal": ShiftedLogNormal(),
    "half-normal": ShiftedHalfNormal(),
    "weibull": ShiftedWeibull(),
    "gamma": ShiftedGamma(),
    "log-gamma": LogGamma(),
}


def alt_cdf(x, a):
    return a.cdf(x)


def alt_quantile(q, a):
    return a.ppf(q)


def alt_sample(a, n, rng):
    return a.sample(n, rng)
