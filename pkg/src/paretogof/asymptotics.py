"""Quadrature checks of the asymptotic constants and local Bahadur efficiencies.

All integrals over ``[1, inf)`` are taken in ``u = ln x``, where every
integrand here decays like ``exp(-c u)``. Pieces are split at kinks of the
integrand (the indicator inside ``psi``) and at a few fixed points; the last
piece ends where the Pareto weight has fallen below ``exp(-600 a / (a + 2))``.

Local efficiency of a test along a perturbation ``h = d/dtheta g(x; 0)`` is::

    e = 2 * slope * b'(0)**2 / kl_curvature

with ``slope`` the small-t coefficient of the large-deviation function
(54/5 for T_n, 1/(8 sigma^2(t0)) for V_n), ``b'(0)`` the derivative of the
statistic's limit in probability, and ``kl_curvature`` the second-order
coefficient of twice the Kullback-Leibler distance to the Pareto family.
"""

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, optimize

from .distributions import (
    Alternative,
    LocallyOptimalT,
    LocallyOptimalV,
    LogLinearExponent,
    LogWeibull,
    ParetoMixture,
    optimal_threshold,
)
from .projections import psi, upsilon

__all__ = [
    "upsilon",
    "psi",
    "QuadratureError",
    "H0Perturbation",
    "EfficiencyReport",
    "integrate_log",
    "expect_null",
    "sigma2_T",
    "sigma2_V",
    "sigma2_V_quad",
    "sigma2_V_max",
    "slope_coefficient",
    "perturbation",
    "b_prime0",
    "sup_psi_projection",
    "kl_curvature",
    "centered_perturbation",
    "local_efficiency",
    "optimality_check",
    "maximize_mixture_efficiency",
]

TRIGAMMA_1 = math.pi**2 / 6  # psi'(1), the trigamma function at 1

EPSABS = 1e-14
EPSREL = 1e-12


class QuadratureError(RuntimeError):
    """Quadrature failed to converge or the integral appears divergent."""


@dataclass(frozen=True)
class H0Perturbation:
    """Direction ``h(x) = d/dtheta g(x; theta)`` at ``theta = 0``.

    ``breaks`` lists x-locations where ``h`` is not smooth.
    """

    h: Callable
    alpha: float
    name: str = "h"
    breaks: tuple = ()


@dataclass(frozen=True)
class EfficiencyReport:
    family: str
    statistic: str
    b_prime0: float
    kl_curvature: float
    slope_coefficient: float
    efficiency: float
    exceeds_bound: bool = False
    details: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# quadrature
# --------------------------------------------------------------------------


def _quad(f, a, b):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        val, err = integrate.quad(f, a, b, epsabs=EPSABS, epsrel=EPSREL, limit=400)
    # QUADPACK flags roundoff whenever the 1e-14 target is out of reach; only a
    # material error estimate counts as failure
    if caught and err > 1e-10 * max(1.0, abs(val)):
        raise QuadratureError(
            f"quadrature on [{a}, {b}] did not converge (error {err:.2g}): {caught[0].message}"
        )
    if not math.isfinite(val):
        raise QuadratureError(f"non-finite integral on [{a}, {b}]")
    return val


def _upper_cut(alpha):
    # x**(alpha + 2) stays finite below u = 700 / (alpha + 2); past this cut the
    # Pareto weight exp(-alpha u) is below exp(-600 alpha / (alpha + 2))
    return 600.0 / (alpha + 2.0)


def _cuts(alpha, breaks):
    top = _upper_cut(alpha)
    inner = {0.0, 1.0, 5.0, 20.0, 60.0, *(math.log(b) for b in breaks if b > 1)}
    return sorted(c for c in inner if c < top) + [top]


def integrate_log(fx, alpha, breaks=(), upper=None):
    """``int_1^inf fx(x) dx`` computed as ``int_0^U fx(e^u) e^u du``.

    ``alpha`` is the null shape, which sets the truncation point ``U`` (the
    integrands used here all decay at least like ``exp(-alpha u)`` times a
    polynomial). ``breaks`` are x-locations where the integrand has a kink or
    a jump. ``upper`` integrates over ``[1, upper]`` instead.
    """

    def g(u):
        x = math.exp(u)
        return float(fx(x)) * x

    cuts = _cuts(alpha, breaks)
    if upper is not None:
        top = math.log(upper)
        cuts = [c for c in cuts if c < top] + [top]
    return sum(_quad(g, a, b) for a, b in zip(cuts, cuts[1:]))


def expect_null(g, alpha, breaks=()):
    """``E g(X)`` for ``X ~ Pareto(alpha)``, taken in ``u = ln x`` directly."""

    def f(u):
        return float(g(math.exp(u))) * alpha * math.exp(-alpha * u)

    cuts = _cuts(alpha, breaks)
    return sum(_quad(f, a, b) for a, b in zip(cuts, cuts[1:]))


# --------------------------------------------------------------------------
# projections and their variances
# --------------------------------------------------------------------------


def sigma2_T(alpha):
    """``Var upsilon(X)`` by quadrature; equals 5/972 for every alpha."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    return expect_null(lambda s: upsilon(s, alpha) ** 2, alpha)


def sigma2_V(t, alpha):
    """Closed form ``(t^{2a} + t^a - 2) / (12 t^{3a})`` of ``Var psi(X; t)``."""
    if t < 1:
        raise ValueError("t must be >= 1")
    w = t**alpha
    return (w * w + w - 2.0) / (12.0 * w**3)


def sigma2_V_quad(t, alpha):
    """``Var psi(X; t)`` by quadrature, the check on :func:`sigma2_V`."""
    mean = expect_null(lambda s: psi(s, t, alpha), alpha, breaks=(t,))
    second = expect_null(lambda s: psi(s, t, alpha) ** 2, alpha, breaks=(t,))
    return second - mean * mean


def sigma2_V_max(alpha):
    """``(t0, max_t sigma^2(t))`` located numerically.

    In ``w = t**alpha`` the variance is ``(1/w + 1/w^2 - 2/w^3) / 12``; the
    root of its derivative is found with Brent's method and mapped back.
    """

    def dvar(w):
        return (-(w**-2) - 2.0 * w**-3 + 6.0 * w**-4) / 12.0

    w0 = optimize.brentq(dvar, 1.0 + 1e-9, 10.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    t0 = w0 ** (1.0 / alpha)
    return t0, sigma2_V(t0, alpha)


def slope_coefficient(statistic):
    """Coefficient of ``t^2`` in the large-deviation function near zero."""
    if statistic == "tn":
        return 54.0 / 5.0
    if statistic == "vn":
        return 81.0 / (7.0 * math.sqrt(7.0) + 10.0)
    raise ValueError("statistic must be 'tn' or 'vn'")


# --------------------------------------------------------------------------
# perturbation directions
# --------------------------------------------------------------------------


def _as_perturbation(h, alpha=None):
    if isinstance(h, H0Perturbation):
        return h
    if isinstance(h, Alternative):
        return perturbation(h)
    if alpha is None:
        raise ValueError("alpha is required when h is a plain function")
    return H0Perturbation(h=h, alpha=alpha)


def perturbation(family):
    """``h = d/dtheta g(x; theta)|_{theta=0}`` for a parametric alternative.

    ``theta`` of ``family`` is ignored; only the shape parameters matter.
    """
    a = family.alpha
    if isinstance(family, LogWeibull):

        def h(x):
            u = np.log(x)
            ll = np.log(u)
            return a * x ** (-a - 1.0) * ((1.0 - a * u) * ll + 1.0)

        return H0Perturbation(h, a, "log-weibull")
    if isinstance(family, LogLinearExponent):
        b = family.beta

        def h(x):
            u = np.log(x)
            return x ** (-a - 1.0) * (b * u ** (b - 1.0) - a * u**b)

        return H0Perturbation(h, a, f"log-linear-exponent(beta={b:g})")
    if isinstance(family, ParetoMixture):
        b = family.beta

        def h(x):
            return -a * x ** (-a - 1.0) + b * x ** (-b - 1.0)

        return H0Perturbation(h, a, f"pareto-mixture(beta={b:g})")
    if isinstance(family, LocallyOptimalT):
        C, D = family.C, family.D

        def h(x):
            return x ** (-a - 1.0) * (C * a * upsilon(x, a) + D * (a * np.log(x) - 1.0))

        return H0Perturbation(h, a, "locally-optimal-t")
    if isinstance(family, LocallyOptimalV):
        C, D = family.C, family.D
        t0 = optimal_threshold(a)

        def h(x):
            return x ** (-a - 1.0) * (C * a * psi(x, t0, a) + D * (a * np.log(x) - 1.0))

        return H0Perturbation(h, a, "locally-optimal-v", breaks=(t0,))
    raise TypeError(f"no perturbation direction for {type(family).__name__}")


# --------------------------------------------------------------------------
# b'(0), KL curvature, efficiency
# --------------------------------------------------------------------------


def _psi_projection(p, t):
    return integrate_log(lambda x: psi(x, t, p.alpha) * p.h(x), p.alpha, breaks=(t, *p.breaks))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


def _coarse_psi_projection(p, lt):
    """``int psi(x; t) h(x) dx`` on the grid ``ln t = lt`` (coarse pass).

    Uses ``int psi h = (B/2 - A)/T + T A(t) - B(t)/2`` with ``T = t**a``,
    ``A(t) = int_t^inf h s^-a ds``, ``B(t) = int_t^inf h ds`` (``A, B`` their
    values at ``t = 1``). Tails accumulate fixed 20-point Gauss-Legendre rules
    over the grid cells, so one vectorised pass covers all grid points.
    """
    a = p.alpha
    lo, hi = lt[:-1], lt[1:]
    half = 0.5 * (hi - lo)
    u = (lo + hi)[:, None] * 0.5 + half[:, None] * _GL_NODES[None, :]
    x = np.exp(u)
    with np.errstate(all="ignore"):
        hx = np.asarray(p.h(x), dtype=float) * x
    wts = half[:, None] * _GL_WEIGHTS[None, :]
    cell_b = np.nansum(hx * wts, axis=1)
    cell_a = np.nansum(hx * np.exp(-a * u) * wts, axis=1)
    top = math.exp(lt[-1])
    rest_b = integrate_log(p.h, a, breaks=(top,)) - integrate_log(
        p.h, a, breaks=(top,), upper=top
    )
    rest_a = integrate_log(lambda v: p.h(v) * v**-a, a, breaks=(top,)) - integrate_log(
        lambda v: p.h(v) * v**-a, a, breaks=(top,), upper=top
    )
    tail_b = np.append(np.cumsum(cell_b[::-1])[::-1], 0.0) + rest_b
    tail_a = np.append(np.cumsum(cell_a[::-1])[::-1], 0.0) + rest_a
    big = np.exp(a * lt)
    return (0.5 * tail_b[0] - tail_a[0]) / big + big * tail_a - 0.5 * tail_b


def sup_psi_projection(h, alpha=None, grid_points=512, t_hi_power=1e12):
    """``(t*, sup_t |int psi(x; t) h(x) dx|)``.

    Coarse pass over ``grid_points`` values with ``t**alpha`` log-spaced in
    ``[1, t_hi_power]``, then a bounded Brent refinement, on direct adaptive
    quadrature, between the neighbours of the best grid point. For
    ``s <= t``, ``|psi(s; t)| <= 1.5 / t**alpha``, so beyond the grid the
    projection is bounded by ``1.5 int|h| / t_hi_power + 2 int_t^inf |h|``.
    """
    p = _as_perturbation(h, alpha)
    a = p.alpha
    lt = np.linspace(0.0, math.log(t_hi_power) / a, grid_points)
    vals = np.abs(_coarse_psi_projection(p, lt))
    k = int(np.argmax(vals))
    lo, hi = lt[max(k - 1, 0)], lt[min(k + 1, grid_points - 1)]
    at_grid = abs(_psi_projection(p, math.exp(lt[k])))
    res = optimize.minimize_scalar(
        lambda v: -abs(_psi_projection(p, math.exp(v))),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-10},
    )
    if -res.fun >= at_grid:
        return float(math.exp(res.x)), float(-res.fun)
    return float(math.exp(lt[k])), float(at_grid)


def b_prime0(statistic, h, alpha=None, **sup_options):
    """Derivative at 0 of the limit in probability of the statistic.

    T_n: ``3 int upsilon h``. V_n: ``2 sup_t |int psi(.; t) h|``.
    """
    p = _as_perturbation(h, alpha)
    if statistic == "tn":
        return 3.0 * integrate_log(lambda x: upsilon(x, p.alpha) * p.h(x), p.alpha, breaks=p.breaks)
    if statistic == "vn":
        return 2.0 * sup_psi_projection(p, **sup_options)[1]
    raise ValueError("statistic must be 'tn' or 'vn'")


def kl_curvature(h, alpha=None):
    """``int x^{a+1}/a h^2 dx - (int a h ln x dx)^2``."""
    p = _as_perturbation(h, alpha)
    a = p.alpha
    fisher = integrate_log(lambda x: x ** (a + 1.0) / a * p.h(x) ** 2, a, breaks=p.breaks)
    score = integrate_log(lambda x: a * p.h(x) * math.log(x), a, breaks=p.breaks)
    return fisher - score * score


@dataclass(frozen=True)
class CenteredPerturbation:
    h0: H0Perturbation
    log_moment: float  # int h(s) ln s ds
    variance_identity_residual: float
    projection_identity_residual: float


def centered_perturbation(h, alpha=None, tol=1e-8):
    """Remove from ``h`` its component along the Pareto score for the shape.

    ``h0(x) = h(x) - (a ln x - 1) a^2 x^{-a-1} int h(s) ln s ds``. Checks by
    quadrature that ``int x^{a+1}/a h0^2`` equals :func:`kl_curvature` and
    that ``int upsilon h0 = int upsilon h``; raises if either is off by more
    than ``tol``.
    """
    p = _as_perturbation(h, alpha)
    a = p.alpha
    total = integrate_log(p.h, a, breaks=p.breaks)
    if abs(total) > 1e-8:
        raise ValueError(f"h does not integrate to zero (got {total:.3g})")
    c = integrate_log(lambda x: p.h(x) * math.log(x), a, breaks=p.breaks)

    def h0(x):
        return p.h(x) - (a * np.log(x) - 1.0) * a * a * x ** (-a - 1.0) * c

    q = H0Perturbation(h0, a, p.name + " (centred)", p.breaks)
    lhs = integrate_log(lambda x: x ** (a + 1.0) / a * h0(x) ** 2, a, breaks=p.breaks)
    r1 = lhs - kl_curvature(p)
    ups_h = integrate_log(lambda x: upsilon(x, a) * p.h(x), a, breaks=p.breaks)
    ups_h0 = integrate_log(lambda x: upsilon(x, a) * h0(x), a, breaks=p.breaks)
    r2 = ups_h0 - ups_h
    if abs(r1) > tol or abs(r2) > tol:
        raise QuadratureError(f"centring identities fail: residuals {r1:.3g}, {r2:.3g}")
    return CenteredPerturbation(q, c, r1, r2)


def local_efficiency(statistic, family, **sup_options):
    """Local Bahadur efficiency of T_n ('tn') or V_n ('vn') along ``family``.

    ``family`` is an alternative instance or an :class:`H0Perturbation`.
    """
    p = _as_perturbation(family)
    slope = slope_coefficient(statistic)
    details = {}
    if statistic == "vn":
        t_star, sup = sup_psi_projection(p, **sup_options)
        b = 2.0 * sup
        details["t_star"] = t_star
    else:
        b = b_prime0(statistic, p)
    k = kl_curvature(p)
    if k <= 0:
        raise QuadratureError("non-positive Kullback-Leibler curvature")
    e = 2.0 * slope * b * b / k
    over = e > 1.0 + 1e-6
    if over:
        warnings.warn(
            f"efficiency {e:.8f} exceeds 1; quadrature error suspected", RuntimeWarning
        )
    return EfficiencyReport(p.name, statistic, b, k, slope, e, over, details)


def optimality_check(statistic, alpha, C=1.0, D=0.0, theta_small=0.01, **sup_options):
    """Efficiency of the test along its own locally optimal family (should be 1)."""
    cls = {"tn": LocallyOptimalT, "vn": LocallyOptimalV}[statistic]
    family = cls(alpha=alpha, theta=theta_small, C=C, D=D)  # validates the density
    return local_efficiency(statistic, family, **sup_options).efficiency


def maximize_mixture_efficiency(alpha=1.0, ratio_bounds=(1.5, 20.0), **sup_options):
    """``(beta/alpha, e_V)`` maximising V_n's efficiency over the Pareto mixtures."""

    def neg(r):
        fam = ParetoMixture(alpha=alpha, beta=r * alpha)
        return -local_efficiency("vn", fam, **sup_options).efficiency

    res = optimize.minimize_scalar(
        neg, bounds=ratio_bounds, method="bounded", options={"xatol": 1e-4}
    )
    return float(res.x), float(-res.fun)
