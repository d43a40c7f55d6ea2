"""Pass/fail ledger of the closed-form constants, checked by quadrature.

Each :class:`Check` pairs a computed value with its closed form. The
characterization checks are Monte-Carlo: two-sample KS between draws of ``X``
and independent draws of ``max(Y/Z, Z/Y)``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special, stats

from . import asymptotics as asy
from .distributions import (
    LogLinearExponent,
    LogWeibull,
    Pareto,
    ParetoMixture,
    ShiftedWeibull,
)
from .montecarlo import stream_rng
from .projections import psi, upsilon

SIGMA2_T = 5.0 / 972.0
SIGMA2_V_MAX = (7.0 * math.sqrt(7.0) + 10.0) / 648.0


@dataclass(frozen=True)
class Check:
    name: str
    computed: float
    expected: float
    tol: float
    relative: bool = False

    @property
    def error(self):
        err = abs(self.computed - self.expected)
        return err / abs(self.expected) if self.relative else err

    @property
    def passed(self):
        return self.error <= self.tol

    def line(self):
        kind = "rel" if self.relative else "abs"
        flag = "PASS" if self.passed else "FAIL"
        return (
            f"{flag}  {self.name:<52} computed={self.computed:.12g}  "
            f"expected={self.expected:.12g}  {kind}err={self.error:.2e} (tol {self.tol:g})"
        )


# closed forms ---------------------------------------------------------------


def loglinear_b_prime0(beta, alpha):
    return special.gamma(beta + 1) * (beta - 1) / (2 ** (beta + 1) * alpha**beta)


def loglinear_kl(beta, alpha):
    return (beta**2 * special.gamma(2 * beta - 1) - special.gamma(beta + 1) ** 2) / alpha ** (
        2 * beta
    )


def loglinear_efficiency(beta):
    g = special.gamma(beta + 1)
    return (
        108.0
        / 5.0
        * g**2
        * (beta - 1) ** 2
        / (2 ** (2 * beta + 2) * (beta**2 * special.gamma(2 * beta - 1) - g**2))
    )


def mixture_b_prime0_v(alpha, beta):
    return (beta - alpha) ** 2 / (alpha * (alpha + beta) * (beta / alpha) ** (beta / (beta - alpha)))


def mixture_kl(alpha, beta):
    return (beta - alpha) ** 4 / (alpha * beta**2 * (2 * beta - alpha))


def mixture_efficiency_v(alpha, beta):
    slope = asy.slope_coefficient("vn")
    return (
        2.0
        * slope
        * alpha
        * (2 * beta - alpha)
        / ((alpha + beta) ** 2 * (beta / alpha) ** (2 * alpha / (beta - alpha)))
    )


# Monte-Carlo characterization ----------------------------------------------


def characterization_rejection_rate(alt, pairs=10_000, meta=200, level=0.05, seed=7):
    """Fraction of ``meta`` KS tests rejecting ``X =d max(Y/Z, Z/Y)`` at ``level``.

    ``X``, ``Y``, ``Z`` are independent draws of ``pairs`` values each, so the
    two compared samples are independent.
    """
    rejected = 0
    for m in range(meta):
        rng = stream_rng(seed, 2, m)
        x = alt.rvs(pairs, rng)
        y = alt.rvs(pairs, rng)
        z = alt.rvs(pairs, rng)
        ratio = np.maximum(y / z, z / y)
        rejected += stats.ks_2samp(x, ratio).pvalue < level
    return rejected / meta


# ledger ---------------------------------------------------------------------


def constant_checks():
    out = []
    for a in (0.5, 1.0, 3.0):
        out.append(Check(f"sigma^2 = Var upsilon(X) = 5/972, alpha={a:g}", asy.sigma2_T(a), SIGMA2_T, 1e-10))
    out.append(Check("asymptotic variance 9 sigma^2 = 5/108", 9 * asy.sigma2_T(1.0), 5 / 108, 1e-9))
    out.append(
        Check("E upsilon(X) = 0", asy.expect_null(lambda s: upsilon(s, 1.0), 1.0), 0.0, 1e-10)
    )
    for t in (1.5, 2.0, 5.0):
        out.append(
            Check(f"E psi(X; t) = 0, t={t:g}", asy.expect_null(lambda s: psi(s, t, 1.0), 1.0, (t,)), 0.0, 1e-10)
        )
    for t in (1.2, 1.5, 2.0, 5.0, 10.0):
        out.append(
            Check(f"sigma^2(t) closed form vs quadrature, t={t:g}", asy.sigma2_V_quad(t, 1.0), asy.sigma2_V(t, 1.0), 1e-9)
        )
    for a in (0.5, 1.0, 3.0):
        t0, vmax = asy.sigma2_V_max(a)
        out.append(Check(f"argmax sigma^2(t) = (sqrt7-1)^(1/alpha), alpha={a:g}", t0, (math.sqrt(7) - 1) ** (1 / a), 1e-8))
        out.append(Check(f"max sigma^2(t) = (7 sqrt7 + 10)/648, alpha={a:g}", vmax, SIGMA2_V_MAX, 1e-10))
    out.append(Check("slope T_n = 54/5", asy.slope_coefficient("tn"), 54 / 5, 1e-9))
    out.append(Check("slope T_n = 1/(18 sigma^2)", asy.slope_coefficient("tn"), 1 / (18 * asy.sigma2_T(1.0)), 1e-9))
    out.append(Check("slope V_n = 81/(7 sqrt7 + 10)", asy.slope_coefficient("vn"), 81 / (7 * math.sqrt(7) + 10), 1e-9))
    out.append(Check("slope V_n = 1/(8 max sigma^2(t))", asy.slope_coefficient("vn"), 1 / (8 * asy.sigma2_V_max(1.0)[1]), 1e-9))
    return out


def efficiency_checks(include_maximizer=True):
    out = []
    for a in (0.5, 1.0, 3.0):
        lw = asy.local_efficiency("tn", LogWeibull(alpha=a))
        out.append(Check(f"log-Weibull b'_T(0) = 1/4, alpha={a:g}", lw.b_prime0, 0.25, 1e-6, True))
        out.append(Check(f"log-Weibull 2K'' = psi'(1), alpha={a:g}", lw.kl_curvature, asy.TRIGAMMA_1, 1e-6, True))
        out.append(Check(f"e_T(log-Weibull) = 27/(20 psi'(1)), alpha={a:g}", lw.efficiency, 27 / (20 * asy.TRIGAMMA_1), 1e-3, True))
    for beta in (1.5, 2.0, 3.0):
        r = asy.local_efficiency("tn", LogLinearExponent(alpha=1.0, beta=beta))
        out.append(Check(f"log-linear b'_T(0) closed form, beta={beta:g}", r.b_prime0, loglinear_b_prime0(beta, 1.0), 1e-6, True))
        out.append(Check(f"log-linear 2K'' closed form, beta={beta:g}", r.kl_curvature, loglinear_kl(beta, 1.0), 1e-6, True))
    out.append(Check("e_T(log-linear, beta=2) = 27/80", asy.local_efficiency("tn", LogLinearExponent(1.0, 2.0)).efficiency, 27 / 80, 1e-3, True))
    out.append(
        Check(
            "e_T(log-linear, beta=1.5) = 27 pi/(160 (4 - pi))",
            asy.local_efficiency("tn", LogLinearExponent(1.0, 1.5)).efficiency,
            27 * math.pi / (160 * (4 - math.pi)),
            1e-3,
            True,
        )
    )
    mix = asy.local_efficiency("vn", ParetoMixture(1.0, 2.0))
    out.append(Check("mixture b'_V(0) = 1/12 (alpha=1, beta=2)", mix.b_prime0, mixture_b_prime0_v(1.0, 2.0), 1e-6, True))
    out.append(Check("mixture 2K'' = 1/12 (alpha=1, beta=2)", mix.kl_curvature, mixture_kl(1.0, 2.0), 1e-6, True))
    out.append(Check("e_V(mixture, beta=2) closed form", mix.efficiency, mixture_efficiency_v(1.0, 2.0), 1e-3, True))
    if include_maximizer:
        ratio, best = asy.maximize_mixture_efficiency(1.0)
        out.append(Check("e_V(mixture) maximiser beta/alpha = 4.646", ratio, 4.646, 1e-2))
        out.append(Check("e_V(mixture) maximum = 0.636", best, 0.636, 1e-3, True))
    for stat in ("tn", "vn"):
        for a in (0.5, 1.0, 3.0):
            for D in (0.0, 5.0):
                e = asy.optimality_check(stat, a, C=1.0, D=D)
                out.append(Check(f"locally optimal {stat}: e=1 (alpha={a:g}, C=1, D={D:g})", e, 1.0, 1e-3))
    return out


def characterization_checks(seed=7):
    level = 0.05
    rate = characterization_rejection_rate(Pareto(1.0), level=level, seed=seed)
    band = 3 * math.sqrt(level * (1 - level) / 200)
    weib = characterization_rejection_rate(ShiftedWeibull(2.0), level=level, seed=seed)
    return [
        Check("KS(X, max ratio) rejection rate under Pareto ~ 0.05", rate, level, band),
        Check("KS(X, max ratio) rejection rate under Weibull > 0.99", weib, 1.0, 0.01),
    ]


def run_checks(profile="default", seed=7):
    """All ledger checks; ``'quick'`` skips the Monte-Carlo and maximiser checks."""
    if profile not in ("default", "quick"):
        raise ValueError("profile must be 'default' or 'quick'")
    quick = profile == "quick"
    out = constant_checks() + efficiency_checks(include_maximizer=not quick)
    if not quick:
        out += characterization_checks(seed)
    return out
