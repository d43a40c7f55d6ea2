import math

import numpy as np
import pytest
from scipy import integrate, stats

from paretogof.distributions import (
    POWER_ALTERNATIVES,
    DegenerateSampleError,
    DomainError,
    InvalidDensityError,
    LocallyOptimalT,
    LocallyOptimalV,
    LogGamma,
    LogLinearExponent,
    LogWeibull,
    Pareto,
    ParetoMixture,
    Sample,
    ShiftedHalfNormal,
    ShiftedWeibull,
    TiesWarning,
    alt_cdf,
    alt_quantile,
    alt_sample,
    locally_optimal_density_t,
    locally_optimal_density_v,
    mle_alpha,
    optimal_threshold,
    pareto_cdf,
    pareto_from_uniform,
    pareto_pdf,
    pareto_sample,
    warn_if_ties,
)

FAMILIES = [
    Pareto(1.0),
    Pareto(2.5),
    LogWeibull(1.0, 0.3),
    LogWeibull(2.0, 0.0),
    LogLinearExponent(1.0, 2.0, 0.1),
    LogLinearExponent(0.5, 1.5, 0.4),
    ParetoMixture(1.0, 2.0, 0.5),
    ParetoMixture(0.7, 3.3, 0.2),
    LocallyOptimalT(1.0, 0.05, 1.0, 0.0),
    LocallyOptimalT(3.0, 0.01, 1.0, 5.0),
    LocallyOptimalV(1.0, 0.05, 1.0, 0.0),
    LocallyOptimalV(0.5, 0.01, 1.0, 5.0),
    *POWER_ALTERNATIVES.values(),
]


def _id(a):
    return repr(a)


# --------------------------------------------------------------------------
# Pareto null
# --------------------------------------------------------------------------


@pytest.mark.parametrize(
    "x, alpha, expected", [(1.0, 2.7, 0.0), (2.0, 1.0, 0.5), (4.0, 0.5, 0.5)]
)
def test_pareto_cdf_hand_values(x, alpha, expected):
    assert pareto_cdf(x, alpha) == pytest.approx(expected, abs=1e-15)


def test_pareto_cdf_rejects_below_support():
    with pytest.raises(DomainError, match=r"\[1, inf\)"):
        pareto_cdf(0.5, 1.0)


def test_pareto_pdf_integrates_to_one():
    val, _ = integrate.quad(lambda x: pareto_pdf(x, 1.7), 1, np.inf)
    assert val == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("alpha", [0.3, 1.0, 4.0])
def test_inverse_transform_forced_uniform(alpha):
    assert pareto_from_uniform(0.25, alpha) == pytest.approx(0.25 ** (-1 / alpha), rel=1e-14)


def test_sample_within_dkw_band():
    n = 100_000
    s = pareto_sample(1.0, n, np.random.default_rng(11))
    ecdf_hi = np.arange(1, n + 1) / n
    ecdf_lo = np.arange(n) / n
    f = pareto_cdf(s.values, 1.0)
    dist = max(np.max(ecdf_hi - f), np.max(f - ecdf_lo))
    # DKW: P(sup|F_n - F| > eps) <= 2 exp(-2 n eps^2), level 1e-3
    eps = math.sqrt(math.log(2 / 1e-3) / (2 * n))
    assert dist < eps


def test_sample_mean_alpha_two():
    n = 100_000
    s = pareto_sample(2.0, n, np.random.default_rng(12))
    # variance is infinite at alpha = 2, so the "standard error" uses the sample sd
    se = s.values.std(ddof=1) / math.sqrt(n)
    assert abs(s.values.mean() - 2.0) < 3 * se


def test_sample_rejects_empty():
    with pytest.raises(ValueError):
        pareto_sample(1.0, 0, np.random.default_rng(0))


def test_sample_class_validates_and_sorts():
    s = Sample([3.0, 1.5, 2.0])
    assert s.values.tolist() == [1.5, 2.0, 3.0]
    assert s.raw.tolist() == [3.0, 1.5, 2.0]
    assert not s.has_ties
    with pytest.raises(DomainError, match="support"):
        Sample([2.0, 0.9])
    with pytest.raises(ValueError):
        Sample([2.0, np.nan])


def test_tie_warning():
    s = Sample([2.0, 2.0, 3.0])
    assert s.has_ties
    with pytest.warns(TiesWarning):
        warn_if_ties(s)


# --------------------------------------------------------------------------
# MLE
# --------------------------------------------------------------------------


def test_mle_hand_values():
    e = math.e
    assert mle_alpha([e, e, e]) == pytest.approx(1.0, rel=1e-15)
    assert mle_alpha([e**2]) == pytest.approx(0.5, rel=1e-15)


def test_mle_consistency():
    s = pareto_sample(3.0, 100_000, np.random.default_rng(13))
    assert abs(mle_alpha(s) - 3.0) < 0.05


def test_mle_degenerate():
    with pytest.raises(DegenerateSampleError):
        mle_alpha([1.0, 1.0])


# --------------------------------------------------------------------------
# Alternatives
# --------------------------------------------------------------------------


def test_alt_cdf_hand_values():
    assert alt_cdf(2.0, LogWeibull(1.0, 0.0)) == pytest.approx(0.5, abs=1e-15)
    assert alt_cdf(2.0, ParetoMixture(1.0, 2.0, 0.5)) == pytest.approx(0.625, abs=1e-15)
    assert alt_cdf(math.e, LogLinearExponent(1.0, 2.0, 0.1)) == pytest.approx(
        1 - math.exp(-1.1), abs=1e-15
    )


@pytest.mark.parametrize("a", FAMILIES, ids=_id)
def test_cdf_of_quantile_is_identity(a):
    q = np.linspace(0.01, 0.99, 99)
    assert np.max(np.abs(alt_cdf(alt_quantile(q, a), a) - q)) < 1e-10


@pytest.mark.parametrize("a", FAMILIES, ids=_id)
def test_samples_on_support_and_match_cdf(a):
    s = alt_sample(a, 4000, np.random.default_rng(21))
    assert s.values[0] >= 1.0
    assert stats.kstest(s.values, lambda x: alt_cdf(x, a)).pvalue > 1e-3


@pytest.mark.parametrize("a", FAMILIES, ids=_id)
def test_density_integrates_to_one(a):
    val, _ = integrate.quad(lambda u: a.pdf(math.exp(u)) * math.exp(u), 0, 60, limit=200)
    # log-gamma and the slowest Pareto tails lose < 1e-10 beyond u = 60
    assert val == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize(
    "a",
    [
        LogWeibull(1.3, 0.0),
        LogLinearExponent(1.3, 2.5, 0.0),
        ParetoMixture(1.3, 4.0, 0.0),
        LocallyOptimalT(1.3, 0.0, 1.0, 2.0),
        LocallyOptimalV(1.3, 0.0, 1.0, 2.0),
    ],
    ids=_id,
)
def test_theta_zero_collapses_to_pareto(a):
    x = np.exp(np.linspace(0, 20, 200))
    assert np.max(np.abs(a.cdf(x) - pareto_cdf(x, 1.3))) < 1e-12
    assert np.max(np.abs(a.pdf(x) - pareto_pdf(x, 1.3))) < 1e-12


def test_mixture_theta_zero_sampling_matches_pareto():
    n = 100_000
    mix = alt_sample(ParetoMixture(1.0, 2.0, 0.0), n, np.random.default_rng(31))
    par = pareto_sample(1.0, n, np.random.default_rng(32))
    assert stats.ks_2samp(mix.values, par.values).pvalue > 0.01


def test_half_normal_support():
    s = alt_sample(ShiftedHalfNormal(), 1000, np.random.default_rng(1))
    assert s.values.min() >= 1.0


def test_log_gamma_mean_of_log():
    n = 100_000
    s = alt_sample(LogGamma(2.0, 1.0), n, np.random.default_rng(33))
    u = np.log(s.values)
    assert abs(u.mean() - 2.0) < 3 * math.sqrt(2.0 / n)


def test_shifted_weibull_is_one_plus_weibull():
    x = np.array([1.0, 1.5, 2.0, 4.0])
    assert np.allclose(
        ShiftedWeibull(2.0).cdf(x), 1 - np.exp(-((x - 1) ** 2)), atol=1e-15
    )


def test_parameter_validation():
    with pytest.raises(ValueError):
        LogWeibull(1.0, 1.0)
    with pytest.raises(ValueError):
        LogLinearExponent(1.0, 1.0, 0.1)
    with pytest.raises(ValueError):
        ParetoMixture(2.0, 1.0, 0.1)
    with pytest.raises(ValueError):
        Pareto(-1.0)


# --------------------------------------------------------------------------
# Locally optimal densities
# --------------------------------------------------------------------------


def test_locally_optimal_t_at_one():
    # upsilon(1) = -1/6
    assert locally_optimal_density_t(1.0, 1.0, 0.05, 1.0, 0.0) == pytest.approx(
        1 - 0.05 / 6, rel=1e-14
    )


@pytest.mark.parametrize("dens", [locally_optimal_density_t, locally_optimal_density_v])
def test_locally_optimal_null_case(dens):
    x = np.array([1.0, 1.7, 9.0, 1e4])
    assert np.allclose(dens(x, 2.0, 0.0, 1.0, 3.0), pareto_pdf(x, 2.0), rtol=1e-14)


@pytest.mark.parametrize("dens", [locally_optimal_density_t, locally_optimal_density_v])
def test_locally_optimal_density_integrates_to_one(dens):
    t0 = optimal_threshold(1.0)
    f = lambda u: dens(math.exp(u), 1.0, 0.05, 1.0, 0.0) * math.exp(u)
    val = sum(
        integrate.quad(f, a, b, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
        for a, b in [(0, math.log(t0)), (math.log(t0), 40), (40, 400)]
    )
    assert val == pytest.approx(1.0, abs=1e-8)


def test_locally_optimal_v_nonnegative_on_grid():
    x = np.exp(np.linspace(0, 30, 20_000))
    assert np.all(locally_optimal_density_v(x, 1.0, 0.01, 1.0, 0.0) >= 0)


@pytest.mark.parametrize("cls", [LocallyOptimalT, LocallyOptimalV])
def test_locally_optimal_closed_form_cdf_matches_quadrature(cls):
    a = cls(1.0, 0.05, 1.0, 2.0)
    t0 = optimal_threshold(1.0)
    for x in (1.3, t0, 2.0, 7.5, 40.0):
        cuts = sorted({1.0, x, *(c for c in (t0,) if c < x)})
        val = sum(
            integrate.quad(a.pdf, lo, hi, epsabs=1e-14, epsrel=1e-13)[0]
            for lo, hi in zip(cuts, cuts[1:])
        )
        assert a.cdf(x) == pytest.approx(val, abs=1e-11)


def test_locally_optimal_rejects_negative_density():
    with pytest.raises(InvalidDensityError):
        LocallyOptimalT(1.0, 0.9, 50.0, 0.0)
    with pytest.raises(InvalidDensityError):
        LocallyOptimalT(1.0, 0.05, 1.0, -1.0)
    with pytest.raises(ValueError):
        LocallyOptimalV(1.0, 0.05, 0.0, 0.0)
