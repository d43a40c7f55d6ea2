import math

import numpy as np
import pytest
from scipy import stats

import paretogof.baseline as baseline
from paretogof.baseline import (
    baseline_critical_values,
    cvm_batch,
    cvm_statistic_estimated,
    ks_batch,
    ks_statistic_estimated,
)
from paretogof.distributions import DegenerateSampleError, mle_alpha, pareto_cdf, pareto_ppf, pareto_sample
from paretogof.montecarlo import SimulationConfig, simulate_null

CFG = SimulationConfig(reps=10_000, seed=1)


def _fitted(x):
    a = mle_alpha(x)
    return lambda v: pareto_cdf(v, a)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_ks_matches_scipy_with_fitted_cdf(seed):
    s = pareto_sample(1.5, 25, np.random.default_rng(seed))
    ref = stats.kstest(s.values, _fitted(s.values)).statistic
    assert ks_statistic_estimated(s).value == pytest.approx(ref, abs=1e-14)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_cvm_matches_scipy_with_fitted_cdf(seed):
    s = pareto_sample(0.8, 25, np.random.default_rng(seed))
    ref = stats.cramervonmises(s.values, _fitted(s.values)).statistic
    assert cvm_statistic_estimated(s).value == pytest.approx(ref, abs=1e-13)


def test_cvm_minimising_configuration(monkeypatch):
    n = 7
    centred = (2 * np.arange(1, n + 1) - 1) / (2 * n)
    monkeypatch.setattr(baseline, "_fitted_cdf_rows", lambda x: centred[None, :])
    x = np.ones((1, n))
    assert cvm_batch(x)[0] == pytest.approx(1 / (12 * n), abs=1e-15)
    assert ks_batch(x)[0] == pytest.approx(1 / (2 * n), abs=1e-15)


def test_quantile_grid_gives_small_decreasing_distance():
    prev = math.inf
    for n in (10, 40, 160):
        x = pareto_ppf(np.arange(1, n + 1) / (n + 1), 1.0)
        d = ks_statistic_estimated(x).value
        assert d < 1.0 / math.sqrt(n)
        assert d < prev
        prev = d


def test_point_mass_gives_large_distance():
    x = np.full(20, 1.0 + 1e-6)
    d = ks_statistic_estimated(x).value
    # every point sits at F_hat = 1 - 1/e
    assert d == pytest.approx(1 - math.exp(-1), abs=1e-9)
    assert d > baseline_critical_values("ks", 20, 0.01, CFG)


def test_degenerate_sample_rejected():
    with pytest.raises(DegenerateSampleError):
        ks_statistic_estimated([1.0, 1.0, 1.0])


@pytest.mark.parametrize("stat", ["ks", "cvm"])
def test_power_transform_invariance(stat):
    s = pareto_sample(1.0, 30, np.random.default_rng(4))
    fn = ks_statistic_estimated if stat == "ks" else cvm_statistic_estimated
    assert fn(s.values**3.0).value == pytest.approx(fn(s).value, abs=1e-12)


@pytest.mark.parametrize("stat", ["ks", "cvm"])
def test_null_law_free_of_alpha(stat):
    a = simulate_null(stat, SimulationConfig(reps=10_000, seed=1, alpha_for_simulation=1.0), 20)
    b = simulate_null(stat, SimulationConfig(reps=10_000, seed=2, alpha_for_simulation=4.0), 20)
    assert stats.ks_2samp(a, b).pvalue > 0.01


@pytest.mark.parametrize("n", [10, 20, 50])
def test_estimated_ks_below_classical_quantiles(n):
    for level in (0.1, 0.05, 0.01):
        assert baseline_critical_values("ks", n, level, CFG) < stats.kstwo.ppf(1 - level, n)


@pytest.mark.parametrize("stat, n", [("ks", 20), ("cvm", 50)])
def test_size_calibration(stat, n):
    from paretogof.montecarlo import rejects, simulate_statistics

    c = baseline_critical_values(stat, n, 0.05, CFG)
    fresh = SimulationConfig(reps=10_000, seed=77, n=n)
    vals = simulate_statistics((stat,), lambda size, rng: rng.random(size) ** -1.0, fresh, (0,))[stat]
    rate = rejects(vals, (-math.inf, c)).mean()
    assert abs(rate - 0.05) <= 0.01


def test_unknown_statistic():
    with pytest.raises(ValueError):
        baseline_critical_values("tn", 20, 0.05, CFG)
