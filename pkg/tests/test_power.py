import json
import math

import pytest

from paretogof.distributions import POWER_ALTERNATIVES, LogGamma, Pareto, ShiftedWeibull
from paretogof.montecarlo import SimulationConfig
from paretogof.power import TESTS, binomial_se, estimate_power, full_table, size_row

CFG = SimulationConfig(reps=10_000, seed=3)


@pytest.fixture(scope="module")
def small_table():
    return full_table(SimulationConfig(reps=2000, seed=3))


def test_tn_power_weibull_n20():
    assert estimate_power("tn", ShiftedWeibull(2.0), 20, 0.05, CFG) == pytest.approx(0.9984, abs=0.01)


def test_vn_power_log_gamma_n20():
    assert estimate_power("vn", LogGamma(2.0, 1.0), 20, 0.05, CFG) == pytest.approx(0.5282, abs=0.03)


def test_ks_power_weibull_n20():
    assert estimate_power("ks", ShiftedWeibull(2.0), 20, 0.05, CFG) == pytest.approx(0.9893, abs=0.01)


@pytest.mark.parametrize("test", TESTS)
def test_pareto_alternative_gives_size(test):
    cfg = SimulationConfig(reps=4000, seed=11)
    p = estimate_power(test, Pareto(1.0), 20, 0.05, cfg)
    # the critical value is itself estimated from cfg.reps independent null
    # draws, which doubles the variance of the rejection rate
    assert abs(p - 0.05) <= 3 * math.sqrt(2) * binomial_se(0.05, cfg.reps)


def test_grid_shape(small_table):
    assert small_table.ns == [20, 50]
    assert small_table.alternatives == list(POWER_ALTERNATIVES)
    assert small_table.tests == list(TESTS)
    assert len(small_table.cells) == 5 * 4 * 2


def test_se_column(small_table):
    for c in small_table.cells:
        assert c.se == pytest.approx(math.sqrt(c.power * (1 - c.power) / c.reps))


def test_power_grows_with_n(small_table):
    for t in TESTS:
        for alt in small_table.alternatives:
            lo, hi = small_table.cell(t, alt, 20), small_table.cell(t, alt, 50)
            assert hi.power >= lo.power - 2 * math.hypot(lo.se, hi.se)


def test_weibull_gamma_powers_at_n50(small_table):
    for alt in ("weibull", "gamma"):
        for t in TESTS:
            assert small_table.power(t, alt, 50) >= 0.995


def test_exports(small_table):
    tsv = small_table.to_tsv().splitlines()
    assert tsv[0].split("\t") == ["n", "alternative", "test", "power", "se", "reps", "lower_cv", "upper_cv"]
    assert len(tsv) == 41
    doc = json.loads(small_table.to_json({"seed": 3}))
    assert len(doc["cells"]) == 40 and doc["sides"]["tn"] == "two-sided"
    text = small_table.to_text().splitlines()
    assert len(text) == 11 and "T_n" in text[0]
    cmp = small_table.compare_paper()
    assert len(cmp) == 40
    assert all(abs(d) < 0.1 for *_, d, _se in cmp)


def test_one_sided_tn_is_available():
    one = estimate_power("tn", ShiftedWeibull(2.0), 20, 0.05, SimulationConfig(reps=1000, seed=3), side="greater")
    assert 0.0 <= one <= 1.0
    rep = size_row(SimulationConfig(reps=1000, seed=3), ns=(20,), sides={"tn": "greater"})
    assert rep.sides["tn"] == "greater" and rep.alternatives == ["pareto"]


def test_unknown_cell(small_table):
    with pytest.raises(KeyError):
        small_table.cell("tn", "cauchy", 20)
