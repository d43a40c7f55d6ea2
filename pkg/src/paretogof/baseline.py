"""Kolmogorov-Smirnov and Cramer-von Mises tests with the shape estimated.

The fitted CDF is ``1 - x**-alpha_hat`` with ``alpha_hat = n / sum(log x)``.
Critical values come from a Lilliefors-type simulation: each null replicate
re-estimates the shape before computing the statistic. Since ``log X`` is
exponential with scale ``1/alpha``, estimating the shape amounts to estimating
a scale, and the null law of both statistics does not depend on ``alpha``.
"""

import numpy as np

from .distributions import DegenerateSampleError, as_sample
from .statistics import StatisticValue


def _fitted_cdf_rows(x):
    """Fitted Pareto CDF at the order statistics, row-wise on a 2-D sorted array."""
    logs = np.log(x)
    total = logs.sum(axis=1, keepdims=True)
    if np.any(total <= 0):
        raise DegenerateSampleError("all observations equal 1; shape MLE undefined")
    alpha_hat = x.shape[1] / total
    return -np.expm1(-alpha_hat * logs)


def ks_batch(x):
    """D_n for each row of a row-sorted 2-D array."""
    n = x.shape[1]
    f = _fitted_cdf_rows(x)
    i = np.arange(1, n + 1)
    return np.maximum((i / n - f).max(axis=1), (f - (i - 1) / n).max(axis=1))


def cvm_batch(x):
    """omega^2_n for each row of a row-sorted 2-D array."""
    n = x.shape[1]
    f = _fitted_cdf_rows(x)
    i = np.arange(1, n + 1)
    return 1.0 / (12 * n) + ((f - (2 * i - 1) / (2.0 * n)) ** 2).sum(axis=1)


def _prepare(s):
    s = as_sample(s)
    if s.n < 2:
        raise ValueError("at least two observations are needed")
    return s, s.values[None, :]


def ks_statistic_estimated(s):
    s, x = _prepare(s)
    return StatisticValue("D_n", float(ks_batch(x)[0]), s.n)


def cvm_statistic_estimated(s):
    s, x = _prepare(s)
    return StatisticValue("CvM", float(cvm_batch(x)[0]), s.n)


def baseline_critical_values(statistic, n, level, cfg):
    """Upper ``level`` critical value of D_n ('ks') or omega^2_n ('cvm').

    Null replicates are drawn at ``cfg.alpha_for_simulation`` and the shape is
    re-estimated inside each replicate.
    """
    if statistic not in ("ks", "cvm"):
        raise ValueError("baseline statistics are 'ks' and 'cvm'")
    from .montecarlo import critical_value

    return critical_value(statistic, n, level, cfg)
