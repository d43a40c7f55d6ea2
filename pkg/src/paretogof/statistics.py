"""The characterization statistics T_n and V_n and the U-empirical CDF M_n.

``M_n(t)`` is the fraction of unordered pairs whose ratio
``max(x_i/x_j, x_j/x_i)`` is at most ``t``; ``F_n`` is the ordinary empirical
CDF. T_n integrates ``M_n - F_n`` against ``dF_n`` and V_n is the sup-norm of
the difference.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .distributions import as_sample, warn_if_ties


@dataclass(frozen=True)
class StatisticValue:
    name: str
    value: float
    n: int

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class PooledRanks:
    """Pair maxima and the ranks of the sample points in the pooled set.

    ``ranks[j]`` is the number of pooled values (sample points and pair
    maxima) that are ``<=`` the j-th smallest observation.
    """

    pair_maxima: np.ndarray
    ranks: np.ndarray
    sample_counts: np.ndarray

    @property
    def n(self):
        return self.ranks.size

    @property
    def n_pairs(self):
        return self.pair_maxima.size


def _require_pairs(s):
    if s.n < 2:
        raise ValueError("at least two observations are needed")


def pair_maxima(s):
    """Sorted ``max(x_i/x_j, x_j/x_i)`` over the ``n(n-1)/2`` unordered pairs."""
    s = as_sample(s)
    x = s.values
    i, k = np.triu_indices(s.n, 1)
    return np.sort(x[k] / x[i])


def pooled_ranks(s):
    s = as_sample(s)
    _require_pairs(s)
    x = s.values
    pm = pair_maxima(s)
    counts = np.searchsorted(x, x, side="right")
    ranks = counts + np.searchsorted(pm, x, side="right")
    return PooledRanks(pair_maxima=pm, ranks=ranks, sample_counts=counts)


def u_empirical_cdf(s, t):
    """``M_n(t)``; vectorised over ``t``."""
    s = as_sample(s)
    _require_pairs(s)
    t = np.asarray(t, dtype=float)
    if np.any(t < 1):
        raise ValueError("M_n is defined for t >= 1")
    pm = pair_maxima(s)
    out = np.searchsorted(pm, t, side="right") / pm.size
    return out[()] if out.ndim == 0 else out


def empirical_cdf(s, t):
    s = as_sample(s)
    out = np.searchsorted(s.values, np.asarray(t, dtype=float), side="right") / s.n
    return out[()] if np.ndim(out) == 0 else out


def statistic_t_rank(s):
    """T_n from pooled ranks, ``(2 sum r_j - (n+1)(n+N)) / (2nN)``.

    Evaluated in exact integer arithmetic as
    ``(n * sum(r_j - c_j) - N * sum(c_j)) / (n^2 N)`` with ``c_j`` the number of
    observations ``<= x_j``; without ties ``c_j = j`` and the two coincide.
    """
    s = as_sample(s)
    _require_pairs(s)
    warn_if_ties(s)
    pr = pooled_ranks(s)
    n, npairs = s.n, pr.n_pairs
    c = pr.sample_counts.astype(np.int64)
    num = n * int((pr.ranks - c).sum()) - npairs * int(c.sum())
    return StatisticValue("T_n", num / (n * n * npairs), n)


def statistic_t_direct(s):
    """T_n straight from the definition, ``mean_j (M_n(x_j) - F_n(x_j))``.

    Brute force over all (pair, point) combinations, O(n^3). Used as an oracle
    for :func:`statistic_t_rank`.
    """
    s = as_sample(s)
    _require_pairs(s)
    x = s.raw
    n = x.size
    i, k = np.triu_indices(n, 1)
    ratios = np.maximum(x[i] / x[k], x[k] / x[i])
    m = (ratios[None, :] <= x[:, None]).mean(axis=1)
    f = (x[None, :] <= x[:, None]).mean(axis=1)
    return StatisticValue("T_n", float(np.mean(m - f)), n)


def statistic_v(s):
    """V_n = sup_t |M_n(t) - F_n(t)|, exact.

    The difference is a right-continuous step function jumping only at pooled
    values, so its sup is attained at one of them or at a left limit (the
    value at the preceding jump, or 0 before the first).
    """
    s = as_sample(s)
    _require_pairs(s)
    warn_if_ties(s)
    n = s.n
    npairs = n * (n - 1) // 2
    num = _kernels.v_numerator(np.ascontiguousarray(s.values))
    return StatisticValue("V_n", num / (n * npairs), n)


def statistic_v_scan(s):
    """V_n by evaluating both step functions at every pooled value in NumPy.

    Independent of the compiled merge in :func:`statistic_v`; kept as its
    reference.
    """
    s = as_sample(s)
    _require_pairs(s)
    pm = pair_maxima(s)
    pts = np.unique(np.concatenate([pm, s.values]))
    d = np.searchsorted(pm, pts, side="right") / pm.size - np.searchsorted(
        s.values, pts, side="right"
    ) / s.n
    return StatisticValue("V_n", float(np.max(np.abs(d))), s.n)


def statistic_t(s):
    """T_n via the compiled O(n^2) pair-count kernel (fast path)."""
    s = as_sample(s)
    _require_pairs(s)
    warn_if_ties(s)
    n = s.n
    npairs = n * (n - 1) // 2
    num = _kernels.t_numerator(np.ascontiguousarray(s.values))
    return StatisticValue("T_n", num / (n * n * npairs), n)
