"""Compiled inner loops for the pair-ratio statistics.

Every routine takes samples already sorted ascending. Pair ratios are always
formed as ``x[k] / x[i]`` with ``i < k``, which is bitwise the same value as
``max(x[i] / x[k], x[k] / x[i])``; the Python reference implementations rely on
that to agree exactly with these kernels.
"""

import numpy as np
from numba import njit


@njit(nogil=True, cache=True)
def pair_counts_below(x):
    """For each j, the number of pairs i < k with ``x[k] / x[i] <= x[j]``.

    O(n^2): for fixed ``i`` the ratio ``x[k] / x[i]`` is nondecreasing in ``k``
    and the thresholds ``x[j]`` are nondecreasing in ``j``, so one pointer per
    row suffices.
    """
    n = x.shape[0]
    out = np.zeros(n, np.int64)
    for i in range(n - 1):
        xi = x[i]
        k = i + 1
        for j in range(n):
            t = x[j]
            while k < n and x[k] / xi <= t:
                k += 1
            out[j] += k - i - 1
    return out


@njit(nogil=True, cache=True)
def pair_count_total(x):
    """``sum_j pair_counts_below(x)[j]`` without the per-j array.

    Counted from the pairs' side: pair ``(i, k)`` contributes the number of
    ``j`` with ``x[k] / x[i] <= x[j]``. Row ``i`` is a merge of the sorted
    ratios ``x[k] / x[i]`` against ``x``, written without branches; four rows
    run in lockstep so their independent dependency chains overlap. This is
    about 2.5x faster than :func:`pair_counts_below` at n = 1000.
    """
    n = x.shape[0]
    xs = np.empty(n + 1)
    xs[:n] = x
    xs[n] = np.inf  # sentinel: never below a finite ratio
    r = np.zeros((4, n + 1))
    m = np.zeros(4, np.int64)
    total = 0
    for i0 in range(0, n - 1, 4):
        for q in range(4):
            i = i0 + q
            m[q] = n - i - 1 if i < n - 1 else 0
            for k in range(m[q]):
                r[q, k] = x[i + 1 + k] / x[i]
        m0, m1, m2, m3 = m[0], m[1], m[2], m[3]
        j0 = j1 = j2 = j3 = 0
        k0 = k1 = k2 = k3 = 0
        t0 = t1 = t2 = t3 = 0
        # row i0 has the longest merge, so the others finish no later
        while k0 < m0:
            a0 = k0 < m0
            a1 = k1 < m1
            a2 = k2 < m2
            a3 = k3 < m3
            c0 = a0 & (xs[j0] < r[0, k0])
            c1 = a1 & (xs[j1] < r[1, k1])
            c2 = a2 & (xs[j2] < r[2, k2])
            c3 = a3 & (xs[j3] < r[3, k3])
            j0 += c0
            j1 += c1
            j2 += c2
            j3 += c3
            e0 = a0 & ~c0
            e1 = a1 & ~c1
            e2 = a2 & ~c2
            e3 = a3 & ~c3
            t0 += e0 * (n - j0)
            t1 += e1 * (n - j1)
            t2 += e2 * (n - j2)
            t3 += e3 * (n - j3)
            k0 += e0
            k1 += e1
            k2 += e2
            k3 += e3
        total += t0 + t1 + t2 + t3
    return total


@njit(nogil=True, cache=True)
def sample_counts_below(x):
    """``c[j] = #{k : x[k] <= x[j]}`` for sorted ``x`` (handles ties)."""
    n = x.shape[0]
    out = np.empty(n, np.int64)
    j = n - 1
    while j >= 0:
        i = j
        while i > 0 and x[i - 1] == x[j]:
            i -= 1
        for m in range(i, j + 1):
            out[m] = j + 1
        j = i - 1
    return out


@njit(nogil=True, cache=True)
def t_numerator(x):
    """Integer numerator of T_n over the denominator ``n^2 N``.

    ``T_n = (n * sum_j P_j - N * sum_j c_j) / (n^2 N)`` where ``P_j`` counts
    pair maxima ``<= x_j`` and ``c_j`` counts sample points ``<= x_j``.
    """
    n = x.shape[0]
    npairs = n * (n - 1) // 2
    c = sample_counts_below(x)
    return n * pair_count_total(x) - npairs * c.sum()


@njit(nogil=True, cache=True)
def sorted_pair_maxima(x):
    n = x.shape[0]
    out = np.empty(n * (n - 1) // 2, np.float64)
    m = 0
    for i in range(n - 1):
        xi = x[i]
        for k in range(i + 1, n):
            out[m] = x[k] / xi
            m += 1
    return np.sort(out)


@njit(nogil=True, cache=True)
def v_numerator(x):
    """Integer ``max_t |n * #pairs<=t - N * #sample<=t|``; V_n is this over ``n N``.

    The difference of the two step functions only changes at pooled values, so
    scanning the distinct pooled values in order (absorbing all ties at a value
    before recording) visits every attained value, left limits included.
    """
    n = x.shape[0]
    npairs = n * (n - 1) // 2
    pm = sorted_pair_maxima(x)
    a = 0
    b = 0
    best = 0
    while a < npairs or b < n:
        if b >= n:
            v = pm[a]
        elif a >= npairs:
            v = x[b]
        else:
            v = min(pm[a], x[b])
        while a < npairs and pm[a] <= v:
            a += 1
        while b < n and x[b] <= v:
            b += 1
        d = n * a - npairs * b
        if d < 0:
            d = -d
        if d > best:
            best = d
    return best


@njit(nogil=True, cache=True)
def t_batch(samples):
    """T_n for every row of a 2-D array of row-sorted samples."""
    reps, n = samples.shape
    npairs = n * (n - 1) // 2
    den = float(n) * float(n) * float(npairs)
    out = np.empty(reps, np.float64)
    for r in range(reps):
        out[r] = t_numerator(samples[r]) / den
    return out


@njit(nogil=True, cache=True)
def v_batch(samples):
    reps, n = samples.shape
    npairs = n * (n - 1) // 2
    den = float(n) * float(npairs)
    out = np.empty(reps, np.float64)
    for r in range(reps):
        out[r] = v_numerator(samples[r]) / den
    return out
