"""
The two statistics on tiny samples
==================================

For a sample on [1, inf) the ratio ``max(x_i/x_j, x_j/x_i)`` of a random pair
has the same law as a single observation exactly when the data are Pareto.
T_n and V_n compare the empirical CDF of the pair ratios, M_n, with the
ordinary empirical CDF, F_n.
"""

import numpy as np

from paretogof.statistics import (
    pair_maxima,
    pooled_ranks,
    statistic_t_direct,
    statistic_t_rank,
    statistic_v,
    u_empirical_cdf,
)

# Three points are enough to see every piece.
s = [2.0, 3.0, 12.0]
print("pair ratios:", pair_maxima(s))
print("M_n(4) =", u_empirical_cdf(s, 4.0))

# T_n can be written with the ranks of the observations among the pooled set
# of observations and pair ratios.
pr = pooled_ranks(s)
print("ranks in the pooled sample:", pr.ranks)
print("T_n (ranks)      =", statistic_t_rank(s).value)
print("T_n (definition) =", statistic_t_direct(s).value)
print("V_n              =", statistic_v(s).value)

# Raising the data to a power leaves both statistics untouched, which is why
# their null distribution does not depend on the Pareto shape.
y = np.asarray(s) ** 3
print("after x -> x**3: T_n =", statistic_t_rank(y).value, " V_n =", statistic_v(y).value)
