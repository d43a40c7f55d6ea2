"""Null-hypothesis projections of the two test kernels.

Both functions are the conditional expectation of a kernel given one argument
``s`` when the other arguments are i.i.d. Pareto(alpha). They are centred:
their expectation under Pareto(alpha) is zero.
"""

import numpy as np


def upsilon(s, alpha):
    """Projection of the three-argument kernel behind T_n.

    ``(2/3) * alpha * ln(s) / s**alpha - 1/6``. Equals -1/6 at ``s = 1`` and in
    the limit ``s -> inf``, with a single maximum at ``s = exp(1/alpha)``.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s < 1):
        raise ValueError("upsilon is defined for s >= 1")
    u = np.log(s)
    out = (2.0 / 3.0) * alpha * u * np.exp(-alpha * u) - 1.0 / 6.0
    return out[()] if out.ndim == 0 else out


def psi(s, t, alpha):
    """Projection of the two-argument kernel behind M_n(t) - F_n(t).

    The indicator is ``I{s <= t}``, so at ``s == t`` the left branch is used.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s < 1) or t < 1:
        raise ValueError("psi is defined for s >= 1 and t >= 1")
    tt = t**alpha
    w = s**-alpha
    # the s <= t branch simplified by hand: T*w cancels exactly
    out = np.where(s <= t, (0.5 - w) / tt, tt * w - w / tt - 0.5 + 0.5 / tt)
    return out[()] if out.ndim == 0 else out


def psi_limit_at_infinity(t, alpha):
    """``lim_{s->inf} psi(s; t)``, used for tail sign checks."""
    return -0.5 + 0.5 / t**alpha
