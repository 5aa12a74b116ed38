"""Slow reference computations used to cross-check the fast paths.

Nothing here shares code with the closed forms or the sum tree.
"""
import warnings

import numpy as np
from scipy.optimize import minimize

PROB_FLOOR = 1e-12


def linear_scan_sample(weights, u):
    """Inverse CDF by a left-to-right prefix scan over ``weights``."""
    total = 0.0
    for w in weights:
        total += w
    target = u * total
    acc = 0.0
    last_positive = None
    for i, w in enumerate(weights):
        if w > 0:
            last_positive = i
        acc += w
        if target < acc and w > 0:
            return i
    return last_positive


def numeric_simplex_min(a, p_min=0.0):
    """Minimize ``sum a_i / p_i`` over ``{p : sum p = 1, p_i >= p_min}`` with SLSQP.

    Returns ``(p, value)``; coordinates are kept above a tiny floor so the
    objective stays finite.
    """
    a = np.asarray(a, dtype=float)
    n = a.size
    if not np.any(a > 0):
        return np.full(n, 1.0 / n), 0.0
    scale = a.max()
    b = a / scale
    lo = max(p_min, PROB_FLOOR)

    def f(p):
        return float(np.sum(b / p))

    def grad(p):
        return -b / (p * p)

    p0 = np.full(n, 1.0 / n)
    with warnings.catch_warnings():
        # SLSQP clips its own trial points to the bounds and says so
        warnings.simplefilter("ignore", RuntimeWarning)
        res = minimize(f, p0, jac=grad, method="SLSQP",
                       bounds=[(lo, 1.0)] * n,
                       constraints=[{"type": "eq", "fun": lambda p: p.sum() - 1.0,
                                     "jac": lambda p: np.ones(n)}],
                       options={"ftol": 1e-15, "maxiter": 1000})
    p = np.clip(res.x, lo, 1.0)
    p /= p.sum()
    return p, float(np.sum(a / p))
