"""Closed-form second-moment costs and best-in-hindsight oracles on the simplex.

Cumulative squared losses are passed around as plain 1-d arrays ``totals``
where ``totals[i]`` is the running sum of squared losses of index ``i``.
Oracle values are unnormalized (raw ``sum a_i / p_i``); the 1/n^2 factor is
applied only where a regret is reported.
"""
import numpy as np

from .errors import InvalidPMin, PositiveLossZeroProb

SIMPLEX_ATOL = 1e-12


def _as_nonneg(values, name="values"):
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d sequence")
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite and nonnegative")
    return arr


def check_distribution(p, p_min=0.0, atol=SIMPLEX_ATOL):
    """Validate that ``p`` lies on the simplex (optionally with a mass floor)."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("distribution must be a non-empty 1-d sequence")
    if np.any(p < p_min - atol):
        raise ValueError("distribution entry below its floor")
    if abs(p.sum() - 1.0) > atol:
        raise ValueError(f"distribution sums to {p.sum()!r}, not 1")
    return p


def second_moment_cost(p, losses):
    """Normalized second moment ``(1/n^2) sum_i losses_i^2 / p_i``.

    An index with zero loss contributes nothing, even where ``p_i == 0``.
    """
    p = np.asarray(p, dtype=float)
    losses = np.asarray(losses, dtype=float)
    if p.shape != losses.shape:
        raise ValueError("distribution and loss vector lengths differ")
    sq = losses * losses
    active = sq > 0
    if np.any(active & (p <= 0)):
        raise PositiveLossZeroProb("positive loss on an index with zero probability")
    n = p.size
    return float(np.sum(sq[active] / p[active])) / (n * n)


def best_fixed_value(totals):
    """``min_p sum_i totals_i / p_i`` over the simplex, i.e. ``(sum sqrt(totals))^2``."""
    a = _as_nonneg(totals, "totals")
    return float(np.sum(np.sqrt(a))) ** 2


def best_fixed_distribution(totals):
    """The minimizer ``p_i ∝ sqrt(totals_i)``; uniform when every total is zero."""
    a = _as_nonneg(totals, "totals")
    roots = np.sqrt(a)
    s = roots.sum()
    if s == 0:
        return np.full(a.size, 1.0 / a.size)
    return roots / s


def restricted_best_fixed(totals, p_min):
    """Minimize ``sum_i totals_i / p_i`` over distributions with ``p_i >= p_min``.

    Water-filling on the KKT conditions: indices are visited by decreasing
    ``sqrt(totals_i)``; the smallest ones are clamped to ``p_min`` until the
    remaining ones satisfy ``sqrt(totals_i) >= sqrt(alpha) * p_min``. A tie
    counts as unclamped (both branches give ``p_i = p_min`` there).

    Returns ``(p, value)``.
    """
    a = _as_nonneg(totals, "totals")
    n = a.size
    p_min = float(p_min)
    if not (0.0 <= p_min <= 1.0 / n) or not np.isfinite(p_min):
        raise InvalidPMin(f"p_min={p_min!r} outside [0, 1/n] for n={n}")

    roots = np.sqrt(a)
    if not np.any(roots > 0):
        return np.full(n, 1.0 / n), 0.0

    order = np.argsort(-roots, kind="stable")
    s_sorted = roots[order]
    prefix = np.cumsum(s_sorted)
    # m = number of unclamped indices (the top m by sqrt(total))
    for m in range(n, 0, -1):
        free_mass = 1.0 - (n - m) * p_min
        if prefix[m - 1] <= 0 or free_mass <= 0:
            continue
        sqrt_alpha = prefix[m - 1] / free_mass
        if s_sorted[m - 1] >= sqrt_alpha * p_min:
            break
    else:  # pragma: no cover - the m=1 candidate always satisfies the test
        raise AssertionError("water-filling found no consistent threshold")

    p = np.full(n, p_min)
    top = order[:m]
    p[top] = roots[top] / sqrt_alpha
    value = sqrt_alpha * float(prefix[m - 1])
    if m < n:
        rest = order[m:]
        tail = a[rest]
        if np.any(tail > 0):
            # p_min > 0 is guaranteed here: with p_min == 0 nothing positive is clamped
            value += float(np.sum(tail)) / p_min
    return p, value
