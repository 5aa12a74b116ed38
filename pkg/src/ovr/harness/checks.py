"""Bound checks: regret ceilings, the regret-vs-ideal inequality, the constant-44 sum."""
import math
from dataclasses import dataclass

import numpy as np

from ..errors import HorizonTooShort, LemmaViolation, OutOfRange
from ..simplex import best_fixed_value

SUM_CONSTANT = 44.0


def theorem_bound(kind, n, T, L=1.0):
    """Regret ceiling: ``27 L sqrt(T) + 44 L`` (full information) or ``74 L n^(1/3) T^(2/3)`` (VRB)."""
    if kind == "full_info":
        return 27.0 * L * math.sqrt(T) + 44.0 * L
    if kind == "vrb":
        if T < n:
            raise HorizonTooShort(f"VRB bound needs T >= n (T={T}, n={n})")
        return 74.0 * L * n ** (1.0 / 3.0) * T ** (2.0 / 3.0)
    raise ValueError(f"unknown bound kind {kind!r}")


@dataclass
class Lemma1Report:
    """Both sides of the best-fixed vs per-round-optimum comparison.

    ``lhs`` is the normalized best-fixed cumulative cost; ``rhs`` the sum of
    per-round optimal costs plus the convergence penalty built from
    ``V_T(i) = sum_t (loss_t(i) - limit_i)^2``. The inequality is only
    claimed when ``assumption_holds``.
    """

    V: np.ndarray
    L_star: float
    lhs: float
    rhs: float
    assumption_holds: bool

    @property
    def holds(self):
        return self.lhs <= self.rhs * (1 + 1e-12) + 1e-12

    @property
    def applicable(self):
        return self.assumption_holds


def check_lemma1(losses, limits):
    """Evaluate both sides of the inequality for a ``(T, n)`` loss matrix.

    ``losses`` may also be an :class:`EpisodeTrace`. Raises
    :class:`LemmaViolation` if the assumption holds and ``lhs > rhs``.
    """
    losses = np.asarray(getattr(losses, "losses", losses), dtype=float)
    limits = np.asarray(limits, dtype=float)
    if np.any(losses < 0):
        raise ValueError("losses must be nonnegative")
    T, n = losses.shape
    V = ((losses - limits) ** 2).sum(axis=0)
    L_star = float(limits.mean())
    lhs = best_fixed_value((losses ** 2).sum(axis=0)) / n ** 2
    per_round = float(((losses.sum(axis=1)) ** 2).sum()) / n ** 2
    root_v = float(np.sqrt(V).mean())
    rhs = per_round + 2.0 * math.sqrt(T) * L_star * root_v + root_v ** 2
    running_mean = np.cumsum(losses.mean(axis=1)) / np.arange(1, T + 1)
    assumption = bool(np.all(running_mean >= L_star - 1e-12))
    report = Lemma1Report(V, L_star, lhs, rhs, assumption)
    if assumption and not report.holds:
        raise LemmaViolation(f"lhs {lhs!r} exceeds rhs {rhs!r}")
    return report


def sum_constant_terms(seq):
    a = np.asarray(seq, dtype=float)
    if a.ndim != 1:
        raise ValueError("sequence must be 1-d")
    if np.any(a < 0) or np.any(a > 1) or np.any(np.isnan(a)):
        raise OutOfRange("sequence entries must lie in [0, 1]")
    sq = a * a
    cum = np.cumsum(sq)
    # leading zeros have an empty running sum and are skipped
    live = cum > 0
    # a^4 / S^1.5 written as a * (a^2/S)^1.5 so tiny entries cannot underflow to 0/0
    ratio = np.divide(sq, cum, out=np.zeros_like(sq), where=live)
    return a * ratio ** 1.5


def check_sum_constant(seq):
    """``sum_t a_t^4 / (a_1^2 + ... + a_t^2)^(3/2)`` for ``a_t`` in [0, 1]; provably at most 44."""
    total = float(sum_constant_terms(seq).sum())
    if total > SUM_CONSTANT:
        raise LemmaViolation(f"sum {total!r} exceeds {SUM_CONSTANT}")
    return total
