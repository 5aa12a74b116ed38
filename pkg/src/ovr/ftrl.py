"""Full-information FTRL sampler with the ``gamma * sum 1/p_i`` regularizer.

The FTRL iterate has the closed form ``p_t(i) ∝ sqrt(cum_i + gamma)`` where
``cum_i`` is the sum of squared losses seen so far for index ``i``.
"""
import math

import numpy as np

from .errors import DimensionMismatch, LossBoundViolated, NegativeLoss, NonPositiveGamma
from .sumtree import SumTree
from .tickets import SampleTicket

# slack so that a loss of exactly sqrt(L) passes despite rounding of its square
BOUND_RTOL = 1.0 + 1e-12


class FtrlSampler:
    """FTRL over second-moment costs, observing the whole loss vector each round.

    ``bound`` is the cap ``L`` on squared losses. ``gamma`` defaults to
    ``bound``. In strict mode a loss with ``loss**2 > bound`` raises; in
    lenient mode the stored square is clamped at ``bound`` and
    ``violations`` is incremented.
    """

    full_information = True

    def __init__(self, n, gamma=None, bound=None, strict=True):
        if n < 1:
            raise ValueError("n must be at least 1")
        if gamma is None:
            if bound is None:
                raise NonPositiveGamma("either gamma or the loss bound must be given")
            gamma = bound
        gamma = float(gamma)
        if not gamma > 0 or not math.isfinite(gamma):
            raise NonPositiveGamma(f"gamma must be positive, got {gamma!r}")
        self.n = int(n)
        self.gamma = gamma
        self.bound = None if bound is None else float(bound)
        self.strict = strict
        self.violations = 0
        self.rounds = 0
        self.cum = np.zeros(self.n)
        self.tree = SumTree.build(np.full(self.n, math.sqrt(gamma)))
        # above this many changed leaves one O(n) rebuild beats per-leaf updates
        self._dense_threshold = self.n / max(math.log2(self.n), 1.0)

    def distribution(self):
        return self.tree.probabilities()

    def sample(self, u):
        i = self.tree.sample(u)
        return SampleTicket(i, self.tree.leaf_prob(i), self.rounds)

    def draw(self, rng):
        return self.sample(rng.random())

    def observe(self, losses):
        losses = np.asarray(losses, dtype=float)
        if losses.shape != (self.n,):
            raise DimensionMismatch(f"expected {self.n} losses, got shape {losses.shape}")
        if not losses.min() >= 0:
            raise NegativeLoss("losses must be nonnegative")
        sq = losses * losses
        if self.bound is not None and sq.max() > self.bound * BOUND_RTOL:
            if self.strict:
                raise LossBoundViolated(f"squared loss {sq.max()!r} exceeds bound {self.bound!r}")
            self.violations += int((sq > self.bound * BOUND_RTOL).sum())
            sq = np.minimum(sq, self.bound)
        self.cum += sq
        self.rounds += 1
        changed = sq.nonzero()[0]
        if len(changed) > self._dense_threshold:
            self.tree._refill(np.sqrt(self.cum + self.gamma))
        else:
            for i in changed:
                self.tree.set_leaf(i, math.sqrt(self.cum[i] + self.gamma))
