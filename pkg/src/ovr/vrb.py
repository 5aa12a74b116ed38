"""Variance Reducer Bandit: FTRL on importance-weighted squared losses, mixed with uniform.

Each round the sampler plays

    p_t(i)  ∝ sqrt(w(i) + r_i),      r_i = L_i * n / theta
    p~_t(i) = (1 - theta) * p_t(i) + theta / n

and after observing the loss of the drawn index only, adds
``loss**2 / p~_t(I_t)`` to ``w(I_t)``. Every probability is at least
``theta / n``, which caps each estimated square at ``n * L_i / theta``.
"""
import json
import math

import numpy as np

from .errors import InvalidTheta, LossBoundViolated, NegativeLoss, NonPositiveBound
from .ftrl import BOUND_RTOL
from .sumtree import SumTree
from .tickets import TicketIssuer


def theta_for_horizon(n, T):
    """Mixing coefficient ``(n/T)^(1/3)`` for a known horizon; 1 when ``T < n``."""
    if T < n:
        return 1.0
    return min(1.0, (n / T) ** (1.0 / 3.0))


def _resolve_bounds(n, bounds):
    arr = np.asarray(bounds, dtype=float)
    if arr.ndim == 0:
        arr = np.full(n, float(arr))
    if arr.shape != (n,):
        raise ValueError(f"expected a scalar bound or {n} per-index bounds")
    if not np.all(arr > 0) or not np.all(np.isfinite(arr)):
        raise NonPositiveBound("loss bounds must be positive and finite")
    return arr


class VrbSampler(TicketIssuer):
    """Bandit-feedback importance sampler over ``n`` indices.

    ``bounds`` is either a single ``L`` or per-index ``L_i`` bounding the
    squared losses. Strict mode raises on a violated bound; lenient mode
    clamps the square at ``L_i`` and counts the event in ``violations``.

    Tickets from :meth:`sample` must be passed back to :meth:`update`
    exactly once. Several tickets may be outstanding at a time (mini-batch
    use); each is weighted by the probability in force when it was drawn.
    Not thread-safe.
    """

    full_information = False

    def __init__(self, n, theta, bounds=1.0, strict=True):
        if n < 1:
            raise ValueError("n must be at least 1")
        theta = float(theta)
        if not 0 < theta <= 1:
            raise InvalidTheta(f"theta must lie in (0, 1], got {theta!r}")
        self.n = int(n)
        self.theta = theta
        self.bounds = _resolve_bounds(self.n, bounds)
        self.strict = strict
        self.reg = self.bounds * self.n / theta
        self.w = np.zeros(self.n)
        self.t = 0
        self.violations = 0
        self.tree = SumTree.build(np.sqrt(self.reg))
        self._init_tickets()

    @classmethod
    def for_horizon(cls, n, T, bounds=1.0, strict=True):
        return cls(n, theta_for_horizon(n, T), bounds, strict)

    def distribution(self):
        """The mixed sampling distribution ``p~_t``."""
        p = self.tree.probabilities()
        return p + self.theta * (1.0 / self.n - p)

    full_distribution = distribution

    def ftrl_distribution(self):
        """The unmixed FTRL iterate ``p_t``."""
        return self.tree.probabilities()

    def probability(self, i):
        # p + theta (1/n - p) equals (1 - theta) p + theta/n and is exact at p = 1/n
        p = self.tree.leaf_prob(i)
        return p + self.theta * (1.0 / self.n - p)

    def sample(self, u_mix, u_tree):
        """Two-stage draw: uniform with probability theta, else from the tree."""
        if u_mix < self.theta:
            i = min(int(u_tree * self.n), self.n - 1)
        else:
            i = self.tree.sample(u_tree)
        return self._issue(i, self.probability(i), self.t)

    def draw(self, rng):
        return self.sample(rng.random(), rng.random())

    def estimated_square(self, ticket, loss):
        return loss * loss / ticket.prob

    def importance_weight(self, ticket):
        """Reweighting factor ``1 / (n p~(I_t))`` making estimates unbiased."""
        return 1.0 / (self.n * ticket.prob)

    def update(self, ticket, loss):
        loss = float(loss)
        if not loss >= 0:
            raise NegativeLoss(f"loss must be nonnegative, got {loss!r}")
        i = ticket.index
        sq = loss * loss
        bound = self.bounds[i]
        if sq > bound * BOUND_RTOL:
            if self.strict:
                raise LossBoundViolated(f"squared loss {sq!r} exceeds L_{i}={bound!r}")
            self.violations += 1
            sq = bound
        self._consume(ticket)
        if sq > 0:
            self.w[i] += sq / ticket.prob
            self.tree.set_leaf(i, math.sqrt(self.w[i] + self.reg[i]))
        self.t += 1

    def to_dict(self):
        return {
            "n": self.n,
            "theta": self.theta,
            "bounds": self.bounds.tolist(),
            "w": self.w.tolist(),
            "t": self.t,
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data, strict=True):
        state = cls(int(data["n"]), data["theta"], data["bounds"], strict)
        state.w = np.asarray(data["w"], dtype=float).copy()
        if state.w.shape != (state.n,) or np.any(state.w < 0):
            raise ValueError("snapshot 'w' must hold n nonnegative values")
        state.t = int(data["t"])
        state.tree.assign(np.sqrt(state.w + state.reg))
        return state

    @classmethod
    def from_json(cls, text, strict=True):
        return cls.from_dict(json.loads(text), strict)


class DoublingVrb:
    """Anytime VRB: epochs of length ``n * 2**k`` with ``theta_k = (n / T_k)^(1/3)``.

    Each epoch starts from a fresh :class:`VrbSampler` (``w`` reset to
    zero). Epochs begin after ``0, n, 3n, 7n, ...`` updates. A boundary
    waits until every outstanding ticket of the old epoch is fed back.
    """

    full_information = False

    def __init__(self, n, bounds=1.0, strict=True):
        self.n = int(n)
        self._bounds = bounds
        self.strict = strict
        self.epoch = 0
        self.t = 0
        self._epoch_rounds = 0
        self._violations_done = 0
        self.current = self._fresh()

    @property
    def horizon(self):
        return self.n * 2 ** self.epoch

    @property
    def theta(self):
        return self.current.theta

    @property
    def violations(self):
        return self._violations_done + self.current.violations

    def _fresh(self):
        return VrbSampler(self.n, theta_for_horizon(self.n, self.n * 2 ** self.epoch),
                          self._bounds, self.strict)

    def _maybe_advance(self):
        if self._epoch_rounds >= self.horizon and self.current.outstanding == 0:
            self._violations_done += self.current.violations
            self.epoch += 1
            self._epoch_rounds = 0
            self.current = self._fresh()

    def distribution(self):
        self._maybe_advance()
        return self.current.distribution()

    full_distribution = distribution

    def probability(self, i):
        self._maybe_advance()
        return self.current.probability(i)

    def sample(self, u_mix, u_tree):
        self._maybe_advance()
        return self.current.sample(u_mix, u_tree)

    def draw(self, rng):
        return self.sample(rng.random(), rng.random())

    def estimated_square(self, ticket, loss):
        return loss * loss / ticket.prob

    def importance_weight(self, ticket):
        return 1.0 / (self.n * ticket.prob)

    def update(self, ticket, loss):
        self.current.update(ticket, loss)
        self._epoch_rounds += 1
        self.t += 1
