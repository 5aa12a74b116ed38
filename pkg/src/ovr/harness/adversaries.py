"""Loss-sequence generators playing against a sampler.

Every adversary emits loss vectors with ``loss_i**2 <= L_i``. Oblivious
adversaries never look at the player and can generate a whole episode up
front with :meth:`Adversary.loss_matrix`; the spiteful one reads the
distribution the player published for the current round (but not its draw).
"""
import numpy as np

KINDS = ("iid-fixed", "iid-heavy", "piecewise-shift", "spiteful", "converging")


class Adversary:
    kind = None
    oblivious = True

    def __init__(self, bounds):
        self.bounds = np.asarray(bounds, dtype=float)
        self.n = self.bounds.size
        self.roots = np.sqrt(self.bounds)

    @property
    def name(self):
        return self.kind

    def loss_matrix(self, T, rng):
        """All ``T`` loss vectors for an oblivious adversary, shape ``(T, n)``."""
        raise NotImplementedError

    def losses(self, t, history, rng):
        """Loss vector for round ``t`` (1-based) given the public history."""
        raise NotImplementedError


class IidAdversary(Adversary):
    """Independent rounds: ``loss_t(i) = scale_i * U_t(i)``.

    ``law`` picks ``U``: ``"uniform"`` on [0, 1] or ``"bernoulli"`` with
    success probability ``q``.
    """

    kind = "iid-fixed"

    def __init__(self, scales, bounds, law="uniform", q=0.5, name=None):
        super().__init__(bounds)
        self.scales = np.asarray(scales, dtype=float)
        if self.scales.shape != (self.n,) or np.any(self.scales < 0):
            raise ValueError("scales must be n nonnegative values")
        if np.any(self.scales > self.roots * (1 + 1e-12)):
            raise ValueError("scales exceed sqrt of the loss bounds")
        if law not in ("uniform", "bernoulli"):
            raise ValueError(f"unknown law {law!r}")
        self.law = law
        self.q = q
        self._name = name or self.kind

    @property
    def name(self):
        return self._name

    def _noise(self, shape, rng):
        u = rng.random(shape)
        if self.law == "bernoulli":
            return (u < self.q).astype(float)
        return u

    def loss_matrix(self, T, rng):
        return self.scales * self._noise((T, self.n), rng)

    def losses(self, t, history, rng):
        return self.scales * self._noise(self.n, rng)


class PiecewiseShiftAdversary(Adversary):
    """i.i.d. within segments; the per-index scales are re-permuted at each shift.

    ``shifts`` lists the (1-based) rounds where a new segment starts.
    """

    kind = "piecewise-shift"

    def __init__(self, scales, bounds, shifts, perm_seed=0):
        super().__init__(bounds)
        self.scales = np.asarray(scales, dtype=float)
        if np.any(self.scales > self.roots.min() * (1 + 1e-12)):
            raise ValueError("permuted scales must respect every bound")
        self.shifts = sorted(int(s) for s in shifts)
        prng = np.random.default_rng(perm_seed)
        self._perms = [np.arange(self.n)] + [prng.permutation(self.n) for _ in self.shifts]

    def _segment(self, t):
        return int(np.searchsorted(self.shifts, t, side="right"))

    def scales_at(self, t):
        return self.scales[self._perms[self._segment(t)]]

    def loss_matrix(self, T, rng):
        u = rng.random((T, self.n))
        seg = np.searchsorted(self.shifts, np.arange(1, T + 1), side="right")
        table = np.stack([self.scales[p] for p in self._perms])
        return table[seg] * u

    def losses(self, t, history, rng):
        return self.scales_at(t) * rng.random(self.n)


class SpitefulAdversary(Adversary):
    """Puts the maximal loss ``sqrt(L_i)`` on the least likely index, zero elsewhere.

    Ties go to the lowest index. Non-oblivious: reads the current published
    distribution.
    """

    kind = "spiteful"
    oblivious = False

    def losses(self, t, history, rng):
        i = int(np.argmin(history.distribution))
        out = np.zeros(self.n)
        out[i] = self.roots[i]
        return out


class ConvergingAdversary(Adversary):
    """Losses settling to per-index limits: ``limit_i + s_t(i) * decay_i / sqrt(t)``.

    ``s_t(i)`` is +1 with probability ``p_up`` and -1 otherwise. With the
    default ``p_up = 1`` the average loss never drops below its limit, so
    the averaging assumption of the regret-vs-ideal comparison holds.
    """

    kind = "converging"

    def __init__(self, limits, decay, bounds, p_up=1.0):
        super().__init__(bounds)
        self.limits = np.asarray(limits, dtype=float)
        self.decay = np.asarray(decay, dtype=float)
        if np.any(self.limits - self.decay < 0):
            raise ValueError("decay larger than limit would produce negative losses")
        if np.any(self.limits + self.decay > self.roots * (1 + 1e-12)):
            raise ValueError("limit + decay exceeds sqrt of the loss bound")
        self.p_up = p_up

    def _signs(self, shape, rng):
        if self.p_up >= 1.0:
            return np.ones(shape)
        return np.where(rng.random(shape) < self.p_up, 1.0, -1.0)

    def loss_matrix(self, T, rng):
        t = np.arange(1, T + 1, dtype=float)[:, None]
        return self.limits + self._signs((T, self.n), rng) * self.decay / np.sqrt(t)

    def losses(self, t, history, rng):
        return self.limits + self._signs(self.n, rng) * self.decay / np.sqrt(t)


def make_adversary(kind, n, L=1.0, seed=0, **params):
    """Build an adversary of ``kind`` whose fixed parameters derive from ``seed``.

    ``L`` is a scalar or per-index bound on squared losses.
    """
    bounds = np.broadcast_to(np.asarray(L, dtype=float), (n,)).copy()
    roots = np.sqrt(bounds)
    prng = np.random.default_rng([seed, n, KINDS.index(kind) if kind in KINDS else 99])
    if kind == "iid-fixed":
        scales = roots * prng.uniform(0.2, 1.0, n)
        return IidAdversary(scales, bounds, law=params.get("law", "uniform"))
    if kind == "iid-heavy":
        # Pareto magnitudes with median 0.3*sqrt(L), clipped at the bound:
        # a few indices carry most of the loss
        x = prng.pareto(params.get("alpha", 1.0), n) + 1.0
        scales = roots * np.minimum(0.3 * x / np.median(x), 1.0)
        return IidAdversary(scales, bounds, law=params.get("law", "uniform"), name="iid-heavy")
    if kind == "piecewise-shift":
        period = int(params.get("period", 250))
        horizon = int(params.get("horizon", 10 ** 6))
        scales = roots.min() * prng.uniform(0.05, 1.0, n)
        shifts = list(range(period + 1, horizon + 1, period))
        return PiecewiseShiftAdversary(scales, bounds, shifts, perm_seed=int(prng.integers(2 ** 31)))
    if kind == "spiteful":
        return SpitefulAdversary(bounds)
    if kind == "converging":
        limits = roots * prng.uniform(0.2, 0.7, n)
        decay = np.minimum(limits, roots - limits) * prng.uniform(0.1, 1.0, n)
        return ConvergingAdversary(limits, decay, bounds, p_up=params.get("p_up", 1.0))
    raise ValueError(f"unknown adversary kind {kind!r}; choose from {KINDS}")
