"""Array-backed sum tree for proportional sampling with point updates.

Not thread-safe: callers must serialize mutation.
"""
import numpy as np

from .errors import IndexOutOfRange, NegativeWeight, ZeroTotal


class SumTree:
    """Binary sum tree over ``n`` nonnegative leaf weights.

    Storage is a flat array of size ``2 * cap`` where ``cap`` is ``n``
    rounded up to a power of two; node ``k`` has children ``2k`` and
    ``2k + 1`` and leaves live at ``cap .. cap + n - 1``. Padding leaves are
    zero and therefore never sampled.

    Every internal node is recomputed as ``left + right`` whenever a leaf
    below it changes, so the stored sums never accumulate drift and agree
    bitwise with a fresh :meth:`build` of the same leaves.
    """

    def __init__(self, n):
        if n < 1:
            raise ValueError("SumTree needs at least one leaf")
        self.n = int(n)
        cap = 1
        while cap < self.n:
            cap *= 2
        self._cap = cap
        self._nodes = np.zeros(2 * cap)

    @classmethod
    def build(cls, weights):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty 1-d sequence")
        tree = cls(w.size)
        tree.assign(w)
        return tree

    def assign(self, weights):
        """Replace all leaves at once in O(n)."""
        w = np.asarray(weights, dtype=float)
        if w.shape != (self.n,):
            raise ValueError(f"expected {self.n} weights, got shape {w.shape}")
        if not w.min() >= 0:
            raise NegativeWeight("leaf weights must be nonnegative")
        self._refill(w)

    def _refill(self, w):
        nodes = self._nodes
        cap = self._cap
        nodes[cap:cap + self.n] = w
        nodes[cap + self.n:] = 0.0
        lo = cap
        while lo > 1:
            hi = lo
            lo //= 2
            nodes[lo:hi] = nodes[2 * lo:2 * hi:2] + nodes[2 * lo + 1:2 * hi:2]

    def __len__(self):
        return self.n

    @property
    def total(self):
        return float(self._nodes[1])

    @property
    def leaves(self):
        """Read-only view of the leaf weights."""
        view = self._nodes[self._cap:self._cap + self.n]
        view.flags.writeable = False
        return view

    def get(self, i):
        self._check_index(i)
        return float(self._nodes[self._cap + i])

    def set_leaf(self, i, w):
        self._check_index(i)
        w = float(w)
        if not w >= 0:
            raise NegativeWeight(f"weight {w!r} is negative")
        nodes = self._nodes
        k = self._cap + i
        nodes[k] = w
        k //= 2
        while k >= 1:
            nodes[k] = nodes[2 * k] + nodes[2 * k + 1]
            k //= 2

    def sample(self, u):
        """Inverse-CDF lookup of ``u * total``.

        Returns the unique ``i`` with ``prefix(i-1) <= u*total < prefix(i)``
        (leaves in left-to-right order, half-open intervals).
        """
        nodes = self._nodes
        total = nodes[1]
        if not total > 0:
            raise ZeroTotal("cannot sample from a tree with zero total weight")
        target = u * total
        k = 1
        cap = self._cap
        while k < cap:
            left = 2 * k
            lw = nodes[left]
            if target < lw:
                k = left
            elif nodes[left + 1] > 0:
                target -= lw
                k = left + 1
            else:
                # rounding pushed the target past the last positive leaf;
                # the left subtree must hold all of this node's mass
                k = left
        return k - cap

    def leaf_prob(self, i):
        self._check_index(i)
        total = self._nodes[1]
        if not total > 0:
            raise ZeroTotal("leaf probability undefined for zero total weight")
        return float(self._nodes[self._cap + i] / total)

    def probabilities(self):
        total = self._nodes[1]
        if not total > 0:
            raise ZeroTotal("probabilities undefined for zero total weight")
        return self._nodes[self._cap:self._cap + self.n] / total

    def _check_index(self, i):
        if not 0 <= i < self.n:
            raise IndexOutOfRange(f"leaf {i} outside [0, {self.n})")
