"""Non-adaptive samplers used as reference points."""
import numpy as np

from .simplex import check_distribution
from .sumtree import SumTree
from .tickets import TicketIssuer


class FixedSampler(TicketIssuer):
    """Samples from a fixed distribution and ignores feedback."""

    full_information = False

    def __init__(self, probs):
        self._p = check_distribution(probs, atol=1e-9).copy()
        self.n = self._p.size
        self.t = 0
        self.violations = 0
        self._tree = SumTree.build(self._p)
        self._init_tickets()

    def distribution(self):
        return self._p.copy()

    full_distribution = distribution

    def probability(self, i):
        return float(self._p[i])

    def sample(self, u_mix, u_tree):
        i = self._tree.sample(u_tree)
        return self._issue(i, self._p[i], self.t)

    def draw(self, rng):
        return self.sample(rng.random(), rng.random())

    def estimated_square(self, ticket, loss):
        return loss * loss / ticket.prob

    def importance_weight(self, ticket):
        return 1.0 / (self.n * ticket.prob)

    def update(self, ticket, loss):
        self._consume(ticket)
        self.t += 1


class UniformSampler(FixedSampler):
    """Plain uniform subsampling; every importance weight equals 1."""

    def __init__(self, n):
        super().__init__(np.full(int(n), 1.0 / int(n)))

    def sample(self, u_mix, u_tree):
        i = min(int(u_tree * self.n), self.n - 1)
        return self._issue(i, 1.0 / self.n, self.t)

    def importance_weight(self, ticket):
        return 1.0
