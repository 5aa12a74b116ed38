"""Running the online variance-reduction protocol and measuring regret."""
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatch, NonObliviousAdversary
from ..simplex import best_fixed_value


def episode_streams(master_seed, episode):
    """Independent generators for one episode: ``(sampler_rng, adversary_rng)``.

    Splitting rule: ``SeedSequence([master_seed, episode]).spawn(2)``; the
    first child drives the sampler, the second the adversary.
    """
    ss = np.random.SeedSequence([int(master_seed), int(episode)])
    s_seq, a_seq = ss.spawn(2)
    return np.random.default_rng(s_seq), np.random.default_rng(a_seq)


@dataclass
class History:
    """What a non-oblivious adversary may see before choosing round ``t``'s losses."""

    distribution: np.ndarray = None
    tickets: list = field(default_factory=list)


@dataclass
class EpisodeTrace:
    """Per-round record of one episode.

    ``losses`` holds the full loss vectors (known to the simulator even under
    bandit feedback) and ``dists`` the distribution the player sampled from.
    """

    losses: np.ndarray   # (T, n)
    dists: np.ndarray    # (T, n)
    indices: np.ndarray  # (T,)
    observed: np.ndarray  # (T,) loss of the drawn index
    bounds: np.ndarray   # (n,)

    @property
    def T(self):
        return self.losses.shape[0]

    @property
    def n(self):
        return self.losses.shape[1]

    def round_costs(self):
        """Normalized per-round costs ``f_t(p_t) / n^2``."""
        sq = self.losses ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(sq > 0, sq / self.dists, 0.0)
        return ratio.sum(axis=1) / self.n ** 2

    def cumulative_squares(self):
        return (self.losses ** 2).sum(axis=0)


def run_episode(sampler, adversary, T, seed, episode=0):
    """Play ``T`` rounds of ``sampler`` against ``adversary``.

    Bandit samplers only receive the drawn index's loss; full-information
    samplers receive the whole vector. Deterministic given ``(seed, episode)``.
    """
    if sampler.n != adversary.n:
        raise DimensionMismatch(f"sampler has n={sampler.n}, adversary n={adversary.n}")
    if T < 1:
        raise ValueError("T must be at least 1")
    s_rng, a_rng = episode_streams(seed, episode)
    n = sampler.n
    dists = np.empty((T, n))
    indices = np.empty(T, dtype=np.int64)
    if adversary.oblivious:
        losses = adversary.loss_matrix(T, a_rng)
        history = None
    else:
        losses = np.empty((T, n))
        history = History()

    full_info = sampler.full_information
    for t in range(T):
        p = sampler.distribution()
        dists[t] = p
        if history is not None:
            history.distribution = dists[t]
            losses[t] = adversary.losses(t + 1, history, a_rng)
        row = losses[t]
        ticket = sampler.draw(s_rng)
        i = ticket.index
        indices[t] = i
        if full_info:
            sampler.observe(row)
        else:
            sampler.update(ticket, row[i])
        if history is not None:
            history.tickets.append(ticket)
    observed = losses[np.arange(T), indices]
    return EpisodeTrace(losses, dists, indices, observed, adversary.bounds.copy())


def realized_regret(trace):
    """``(1/n^2) (sum_t f_t(p_t) - min_p sum_t f_t(p))`` against the exact oracle.

    Not clipped at zero: a lucky bandit run can beat the best fixed distribution.
    """
    player = float(trace.round_costs().sum())
    best = best_fixed_value(trace.cumulative_squares()) / trace.n ** 2
    return player - best


def mean_stderr(values):
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return float(values.mean()), 0.0
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.size))


def pseudo_regret(sampler_factory, adversary, T, seeds, master_seed=0):
    """Mean realized regret (and its standard error) over ``seeds`` episodes.

    Only defined for oblivious adversaries, where it matches the expected regret.
    """
    if not adversary.oblivious:
        raise NonObliviousAdversary(f"{adversary.name} adapts to the player")
    regrets = [realized_regret(run_episode(sampler_factory(), adversary, T, master_seed, s))
               for s in seeds]
    return mean_stderr(regrets)
