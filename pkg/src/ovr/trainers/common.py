"""Shared trainer configuration and sampler construction."""
from dataclasses import asdict, dataclass

import numpy as np

from ..baselines import UniformSampler
from ..vrb import DoublingVrb, VrbSampler, theta_for_horizon

OPTIMIZERS = ("adagrad", "sgd-strongly-convex")
SAMPLERS = ("uniform", "vrb", "vrb-doubling")


@dataclass
class TrainerConfig:
    optimizer: str = "adagrad"
    D: float = 20.0          # AdaGrad diameter; iterates are projected on the ball of radius D/2
    mu: float = 0.01         # strong-convexity / l2 weight for sgd-strongly-convex
    batch: int = 1
    steps: int = 1000
    sampler: str = "vrb"
    theta: float = None      # None: horizon rule for logreg, 0.5 for k-means
    strict: bool = False
    eval_every: int = 100
    weighted_counts: bool = False
    test_fraction: float = 0.2
    split_seed: int = 0
    init_seed: int = 0

    def __post_init__(self):
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"optimizer must be one of {OPTIMIZERS}")
        if self.sampler not in SAMPLERS:
            raise ValueError(f"sampler must be one of {SAMPLERS}")
        if self.D <= 0 or self.mu <= 0:
            raise ValueError("step parameters D and mu must be positive")
        if self.batch < 1 or self.steps < 1 or self.eval_every < 1:
            raise ValueError("batch, steps and eval_every must be at least 1")
        if self.theta is not None and not 0 < self.theta <= 1:
            raise ValueError("theta must lie in (0, 1]")

    def to_dict(self):
        return asdict(self)


def build_sampler(config, n, bounds, default_theta=None):
    """Sampler named by ``config.sampler``; ``bounds`` are per-index squared-loss caps."""
    if config.sampler == "uniform":
        return UniformSampler(n)
    if config.sampler == "vrb-doubling":
        return DoublingVrb(n, bounds, strict=config.strict)
    theta = config.theta
    if theta is None:
        theta = default_theta if default_theta is not None else theta_for_horizon(
            n, config.steps * config.batch)
    return VrbSampler(n, theta, bounds, strict=config.strict)


def train_test_split(n, test_fraction, seed):
    perm = np.random.default_rng(seed).permutation(n)
    n_test = int(round(test_fraction * n))
    return np.sort(perm[n_test:]), np.sort(perm[:n_test])
