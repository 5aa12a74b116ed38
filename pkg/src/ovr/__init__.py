"""Online variance reduction by adaptive importance sampling."""

__version__ = "0.1.0"

from .baselines import FixedSampler, UniformSampler
from .ftrl import FtrlSampler
from .simplex import (best_fixed_distribution, best_fixed_value, restricted_best_fixed,
                      second_moment_cost)
from .sumtree import SumTree
from .tickets import SampleTicket
from .vrb import DoublingVrb, VrbSampler, theta_for_horizon

__all__ = [
    "DoublingVrb",
    "FixedSampler",
    "FtrlSampler",
    "SampleTicket",
    "SumTree",
    "UniformSampler",
    "VrbSampler",
    "best_fixed_distribution",
    "best_fixed_value",
    "restricted_best_fixed",
    "second_moment_cost",
    "theta_for_horizon",
]
