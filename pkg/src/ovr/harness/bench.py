"""Grid runner: (method, adversary, n, T, seed) cells -> result rows."""
import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ..baselines import UniformSampler
from ..errors import HorizonTooShort
from ..ftrl import FtrlSampler
from ..vrb import DoublingVrb, VrbSampler, theta_for_horizon
from .adversaries import make_adversary
from .checks import theorem_bound
from .episode import realized_regret, run_episode

METHODS = ("ftrl", "vrb", "vrb-doubling", "uniform")
CURVE_POINTS = 100


def make_sampler(method, n, T, L=1.0, gamma=None, theta=None, strict=True):
    if method == "ftrl":
        return FtrlSampler(n, gamma=L if gamma is None else gamma, bound=L, strict=strict)
    if method == "vrb":
        th = theta_for_horizon(n, T) if theta is None else theta
        return VrbSampler(n, th, L, strict)
    if method == "vrb-doubling":
        return DoublingVrb(n, L, strict)
    if method == "uniform":
        return UniformSampler(n)
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


def cell_bound(method, n, T, L):
    if method == "ftrl":
        return theorem_bound("full_info", n, T, L)
    if method in ("vrb", "vrb-doubling"):
        try:
            return theorem_bound("vrb", n, T, L)
        except HorizonTooShort:
            return None
    return None


def curve_rounds(T, points=CURVE_POINTS):
    return np.unique(np.linspace(1, T, min(T, points)).round().astype(int))


def run_cell(method, kind, n, T, seed, L=1.0, gamma=None, theta=None,
             master_seed=0, strict=True):
    """One episode; ``seed`` doubles as the episode index under ``master_seed``."""
    adversary = make_adversary(kind, n, L, seed=master_seed, horizon=T)
    sampler = make_sampler(method, n, T, L, gamma, theta, strict)
    trace = run_episode(sampler, adversary, T, master_seed, seed)
    regret = realized_regret(trace)
    bound = cell_bound(method, n, T, L)
    rounds = curve_rounds(T)
    cum = np.cumsum(trace.round_costs())
    return {
        "method": method,
        "adversary": adversary.name,
        "n": n,
        "T": T,
        "seed": seed,
        "regret": regret,
        "bound": bound,
        "ratio": regret / bound if bound else None,
        "cumcost": float(cum[-1]),
        "curve_rounds": rounds.tolist(),
        "curve_cost": cum[rounds - 1].tolist(),
    }


def _run_cell_args(args):
    return run_cell(*args[:5], **args[5])


def run_grid(methods, kinds, ns, Ts, seeds, L=1.0, gamma=None, theta=None,
             master_seed=0, strict=True, jobs=1):
    """Run every cell; rows come back in grid order regardless of ``jobs``."""
    cells = []
    for method in methods:
        for kind in kinds:
            for n in ns:
                for T in Ts:
                    for seed in seeds:
                        cells.append((method, kind, n, T, seed,
                                      dict(L=L, gamma=gamma, theta=theta,
                                           master_seed=master_seed, strict=strict)))
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_cell_args, cells, chunksize=max(1, math.ceil(len(cells) / (4 * jobs)))))
    return [_run_cell_args(c) for c in cells]
