"""Quick property checks run by ``ovr property-suite``.

Each check returns ``(passed, detail)``; the suite finishes in seconds and is
a smoke-level subset of the pytest acceptance suite.
"""
import numpy as np

from .harness.adversaries import make_adversary
from .harness.checks import check_lemma1, check_sum_constant
from .harness.episode import run_episode
from .harness.oracles import linear_scan_sample, numeric_simplex_min
from .simplex import best_fixed_value, restricted_best_fixed
from .sumtree import SumTree
from .vrb import VrbSampler


def _sumtree_exactness(rng, pairs=2000):
    mismatches = 0
    for _ in range(pairs):
        n = int(rng.integers(1, 40))
        w = rng.random(n) * (rng.random(n) < 0.8)
        if w.sum() == 0:
            w[0] = 1.0
        u = rng.random()
        if SumTree.build(w).sample(u) != linear_scan_sample(w, u):
            mismatches += 1
    return mismatches == 0, f"{mismatches} mismatches in {pairs} draws"


def _oracle_equivalence(rng, instances=50):
    worst = 0.0
    gap_ok = True
    for _ in range(instances):
        n = int(rng.integers(1, 7))
        a = rng.uniform(0, 10, n)
        p_min = rng.uniform(0, 1 / (2 * n))
        v = best_fixed_value(a)
        _, vn = numeric_simplex_min(a)
        _, vr = restricted_best_fixed(a, p_min)
        _, vrn = numeric_simplex_min(a, p_min)
        worst = max(worst, abs(v - vn) / max(v, 1e-300), abs(vr - vrn) / max(vr, 1e-300))
        gap_ok &= vr - v <= 6 * n * p_min * v * (1 + 1e-9)
    return worst <= 1e-6 and gap_ok, f"max relative error {worst:.2e}, gap bound held={gap_ok}"


def _sum_constant(rng, sequences=200):
    worst = max(check_sum_constant(rng.random(int(rng.integers(1, 5000))) ** rng.uniform(0.5, 4))
                for _ in range(sequences))
    return worst <= 44, f"max sum {worst:.4f} over {sequences} sequences"


def _unbiasedness(rng, draws=20000):
    n = 6
    sampler = VrbSampler(n, 0.3, 1.0)
    for _ in range(50):
        tk = sampler.draw(rng)
        sampler.update(tk, rng.random())
    losses = rng.random(n)
    est = np.zeros(n)
    est_sq = np.zeros(n)
    for _ in range(draws):
        tk = sampler.draw(rng)
        v = sampler.estimated_square(tk, losses[tk.index])
        est[tk.index] += v
        est_sq[tk.index] += v * v
        sampler._consume(tk)
    mean = est / draws
    var = est_sq / draws - mean ** 2
    z = np.abs(mean - losses ** 2) / np.sqrt(var / draws)
    return bool(np.all(z < 4)), f"max |z| = {z.max():.2f}"


def _lemma1(seed, episodes=10):
    worst = -np.inf
    for e in range(episodes):
        adv = make_adversary("converging", 8, 1.0, seed=seed + e)
        trace = run_episode(VrbSampler.for_horizon(8, 500), adv, 500, seed, e)
        rep = check_lemma1(trace, adv.limits)
        worst = max(worst, rep.lhs - rep.rhs)
    return worst <= 0, f"max lhs - rhs = {worst:.3e}"


def run_property_suite(seed=0):
    rng = np.random.default_rng(seed)
    checks = {
        "sumtree_exactness": lambda: _sumtree_exactness(rng),
        "oracle_equivalence": lambda: _oracle_equivalence(rng),
        "sum_constant_44": lambda: _sum_constant(rng),
        "estimate_unbiasedness": lambda: _unbiasedness(rng),
        "lemma1_inequality": lambda: _lemma1(seed),
    }
    report = {}
    for name, fn in checks.items():
        passed, detail = fn()
        report[name] = {"passed": bool(passed), "detail": detail}
    return report
