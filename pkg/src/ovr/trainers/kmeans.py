"""Mini-batch k-Means driven by an importance sampler with per-point bounds.

Per batch: draw ``b`` tickets from the (frozen) sampler distribution, cache
each point's nearest center, apply the per-center ``1/count`` update, then
feed every drawn point's gradient norm ``2 min_q |x - q|`` back to the
sampler. The sampler's distribution therefore moves once per batch.
"""
import numpy as np
from sklearn.cluster import kmeans_plusplus

from ..errors import DimensionMismatch, TooFewPoints
from .common import TrainerConfig, build_sampler, train_test_split
from .logreg import TrainResult

KMEANS_THETA = 0.5
INIT_SUBSAMPLE = 1000
BOUND_FLOOR = 1e-12


CHUNK_ELEMS = 1 << 22


def _sq_dists(X, centers):
    # explicit differences (exact zero for coincident points), chunked over rows
    k, d = centers.shape
    rows = max(1, CHUNK_ELEMS // max(k * d, 1))
    out = np.empty((X.shape[0], k))
    for lo in range(0, X.shape[0], rows):
        diff = X[lo:lo + rows, None, :] - centers[None, :, :]
        out[lo:lo + rows] = np.einsum("ijk,ijk->ij", diff, diff)
    return out


def kmeans_signal(x, centers):
    """Gradient norm of the k-Means cost at ``x``: ``min_q 2 |x - q|``."""
    x = np.asarray(x, dtype=float)
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    if centers.shape[1] != x.shape[-1]:
        raise DimensionMismatch(f"point dimension {x.shape[-1]} vs centers {centers.shape[1]}")
    return float(2.0 * np.sqrt(np.min(((centers - x) ** 2).sum(axis=1))))


def kmeans_cost(X, centers):
    """Mean squared distance to the nearest center."""
    return float(_sq_dists(X, centers).min(axis=1).mean())


def kmeans_bound_estimates(points, rng):
    """``L_i = 4 |x_i - u|^2`` for one uniformly drawn data point ``u``.

    Points coinciding with ``u`` get a small positive floor.
    """
    X = np.asarray(points, dtype=float)
    if X.shape[0] < 2:
        raise TooFewPoints("bound estimation needs at least two points")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    u = X[rng.integers(X.shape[0])]
    L = 4.0 * ((X - u) ** 2).sum(axis=1)
    floor = BOUND_FLOOR * max(float(L.max()), 1.0)
    return np.maximum(L, floor)


def kmeanspp_init(X, k, seed, subsample=INIT_SUBSAMPLE):
    """k-Means++ centers chosen from a random subsample of at most ``subsample`` points."""
    rng = np.random.default_rng(seed)
    m = min(subsample, X.shape[0])
    idx = np.sort(rng.choice(X.shape[0], size=m, replace=False))
    centers, _ = kmeans_plusplus(X[idx], k, random_state=int(rng.integers(2 ** 31)))
    return centers


def train_kmeans(dataset, k, config=None, seed=0, init_centers=None):
    """Mini-batch k-Means on the training split; test cost tracked on the held-out split.

    ``config.steps`` counts batches. With ``config.weighted_counts`` the
    per-center counts accumulate importance weights instead of 1 per point.
    Reported second moment per batch: ``sum_j (weight_j * signal_j)^2``, the
    squared norm of each importance-weighted gradient.
    """
    config = config or TrainerConfig()
    train_idx, test_idx = train_test_split(dataset.n, config.test_fraction, config.split_seed)
    Xtr = dataset.points[train_idx]
    Xte = dataset.points[test_idx] if len(test_idx) else Xtr
    n = Xtr.shape[0]
    if n < k or n < 2:
        raise TooFewPoints(f"need at least k={k} (and 2) training points, have {n}")

    rng = np.random.default_rng(seed)
    bound_rng, draw_rng = rng.spawn(2)
    if init_centers is None:
        centers = kmeanspp_init(Xtr, k, config.init_seed)
    else:
        centers = np.array(init_centers, dtype=float)
        if centers.shape != (k, Xtr.shape[1]):
            raise DimensionMismatch(f"init centers shape {centers.shape}, expected {(k, Xtr.shape[1])}")
    bounds = kmeans_bound_estimates(Xtr, bound_rng)
    sampler = build_sampler(config, n, bounds, default_theta=KMEANS_THETA)

    counts = np.zeros(k)
    steps = config.steps
    b = config.batch
    second = np.empty(steps)
    testcost = np.full(steps, np.nan)
    trainloss = np.full(steps, np.nan)
    indices = np.empty((steps, b), dtype=np.int64)
    for t in range(steps):
        tickets = [sampler.draw(draw_rng) for _ in range(b)]
        idx = np.fromiter((tk.index for tk in tickets), dtype=np.int64, count=b)
        batch = Xtr[idx]
        d2 = _sq_dists(batch, centers)
        nearest = d2.argmin(axis=1)
        signals = 2.0 * np.sqrt(d2[np.arange(b), nearest])
        weights = np.fromiter((sampler.importance_weight(tk) for tk in tickets), dtype=float, count=b)
        trainloss[t] = float(np.mean(weights * d2[np.arange(b), nearest]))
        for j in range(b):
            c = nearest[j]
            inc = weights[j] if config.weighted_counts else 1.0
            counts[c] += inc
            eta = inc / counts[c]
            centers[c] += eta * (batch[j] - centers[c])
        for tk, s in zip(tickets, signals):
            sampler.update(tk, float(s))
        second[t] = float(np.sum((weights * signals) ** 2))
        indices[t] = idx
        if (t + 1) % config.eval_every == 0 or t + 1 == steps:
            testcost[t] = kmeans_cost(Xte, centers)
    return TrainResult(
        steps=np.arange(1, steps + 1),
        gradnorm2=second / b,
        cumsecond=np.cumsum(second),
        trainloss=trainloss,
        step_sizes=np.full(steps, np.nan),
        indices=indices,
        w=centers,
        violations=getattr(sampler, "violations", 0),
        testcost=testcost,
        extra={"train_idx": train_idx, "test_idx": test_idx, "bounds": bounds},
    )
