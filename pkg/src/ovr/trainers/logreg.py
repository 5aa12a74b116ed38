"""Importance-sampled SGD / AdaGrad on logistic regression.

Each step draws ``batch`` indices from the sampler, forms the unbiased
gradient estimate ``g_t = mean_j weight_j * grad_{I_j}(w_t)`` with
``weight = 1 / (n p(I))``, and feeds each drawn point's gradient norm back
to the sampler as its loss.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatch, NoLabels
from .common import TrainerConfig, build_sampler


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def _features(dataset, intercept):
    X = dataset.points
    if intercept:
        X = np.hstack([X, np.ones((X.shape[0], 1))])
    return X


def logistic_gradient(x, y, w, reg=0.0):
    """Gradient of ``log(1 + exp(-y w.x)) + reg/2 |w|^2`` in ``w``."""
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    if x.shape != w.shape:
        raise DimensionMismatch(f"point has shape {x.shape}, model {w.shape}")
    return -y * _sigmoid(-y * float(x @ w)) * x + reg * w


def gradient_loss_signal(x, y, w, reg=0.0):
    """The sampler's loss for one point: the per-sample gradient norm."""
    return float(np.linalg.norm(logistic_gradient(x, y, w, reg)))


def per_sample_gradients(X, y, w, reg=0.0):
    """All per-sample gradients, shape ``(n, d)``."""
    coef = -y * _sigmoid(-y * (X @ w))
    return coef[:, None] * X + reg * w


def logistic_objective(X, y, w, reg=0.0):
    z = -y * (X @ w)
    return float(np.mean(np.logaddexp(0.0, z)) + 0.5 * reg * (w @ w))


def logreg_bounds(X, radius, reg):
    """Per-index caps on the squared gradient norm: ``(|x_i| + reg * radius)^2``."""
    b = (np.linalg.norm(X, axis=1) + reg * radius) ** 2
    return np.maximum(b, 1e-12)


def importance_weighted_gradient(sampler, ticket, X, y, w, reg=0.0):
    grad = logistic_gradient(X[ticket.index], y[ticket.index], w, reg)
    return sampler.importance_weight(ticket) * grad, grad


@dataclass
class TrainResult:
    steps: np.ndarray
    gradnorm2: np.ndarray
    cumsecond: np.ndarray
    trainloss: np.ndarray
    step_sizes: np.ndarray
    indices: np.ndarray
    w: np.ndarray
    violations: int = 0
    testcost: np.ndarray = None
    extra: dict = field(default_factory=dict)

    def rows(self, every=1):
        """Metric rows ``(step, trainloss, gradnorm2, cumsecond, testcost)``.

        Only evaluation steps carry a loss/cost; others are blank.
        """
        out = []
        for k in range(0, len(self.steps), every):
            tc = None if self.testcost is None else self.testcost[k]
            out.append({
                "step": int(self.steps[k]),
                "trainloss": _blank(self.trainloss[k]),
                "gradnorm2": float(self.gradnorm2[k]),
                "cumsecond": float(self.cumsecond[k]),
                "testcost": _blank(tc),
            })
        return out


def _blank(x):
    return None if x is None or math.isnan(x) else float(x)


def train_logreg(dataset, config=None, seed=0, intercept=True, w0=None):
    """Train logistic regression with an importance-sampled first-order method.

    ``sgd-strongly-convex`` adds ``mu/2 |w|^2`` and uses steps ``2/(mu t)``;
    ``adagrad`` uses ``D / sqrt(2 sum |g|^2)``. Iterates are projected onto
    the ball of radius ``D/2``.
    """
    config = config or TrainerConfig()
    if dataset.labels is None:
        raise NoLabels("logistic regression needs +-1 labels")
    X = _features(dataset, intercept)
    y = dataset.labels
    n, d = X.shape
    reg = config.mu if config.optimizer == "sgd-strongly-convex" else 0.0
    radius = config.D / 2.0
    sampler = build_sampler(config, n, logreg_bounds(X, radius, reg))
    rng = np.random.default_rng(seed)

    w = np.zeros(d) if w0 is None else np.array(w0, dtype=float)
    steps = config.steps
    gradnorm2 = np.empty(steps)
    trainloss = np.full(steps, np.nan)
    step_sizes = np.empty(steps)
    indices = np.empty((steps, config.batch), dtype=np.int64)
    sum_sq = 0.0
    for t in range(1, steps + 1):
        tickets = [sampler.draw(rng) for _ in range(config.batch)]
        g = np.zeros(d)
        for j, ticket in enumerate(tickets):
            est, grad = importance_weighted_gradient(sampler, ticket, X, y, w, reg)
            g += est
            indices[t - 1, j] = ticket.index
            sampler.update(ticket, float(np.linalg.norm(grad)))
        g /= config.batch
        gn2 = float(g @ g)
        sum_sq += gn2
        if config.optimizer == "sgd-strongly-convex":
            eta = 2.0 / (config.mu * t)
        else:
            eta = config.D / math.sqrt(2.0 * sum_sq) if sum_sq > 0 else 0.0
        w = w - eta * g
        norm = float(np.linalg.norm(w))
        if norm > radius:
            w *= radius / norm
        gradnorm2[t - 1] = gn2
        step_sizes[t - 1] = eta
        if t % config.eval_every == 0 or t == steps:
            trainloss[t - 1] = logistic_objective(X, y, w, reg)
    return TrainResult(
        steps=np.arange(1, steps + 1),
        gradnorm2=gradnorm2,
        cumsecond=np.cumsum(gradnorm2),
        trainloss=trainloss,
        step_sizes=step_sizes,
        indices=indices,
        w=w,
        violations=getattr(sampler, "violations", 0),
    )
