"""Dataset container, CSV/libsvm readers, and a synthetic imbalanced generator."""
import csv
from dataclasses import dataclass

import numpy as np

from ..errors import BadMix, ParseError


@dataclass
class Dataset:
    points: np.ndarray           # (n, d)
    labels: np.ndarray = None    # (n,) of +-1, optional
    source: str = ""
    classes: np.ndarray = None   # generator class ids, optional

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        if self.points.shape[0] < 1:
            raise ValueError("dataset needs at least one point")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=float)
            if self.labels.shape != (self.points.shape[0],):
                raise ValueError("one label per point required")

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def d(self):
        return self.points.shape[1]

    def subset(self, idx):
        return Dataset(self.points[idx],
                       None if self.labels is None else self.labels[idx],
                       self.source,
                       None if self.classes is None else self.classes[idx])


def _to_pm1(raw):
    # {0,1} and {-1,+1} encodings both map positives to +1
    return np.where(np.asarray(raw, dtype=float) > 0, 1.0, -1.0)


def _read_csv(path, label_column):
    rows = []
    with open(path, newline="") as fh:
        for lineno, rec in enumerate(csv.reader(fh), start=1):
            if not rec or all(not c.strip() for c in rec):
                continue
            try:
                rows.append([float(c) for c in rec])
            except ValueError:
                if lineno == 1 and not rows:
                    continue  # header
                raise ParseError(f"non-numeric field in {rec!r}", lineno) from None
            if len(rows[-1]) != len(rows[0]):
                raise ParseError(f"expected {len(rows[0])} fields, got {len(rows[-1])}", lineno)
    if not rows:
        raise ParseError("no data rows")
    arr = np.array(rows)
    if label_column is None:
        return arr, None
    labels = arr[:, label_column]
    return np.delete(arr, label_column, axis=1), _to_pm1(labels)


def _read_libsvm(path):
    labels, entries, width = [], [], 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                labels.append(float(parts[0]))
                row = {}
                for tok in parts[1:]:
                    idx, val = tok.split(":", 1)
                    j = int(idx)
                    if j < 1:
                        raise ValueError("indices are 1-based")
                    row[j] = float(val)
            except ValueError as exc:
                raise ParseError(f"malformed libsvm line ({exc})", lineno) from None
            if row:
                width = max(width, max(row))
            entries.append(row)
    if not entries:
        raise ParseError("no data rows")
    # column j-1 holds feature index j
    points = np.zeros((len(entries), width))
    for r, row in enumerate(entries):
        for j, v in row.items():
            points[r, j - 1] = v
    return points, _to_pm1(labels)


def load_dataset(path, format="csv", label_column=None):
    """Read ``path`` as ``csv`` (optional header, numeric fields) or ``libsvm``.

    For CSV, ``label_column`` selects the label field; labels become +-1
    (positive values map to +1). libsvm files always carry labels, and
    feature ``j`` (1-based) lands in column ``j - 1``.
    """
    if format == "csv":
        points, labels = _read_csv(path, label_column)
    elif format == "libsvm":
        points, labels = _read_libsvm(path)
    else:
        raise ValueError(f"unknown format {format!r}")
    return Dataset(points, labels, source=str(path))


def synth_imbalanced(n, d, mix, seed=0, spreads=None, separation=6.0):
    """Gaussian blobs with class proportions ``mix``.

    Class ids are multinomial with probabilities ``mix``; class 0 is labelled
    -1 and every minority class +1. ``spreads`` gives each blob's standard
    deviation (defaults grow with rarity, which makes gradient norms
    heavy-tailed). The class-0 blob is centered at the origin and every
    other blob sits ``separation`` away from it in a random direction.
    """
    mix = np.asarray(mix, dtype=float)
    if mix.ndim != 1 or mix.size < 1 or np.any(mix < 0) or abs(mix.sum() - 1) > 1e-9:
        raise BadMix(f"mix must be nonnegative proportions summing to 1, got {mix.tolist()}")
    k = mix.size
    rng = np.random.default_rng(seed)
    if spreads is None:
        spreads = 1.0 + 2.0 * np.arange(k)
    spreads = np.broadcast_to(np.asarray(spreads, dtype=float), (k,))
    directions = rng.normal(size=(k, d))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    centers = separation * directions
    centers[0] = 0.0
    classes = rng.choice(k, size=n, p=mix)
    points = centers[classes] + spreads[classes, None] * rng.normal(size=(n, d))
    labels = np.where(classes == 0, -1.0, 1.0)
    return Dataset(points, labels, source=f"synth(n={n},d={d},mix={mix.tolist()},seed={seed})",
                   classes=classes)
