"""Clustering and regression scores: k-means, NMI, clustering accuracy, slope error."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ConstantRegressorError, LengthMismatchError, NeuMapError, TooFewPointsError


@dataclass(frozen=True)
class ClusterAssignment:
    labels: np.ndarray
    k: int
    inertia: float
    seed: int


def _kmeanspp(X, k, rng):
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    d2 = np.sum((X - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = d2.sum()
        idx = rng.integers(n) if total <= 0 else rng.choice(n, p=d2 / total)
        centers[j] = X[idx]
        np.minimum(d2, np.sum((X - centers[j]) ** 2, axis=1), out=d2)
    return centers


def _sq_dists(X, centers):
    return (
        np.sum(X * X, axis=1)[:, None]
        - 2.0 * X @ centers.T
        + np.sum(centers * centers, axis=1)[None, :]
    ).clip(min=0.0)


def _lloyd(X, centers, max_iter):
    labels = None
    for _ in range(max_iter):
        D = _sq_dists(X, centers)
        new = D.argmin(axis=1)
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for j in range(len(centers)):
            members = labels == j
            if members.any():
                centers[j] = X[members].mean(axis=0)
            else:
                # reseed an empty cluster at the worst-served point
                far = int(D[np.arange(len(X)), labels].argmax())
                centers[j] = X[far]
    D = _sq_dists(X, centers)
    labels = D.argmin(axis=1)
    inertia = float(np.sum((X - centers[labels]) ** 2))
    return labels, inertia


def kmeans(coords, k: int, restarts: int = 10, seed: int = 0, max_iter: int = 300) -> ClusterAssignment:
    """Lloyd's algorithm from k-means++ seeds; the lowest-inertia restart wins.

    ``coords`` may be an array or anything with a ``coords`` attribute. Ties
    in inertia go to the earlier restart, so the result depends only on
    ``seed``.
    """
    X = np.asarray(getattr(coords, "coords", coords), dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if k < 2 or X.shape[0] < k:
        raise TooFewPointsError(f"need k >= 2 and at least k points, got k={k}, n={X.shape[0]}")
    rng = np.random.Generator(np.random.PCG64(seed))
    best = None
    for _ in range(max(1, restarts)):
        labels, inertia = _lloyd(X, _kmeanspp(X, k, rng), max_iter)
        if best is None or inertia < best[1]:
            best = (labels, inertia)
    return ClusterAssignment(best[0], k, best[1], seed)


def _check_pair(a, b):
    a, b = np.asarray(a).ravel(), np.asarray(b).ravel()
    if a.shape != b.shape:
        raise LengthMismatchError(f"label vectors differ in length: {a.size} vs {b.size}")
    if a.size == 0:
        raise NeuMapError("label vectors are empty")
    return a, b


def contingency(a, b) -> np.ndarray:
    a, b = _check_pair(a, b)
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    C = np.zeros((ia.max() + 1, ib.max() + 1), dtype=np.int64)
    np.add.at(C, (ia, ib), 1)
    return C


def _entropy(counts):
    p = counts[counts > 0] / counts.sum()
    return float(-np.sum(p * np.log(p)))


def nmi(a, b) -> float:
    """Mutual information over the geometric mean of the two entropies (natural log).

    If either labeling is constant the score is 0, or 1 when both are.
    """
    C = contingency(a, b)
    ha, hb = _entropy(C.sum(axis=1)), _entropy(C.sum(axis=0))
    if ha == 0.0 or hb == 0.0:
        return 1.0 if ha == hb else 0.0
    P = C / C.sum()
    pa, pb = P.sum(axis=1), P.sum(axis=0)
    nz = P > 0
    mi = float(np.sum(P[nz] * np.log(P[nz] / np.outer(pa, pb)[nz])))
    return float(np.clip(mi / np.sqrt(ha * hb), 0.0, 1.0))


def acc(pred, truth) -> float:
    """Fraction of points correct under the best one-to-one relabeling of ``pred``."""
    C = contingency(pred, truth)
    rows, cols = linear_sum_assignment(C, maximize=True)
    return float(C[rows, cols].sum() / C.sum())


def slope_stderr(x, y) -> tuple[float, float]:
    """Least-squares slope of ``y`` on ``x`` and its standard error."""
    x, y = np.asarray(x, dtype=float).ravel(), np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise LengthMismatchError(f"x and y differ in length: {x.size} vs {y.size}")
    if x.size < 3:
        raise TooFewPointsError("need at least three points")
    xc = x - x.mean()
    sxx = float(xc @ xc)
    if sxx == 0.0 or np.ptp(x) == 0.0:
        raise ConstantRegressorError("regressor is constant")
    slope = float(xc @ (y - y.mean())) / sxx
    resid = y - y.mean() - slope * xc
    rss = float(resid @ resid)
    return slope, float(np.sqrt(rss / (x.size - 2) / sxx))
