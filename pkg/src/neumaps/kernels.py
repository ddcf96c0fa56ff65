"""Gaussian affinity graphs from point clouds and max-min bandwidth tuning."""
from __future__ import annotations

from pathlib import Path

import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform

from .errors import ConfigError, DegenerateCloudError, NeuMapError, NonFiniteError, NonPositiveBandwidthError
from .graph import WeightedGraph, build_graph

_BLOCK = 1024


def as_point_cloud(X) -> np.ndarray:
    """Coerce to a finite float array of shape (n, m) with n >= 2."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise NeuMapError(f"point cloud must be 2-D, got {X.ndim}-D")
    if X.shape[0] < 2:
        raise NeuMapError("point cloud needs at least two points")
    if not np.all(np.isfinite(X)):
        raise NonFiniteError("point cloud has non-finite entries")
    return X


def gaussian_affinity(X, epsilon: float, zero_diagonal: bool = True) -> WeightedGraph:
    """Dense squared-exponential kernel graph ``exp(-|x_i - x_j|^2 / epsilon)``.

    The diagonal is 0 when ``zero_diagonal`` is set and 1 otherwise. Raises
    :class:`IsolatedVertexError` (via :func:`build_graph`) if every
    off-diagonal weight of some row underflows and the diagonal is zeroed.
    """
    X = as_point_cloud(X)
    if not epsilon > 0:
        raise NonPositiveBandwidthError(f"epsilon must be positive, got {epsilon}")
    d2 = pdist(X, "sqeuclidean")
    d2 /= -epsilon
    np.exp(d2, out=d2)
    W = squareform(d2, checks=False)
    del d2
    np.fill_diagonal(W, 0.0 if zero_diagonal else 1.0)
    return build_graph(W, allow_self_loops=not zero_diagonal, copy=False)


def nearest_neighbor_distances(X) -> np.ndarray:
    """Distance from each point to its nearest other point (brute force, blocked)."""
    X = as_point_cloud(X)
    n = X.shape[0]
    out = np.empty(n)
    for start in range(0, n, _BLOCK):
        stop = min(start + _BLOCK, n)
        D = cdist(X[start:stop], X, "sqeuclidean")
        D[np.arange(stop - start), np.arange(start, stop)] = np.inf
        out[start:stop] = D.min(axis=1)
    return np.sqrt(out)


def maxmin_bandwidth(X, c: float = 2.0) -> float:
    """Max-min bandwidth rule: ``c * (max_i min_{j != i} |x_i - x_j|)^2``.

    Every point then has at least one neighbor within ``sqrt(epsilon / c)``,
    which keeps the kernel graph free of isolated vertices.
    """
    if not c > 0:
        raise NonPositiveBandwidthError(f"c must be positive, got {c}")
    r = float(nearest_neighbor_distances(X).max())
    if r == 0.0:
        raise DegenerateCloudError("all points coincide; max-min bandwidth is zero")
    return c * r * r


def load_point_cloud(path, label_col: int | None = None, cv_col: int | None = None):
    """Read a header-less CSV of samples.

    Column specs that do not fit the file raise :class:`ConfigError`.

    ``label_col`` and ``cv_col`` name columns (negative indices allowed) that
    are split off as integer labels and a collective-variable vector; the
    remaining columns form the feature matrix.

    Returns
    -------
    X : ndarray (n, m)
    labels : ndarray of int or None
    cv : ndarray or None
    """
    data = np.loadtxt(Path(path), delimiter=",", ndmin=2)
    ncol = data.shape[1]
    special = {}
    for name, col in (("label", label_col), ("cv", cv_col)):
        if col is None:
            continue
        if not -ncol <= col < ncol:
            raise ConfigError(f"{name} column {col} does not exist (file has {ncol} columns)")
        special[name] = col % ncol
    if len(set(special.values())) < len(special):
        raise ConfigError("label and cv columns must differ")
    feature_cols = [j for j in range(ncol) if j not in special.values()]
    if not feature_cols:
        raise ConfigError("no feature columns left after removing label/cv columns")
    labels = None
    if "label" in special:
        raw = data[:, special["label"]]
        if np.any(np.mod(raw, 1) != 0):
            raise NeuMapError("label column must hold integers")
        labels = raw.astype(np.int64)
    cv = data[:, special["cv"]].copy() if "cv" in special else None
    return as_point_cloud(data[:, feature_cols]), labels, cv
