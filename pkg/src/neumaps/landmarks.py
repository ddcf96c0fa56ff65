"""Marking schemes that split the samples into landmarks and kept points.

The marked points play the role of the boundary; the kept points are the
ones that get embedded.

Random selection uses SplitMix64 with a partial Fisher-Yates shuffle, both
spelled out below, so a selection can be reproduced bit-for-bit in any
language from ``(n, size, seed)``:

* state advances by ``0x9E3779B97F4A7C15`` (mod 2^64); the output mixes it with
  ``z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9``,
  ``z = (z ^ (z >> 27)) * 0x94D049BB133111EB``, ``z ^ (z >> 31)``;
* a draw in ``[0, m)`` is ``(next() * m) >> 64``;
* for ``i = 0 .. size-1`` swap ``a[i]`` with ``a[i + draw(n - i)]``, starting from
  ``a = [0, 1, ..., n-1]``; the marked set is ``sorted(a[:size])``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AllPointsMarkedError,
    FractionOutOfRangeError,
    NeuMapError,
    NoPointsMarkedError,
    StrideTooSmallError,
)
from .kernels import as_point_cloud

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Minimal 64-bit generator with published constants."""

    def __init__(self, seed: int):
        self.state = int(seed) & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, m: int) -> int:
        return (self.next() * m) >> 64


@dataclass(frozen=True)
class LandmarkSelection:
    marked: np.ndarray
    kept: np.ndarray
    scheme: str
    params: dict = field(default_factory=dict)
    seed: int | None = None

    @property
    def n(self) -> int:
        return len(self.marked) + len(self.kept)

    @property
    def fraction(self) -> float:
        return len(self.marked) / self.n

    def to_json(self) -> dict:
        return {
            "scheme": self.scheme,
            "params": self.params,
            "seed": self.seed,
            "n": self.n,
            "marked": self.marked.tolist(),
        }


def _selection(n: int, marked, scheme: str, params: dict, seed=None) -> LandmarkSelection:
    marked = np.unique(np.asarray(marked, dtype=np.int64))
    mask = np.ones(n, dtype=bool)
    mask[marked] = False
    return LandmarkSelection(marked, np.flatnonzero(mask), scheme, params, seed)


def from_marked(n: int, marked, scheme: str = "explicit", params: dict | None = None, seed=None) -> LandmarkSelection:
    """Wrap an explicit list of marked indices."""
    marked = np.asarray(marked, dtype=np.int64)
    if marked.size and (marked.min() < 0 or marked.max() >= n):
        raise NeuMapError(f"marked indices must lie in [0, {n})")
    return _selection(n, marked, scheme, params or {}, seed)


def round_half_away(x: float) -> int:
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def select_random(n: int, fraction: float, seed: int) -> LandmarkSelection:
    """Mark ``round(fraction * n)`` points uniformly without replacement."""
    if not 0 < fraction < 1:
        raise FractionOutOfRangeError(f"fraction must lie in (0, 1), got {fraction}")
    size = round_half_away(fraction * n)
    if size < 1:
        raise FractionOutOfRangeError(f"fraction {fraction} of {n} points marks nothing")
    if size >= n:
        raise AllPointsMarkedError(f"fraction {fraction} of {n} points marks everything")
    rng = SplitMix64(seed)
    a = list(range(n))
    for i in range(size):
        j = i + rng.below(n - i)
        a[i], a[j] = a[j], a[i]
    return _selection(n, a[:size], "random", {"fraction": fraction}, seed)


def select_every_kth(n: int, k: int) -> LandmarkSelection:
    """Mark indices ``0, k, 2k, ...``."""
    if k < 2 or n < k:
        raise StrideTooSmallError(f"need 2 <= k <= n, got k={k}, n={n}")
    return _selection(n, np.arange(0, n, k), "every_kth", {"k": k})


def farthest_point_order(X, max_points: int | None = None, delta: float | None = None):
    """Greedy farthest-point traversal starting at index 0.

    Stops after ``max_points`` points or once every point is within ``delta``
    of the chosen set, whichever comes first.

    Returns
    -------
    order : ndarray of int
        Chosen indices in selection order.
    radii : ndarray
        ``radii[i]`` is the covering radius after ``order[: i + 1]`` was chosen.
    """
    X = as_point_cloud(X)
    n = X.shape[0]
    limit = n if max_points is None else min(n, max_points)
    order = [0]
    dist = np.linalg.norm(X - X[0], axis=1)
    radii = [float(dist.max())]
    while len(order) < limit and not (delta is not None and radii[-1] <= delta):
        j = int(dist.argmax())
        order.append(j)
        np.minimum(dist, np.linalg.norm(X - X[j], axis=1), out=dist)
        radii.append(float(dist.max()))
    return np.asarray(order, dtype=np.int64), np.asarray(radii)


def select_delta_net(X, delta: float) -> LandmarkSelection:
    """Mark a delta-net built by farthest-point sampling from index 0."""
    if not delta > 0:
        raise NeuMapError(f"delta must be positive, got {delta}")
    X = as_point_cloud(X)
    order, radii = farthest_point_order(X, delta=delta)
    return _selection(X.shape[0], order, "delta_net", {"delta": delta, "radius": radii[-1]})


def delta_for_count(X, count: int) -> float:
    """Covering radius reached by the first ``count`` farthest-point picks.

    Passing it to :func:`select_delta_net` marks (at most) ``count`` points.
    """
    _, radii = farthest_point_order(X, max_points=count)
    return float(radii[-1])


def select_threshold(cv, intervals) -> LandmarkSelection:
    """Mark points whose collective variable lies in any ``[c - h, c + h]``.

    Values are compared as plain scalars; periodic variables must be wrapped
    by the caller.
    """
    cv = np.asarray(cv, dtype=float).ravel()
    intervals = [(float(c), float(h)) for c, h in intervals]
    if not intervals:
        raise NeuMapError("at least one interval is required")
    if any(h <= 0 for _, h in intervals):
        raise NeuMapError("interval halfwidths must be positive")
    hit = np.zeros(cv.shape, dtype=bool)
    for c, h in intervals:
        hit |= np.abs(cv - c) <= h
    if not hit.any():
        raise NoPointsMarkedError("no point falls in the given intervals")
    if hit.all():
        raise AllPointsMarkedError("every point falls in the given intervals")
    return _selection(len(cv), np.flatnonzero(hit), "threshold", {"intervals": [list(i) for i in intervals]})
