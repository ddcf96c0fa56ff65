"""Weighted graphs, Laplacians and kept/boundary partitions.

All indices are 0-based. Matrices are dense ``numpy`` arrays; the graph and
partition objects are immutable after construction (arrays are marked
read-only and derived blocks are computed lazily, once).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import (
    AsymmetricBeyondToleranceError,
    DegenerateBoundaryWarning,
    DuplicateIndexError,
    EmptyKeepError,
    IndexOutOfRangeError,
    IsolatedVertexError,
    NegativeWeightError,
    NonFiniteError,
    NonSquareError,
    SelfLoopError,
)

SYMMETRY_RTOL = 1e-12
_BLOCK = 2048


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Undirected graph with a dense symmetric nonnegative weight matrix.

    Use :func:`build_graph` rather than the constructor; it validates and
    computes the degree vector.
    """

    W: np.ndarray
    degrees: np.ndarray
    allow_self_loops: bool = True

    @property
    def n(self) -> int:
        return self.W.shape[0]


def _max_asymmetry(W: np.ndarray) -> float:
    # blockwise so that large matrices do not need a full transposed copy
    worst = 0.0
    n = W.shape[0]
    for start in range(0, n, _BLOCK):
        stop = min(start + _BLOCK, n)
        diff = np.abs(W[start:stop] - W[:, start:stop].T)
        worst = max(worst, float(diff.max(initial=0.0)))
    return worst


def build_graph(W, allow_self_loops: bool = True, copy: bool = True) -> WeightedGraph:
    """Validate an affinity matrix and wrap it as a :class:`WeightedGraph`.

    Parameters
    ----------
    W : array_like, shape (n, n)
        Nonnegative edge weights. Tiny asymmetries (relative size at most
        1e-12) are removed by averaging with the transpose; anything larger is
        rejected.
    allow_self_loops : bool
        If False, a nonzero diagonal is an error.
    copy : bool
        If False and ``W`` is already a float array, it is adopted in place
        (and frozen). Saves one n-by-n copy for large kernels.

    Raises
    ------
    NonSquareError, NonFiniteError, NegativeWeightError,
    AsymmetricBeyondToleranceError, SelfLoopError, IsolatedVertexError
    """
    W = np.array(W, dtype=float) if copy else np.asarray(W, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise NonSquareError(f"weight matrix must be square, got shape {W.shape}")
    if not np.all(np.isfinite(W)):
        raise NonFiniteError("weight matrix has non-finite entries")
    if (W < 0).any():
        raise NegativeWeightError("weight matrix has negative entries")

    scale = float(W.max(initial=0.0))
    asym = _max_asymmetry(W)
    if asym > SYMMETRY_RTOL * scale:
        raise AsymmetricBeyondToleranceError(
            f"max |W - W^T| = {asym:.3g} exceeds {SYMMETRY_RTOL:g} relative"
        )
    if asym > 0:
        W = 0.5 * (W + W.T)

    if not allow_self_loops and np.any(np.diag(W) != 0):
        raise SelfLoopError("diagonal must be zero when self-loops are disallowed")

    d = W.sum(axis=1)
    isolated = np.flatnonzero(d <= 0)
    if isolated.size:
        raise IsolatedVertexError(f"vertices with zero degree: {isolated[:10].tolist()}")
    return WeightedGraph(_readonly(W), _readonly(d), allow_self_loops)


def graph_laplacian(g: WeightedGraph) -> np.ndarray:
    """Combinatorial Laplacian ``D - W``."""
    L = -g.W.copy()
    L[np.diag_indices_from(L)] += g.degrees
    return L


def load_graph_csv(path) -> WeightedGraph:
    """Read a dense weight matrix from a header-less CSV file."""
    W = np.loadtxt(Path(path), delimiter=",", ndmin=2)
    return build_graph(W)


@dataclass(frozen=True, eq=False)
class SubgraphPartition:
    """Split of the vertices into a kept set and its boundary.

    ``keep`` is the embedded vertex set. ``boundary`` holds the vertices outside
    ``keep`` with at least one positive-weight edge into it; vertices with no
    such edge are dropped entirely. The matrix blocks below are computed on
    first access.
    """

    graph: WeightedGraph
    keep: np.ndarray
    boundary: np.ndarray
    degenerate: bool = field(default=False)

    @cached_property
    def W_S(self) -> np.ndarray:
        return _readonly(self.graph.W[np.ix_(self.keep, self.keep)])

    @cached_property
    def t_s(self) -> np.ndarray:
        """Ambient degrees of the kept vertices (diagonal of ``T_S``)."""
        return _readonly(self.graph.degrees[self.keep].copy())

    @property
    def T_S(self) -> np.ndarray:
        return np.diag(self.t_s)

    @cached_property
    def L_D(self) -> np.ndarray:
        """Dirichlet Laplacian, the principal block of ``L_G`` on the kept set."""
        L = -self.W_S.copy()
        L[np.diag_indices_from(L)] += self.t_s
        return _readonly(L)

    @cached_property
    def B(self) -> np.ndarray:
        """Boundary operator, shape ``(len(boundary), len(keep))``."""
        return _readonly(self.graph.W[np.ix_(self.boundary, self.keep)])

    @cached_property
    def t_delta(self) -> np.ndarray:
        """Boundary degrees (diagonal of ``T_delta``): weight into the kept set."""
        return _readonly(self.B.sum(axis=1))

    @property
    def T_delta(self) -> np.ndarray:
        return np.diag(self.t_delta)


def partition(g: WeightedGraph, keep) -> SubgraphPartition:
    """Split ``g`` into the kept vertex set and its boundary.

    Keeping every vertex is allowed but leaves no boundary; a
    :class:`DegenerateBoundaryWarning` is emitted and the returned partition
    has ``degenerate=True``.
    """
    keep = np.asarray(keep)
    if keep.size == 0:
        raise EmptyKeepError("keep set is empty")
    if not np.issubdtype(keep.dtype, np.integer):
        if np.all(np.mod(keep, 1) == 0):
            keep = keep.astype(np.int64)
        else:
            raise IndexOutOfRangeError("keep indices must be integers")
    keep = keep.ravel().astype(np.int64)
    if keep.min() < 0 or keep.max() >= g.n:
        raise IndexOutOfRangeError(f"keep indices must lie in [0, {g.n})")
    keep = np.sort(keep)
    if np.any(keep[1:] == keep[:-1]):
        raise DuplicateIndexError("keep contains duplicate indices")

    mask = np.ones(g.n, dtype=bool)
    mask[keep] = False
    outside = np.flatnonzero(mask)
    if outside.size:
        touches = (g.W[np.ix_(outside, keep)] > 0).any(axis=1)
        boundary = outside[touches]
    else:
        boundary = outside
    degenerate = boundary.size == 0
    if degenerate:
        warnings.warn(
            "no boundary vertices: the Neumann Laplacian reduces to the Dirichlet Laplacian",
            DegenerateBoundaryWarning,
            stacklevel=2,
        )
    return SubgraphPartition(g, _readonly(keep), _readonly(boundary), degenerate)
