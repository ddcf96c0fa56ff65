"""Reference embeddings: plain diffusion maps and Roseland.

Neither uses alpha-normalization, so comparisons with the Neumann map share
the same raw Gaussian kernel.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DegenerateRowError, DimensionTooLargeError, EigensolverFailure, EmptyLandmarksError, NeuMapError
from .graph import WeightedGraph
from .kernels import as_point_cloud
from .neumann import EmbeddingMatrix, SpectralDecomposition, _fix_signs, leading_eigenpairs, scaled_coordinates


@dataclass(frozen=True, eq=False)
class DmapResult:
    """Eigenvalues of ``P = D^{-1} W`` (descending) and the diffusion coordinates."""

    eigenvalues: np.ndarray
    embedding: EmbeddingMatrix
    decomposition: SpectralDecomposition


def dmap_decomposition(g: WeightedGraph, n_components: int | None = None) -> SpectralDecomposition:
    """Eigenpairs of the symmetric conjugate ``D^{-1/2} W D^{-1/2}``.

    The returned object's ``V_right`` holds the right eigenvectors of ``D^{-1} W``.
    """
    s = 1.0 / np.sqrt(g.degrees)
    S = g.W * s[:, None]
    S *= s[None, :]
    S += S.T
    S *= 0.5
    sigma, U = leading_eigenpairs(S, n_components)
    return SpectralDecomposition(sigma, U, g.degrees)


def diffusion_map(g: WeightedGraph, t: float = 1, d: int = 2, n_components: int | None = None) -> DmapResult:
    if d > g.n - 1:
        raise DimensionTooLargeError(f"d={d} exceeds n-1={g.n - 1}")
    dec = dmap_decomposition(g, n_components if n_components is not None else d + 1)
    coords = scaled_coordinates(dec.sigma, dec.V_right, t, d)
    emb = EmbeddingMatrix(coords, float(t), "right", np.arange(g.n), dec.sigma[1 : d + 1].copy())
    return DmapResult(dec.sigma, emb, dec)


def dmap_embed(g: WeightedGraph, t: float = 1, d: int = 2) -> EmbeddingMatrix:
    """Diffusion-map coordinates ``lambda_j^t psi_j(i)`` for j = 1..d."""
    return diffusion_map(g, t, d).embedding


@dataclass(frozen=True, eq=False)
class RoselandResult:
    A: np.ndarray
    singular_values: np.ndarray
    U: np.ndarray
    embedding: EmbeddingMatrix


def roseland(X, landmarks, epsilon: float, t: float = 1, d: int = 2, kept=None) -> RoselandResult:
    """Landmark diffusion through a reference set.

    Kept points talk to each other only through the landmarks: with
    ``A[i, l] = exp(-|x_i - x_l|^2 / epsilon)`` and ``Dh = diag(A A^T 1)`` the
    two-step walk is ``Dh^{-1} A A^T``. Its spectrum comes from the SVD of
    ``Dh^{-1/2} A``; coordinates are the left singular vectors 2..d+1 scaled by
    the singular values to the power ``2t``.

    ``kept`` defaults to every index not in ``landmarks``.
    """
    X = as_point_cloud(X)
    landmarks = np.unique(np.asarray(landmarks, dtype=np.int64))
    if landmarks.size == 0:
        raise EmptyLandmarksError("no landmarks given")
    if kept is None:
        mask = np.ones(X.shape[0], dtype=bool)
        mask[landmarks] = False
        kept = np.flatnonzero(mask)
    kept = np.asarray(kept, dtype=np.int64)
    if not epsilon > 0:
        raise NeuMapError("epsilon must be positive")
    if d > min(kept.size, landmarks.size) - 1:
        raise DimensionTooLargeError(f"d={d} too large for {kept.size} kept points and {landmarks.size} landmarks")

    A = cdist(X[kept], X[landmarks], "sqeuclidean")
    A /= -epsilon
    np.exp(A, out=A)
    dh = A @ A.sum(axis=0)
    bad = np.flatnonzero(dh <= 0)
    if bad.size:
        raise DegenerateRowError(f"kept points with no affinity to any landmark: {kept[bad[:10]].tolist()}")
    M = A / np.sqrt(dh)[:, None]
    try:
        U, s, _ = np.linalg.svd(M, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc
    U = _fix_signs(U)
    coords = scaled_coordinates(s * s, U, t, d)
    emb = EmbeddingMatrix(coords, float(t), "left-singular", kept, (s * s)[1 : d + 1])
    return RoselandResult(A, s, U, emb)


def roseland_embed(X, landmarks, epsilon: float, t: float = 1, d: int = 2, kept=None) -> EmbeddingMatrix:
    return roseland(X, landmarks, epsilon, t, d, kept).embedding
