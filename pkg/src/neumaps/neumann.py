"""Neumann Laplacian, reflecting random walk and the Neumann eigenmap.

For a partition of a graph into a kept set ``S`` and boundary ``dS`` the
Neumann Laplacian is

    L_N = L_D - B^T T_delta^{-1} B

and its symmetric renormalization ``N = T_S^{-1/2} L_N T_S^{-1/2}`` is
similar to the row-stochastic reflecting walk

    R = T_S^{-1/2} (I - N) T_S^{1/2} = T_S^{-1} W_SS + T_S^{-1} B^T T_delta^{-1} B,

which moves between kept vertices either directly or by bouncing once off a
boundary vertex. Eigenvectors ``u`` of ``I - N`` give right eigenvectors
``T_S^{-1/2} u`` and left eigenvectors ``T_S^{1/2} u`` of ``R``.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh

from .errors import (
    DimensionTooLargeError,
    EigensolverFailure,
    IndexOutOfRangeError,
    NegativeEigenvalueFractionalTimeError,
    NeuMapError,
    NonIntegerTimeError,
    RayleighViolation,
    SingularBoundaryDegreeError,
    ZeroBoundaryDegreeError,
)
from .graph import SubgraphPartition, _readonly

Basis = Literal["left", "right"]

MIN_BOUNDARY_DEGREE = 1e-14
NEGATIVE_CLAMP = 1e-12
# above this size a truncated decomposition switches from LAPACK to ARPACK
DENSE_LIMIT = 3000
ARPACK_TOL = 1e-11
# a wide Krylov space converges the slowly separating top pairs in one pass
ARPACK_NCV = 80
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class NeumannSystem:
    """Neumann operators of one partition; matrices are built on first access."""

    partition: SubgraphPartition

    @property
    def degenerate(self) -> bool:
        return self.partition.degenerate

    @cached_property
    def L_N(self) -> np.ndarray:
        p = self.partition
        L = p.L_D.copy()
        if p.boundary.size:
            L -= p.B.T @ (p.B / p.t_delta[:, None])
        return _readonly(L)

    @cached_property
    def N_op(self) -> np.ndarray:
        s = 1.0 / np.sqrt(self.partition.t_s)
        N = self.L_N * s[:, None] * s[None, :]
        return _readonly(0.5 * (N + N.T))

    @cached_property
    def R(self) -> np.ndarray:
        """Reflecting-walk transition matrix ``T^{-1/2} (I - N) T^{1/2}``."""
        s = np.sqrt(self.partition.t_s)
        M = -self.N_op.copy()
        M[np.diag_indices_from(M)] += 1.0
        R = M * (s[None, :] / s[:, None])
        R[(R < 0) & (R >= -NEGATIVE_CLAMP)] = 0.0
        return _readonly(R)

    def walk_symmetric(self) -> np.ndarray:
        """``I - N`` assembled as ``T^{-1/2} (W_SS + B^T T_delta^{-1} B) T^{-1/2}``.

        Not cached. This route never materializes ``L_D`` or ``L_N``, which
        matters when the kept set has thousands of vertices.
        """
        p = self.partition
        g, keep = p.graph, p.keep
        K = g.W[np.ix_(keep, keep)]
        if p.boundary.size:
            B = g.W[np.ix_(p.boundary, keep)]
            K += B.T @ (B / B.sum(axis=1)[:, None])
            del B
        s = 1.0 / np.sqrt(p.t_s)
        K *= s[:, None]
        K *= s[None, :]
        # explicit symmetrization kills roundoff asymmetry from the product
        K += K.T
        K *= 0.5
        return K


def neumann_laplacian(p: SubgraphPartition) -> NeumannSystem:
    """Wrap a partition as a :class:`NeumannSystem` after checking boundary degrees."""
    if p.boundary.size and np.any(p.t_delta < MIN_BOUNDARY_DEGREE):
        raise SingularBoundaryDegreeError("boundary vertex with (near) zero degree into the kept set")
    return NeumannSystem(p)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenpairs of ``I - N`` sorted by eigenvalue, largest first.

    When fewer than ``len(t_s)`` pairs were requested, ``sigma`` and ``U``
    hold only the leading ones.
    """

    sigma: np.ndarray
    U: np.ndarray
    t_s: np.ndarray

    @property
    def truncated(self) -> bool:
        return self.U.shape[1] < self.U.shape[0]

    @cached_property
    def V_right(self) -> np.ndarray:
        return _readonly(self.U / np.sqrt(self.t_s)[:, None])

    @cached_property
    def Y_left(self) -> np.ndarray:
        return _readonly(self.U * np.sqrt(self.t_s)[:, None])

    def basis(self, which: Basis) -> np.ndarray:
        if which == "right":
            return self.V_right
        if which == "left":
            return self.Y_left
        raise NeuMapError(f"basis must be 'left' or 'right', got {which!r}")


def _fix_signs(U: np.ndarray) -> np.ndarray:
    idx = np.abs(U).argmax(axis=0)
    signs = np.sign(U[idx, np.arange(U.shape[1])])
    signs[signs == 0] = 1.0
    return U * signs


def leading_eigenpairs(S: np.ndarray, n_components: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Largest eigenpairs of a symmetric matrix, eigenvalues descending.

    ``n_components=None`` returns the full spectrum. Truncated requests go to
    LAPACK's subset driver up to :data:`DENSE_LIMIT` rows and to ARPACK with
    a fixed start vector beyond that. Ties keep the solver's order. Columns
    are sign-normalized so that each one's largest-magnitude entry is positive.
    """
    m = S.shape[0]
    k = m if n_components is None else int(n_components)
    if k < 1:
        raise NeuMapError("n_components must be positive")
    k = min(k, m)
    try:
        if k == m:
            sigma, U = scipy.linalg.eigh(S)
        elif m <= DENSE_LIMIT or k >= m - 1:
            sigma, U = scipy.linalg.eigh(S, subset_by_index=[m - k, m - 1])
        else:
            ncv = min(m - 1, max(2 * k + 1, ARPACK_NCV))
            sigma, U = eigsh(S, k=k, which="LA", v0=np.ones(m), tol=ARPACK_TOL, ncv=ncv)
    except (np.linalg.LinAlgError, ArpackNoConvergence, ArpackError) as exc:
        raise EigensolverFailure(str(exc)) from exc

    order = np.argsort(-sigma, kind="stable")
    sigma, U = sigma[order], _fix_signs(U[:, order])

    resid = np.linalg.norm(S @ U - U * sigma, axis=0)
    bound = RESIDUAL_TOL * max(1.0, float(np.abs(sigma).max()))
    if np.any(resid > bound):
        raise EigensolverFailure(f"eigen-residual {resid.max():.3g} exceeds {bound:.3g}")
    return sigma, U


def spectral(sys: NeumannSystem, n_components: int | None = None) -> SpectralDecomposition:
    """Diagonalize ``I - N`` (see :func:`leading_eigenpairs` for the solver choice)."""
    sigma, U = leading_eigenpairs(sys.walk_symmetric(), n_components)
    return SpectralDecomposition(_readonly(sigma), _readonly(U), sys.partition.t_s)


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
    """Per-vertex coordinates; row ``i`` belongs to ``vertices[i]``."""

    coords: np.ndarray
    t: float
    basis: str
    vertices: np.ndarray | None = None
    sigma: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.coords.shape[1]


def _is_integer(t) -> bool:
    return isinstance(t, numbers.Integral) or float(t).is_integer()


def scaled_coordinates(sigma: np.ndarray, vectors: np.ndarray, t: float, d: int) -> np.ndarray:
    """Columns ``sigma_j^t * vectors[:, j]`` for j = 1..d (column 0 is skipped)."""
    if d < 1:
        raise NeuMapError("embedding dimension must be at least 1")
    if d > len(sigma) - 1:
        raise DimensionTooLargeError(f"d={d} but only {len(sigma) - 1} nontrivial eigenvectors are available")
    if t < 0:
        raise NeuMapError("diffusion time must be nonnegative")
    s = sigma[1 : d + 1]
    if not _is_integer(t) and np.any(s < 0):
        raise NegativeEigenvalueFractionalTimeError(
            "fractional diffusion time with a negative eigenvalue among the retained ones"
        )
    return vectors[:, 1 : d + 1] * np.power(s, t)


def neumap_embed(dec: SpectralDecomposition, t: float = 1, d: int = 2, basis: Basis = "left") -> EmbeddingMatrix:
    """Neumann map: coordinate j of vertex i is ``sigma_{j+1}^t b_{j+1}(i)``.

    ``basis='left'`` uses the left eigenvectors ``T^{1/2} u``; ``'right'`` uses
    the right eigenvectors ``T^{-1/2} u``, whose Euclidean distances reproduce
    the reflecting walk's diffusion distance (:func:`diffusion_distance_sq`).
    """
    coords = scaled_coordinates(dec.sigma, dec.basis(basis), t, d)
    return EmbeddingMatrix(coords, float(t), basis, sigma=dec.sigma[1 : d + 1].copy())


def _check_time(t) -> int:
    if isinstance(t, bool) or not _is_integer(t):
        raise NonIntegerTimeError(f"diffusion time must be an integer, got {t!r}")
    if t < 0:
        raise NonIntegerTimeError("diffusion time must be nonnegative")
    return int(t)


def diffusion_distance_sq(dec: SpectralDecomposition, t: int, i: int, k: int) -> float:
    """Squared diffusion distance between kept vertices ``i`` and ``k``.

    Equals ``sum_j (R^t[i, j] - R^t[k, j])^2 / d(j)`` exactly when ``dec`` is a
    full decomposition; a truncated one gives the leading-term approximation.
    ``i`` and ``k`` index rows of the kept set.
    """
    t = _check_time(t)
    m = dec.U.shape[0]
    for v in (i, k):
        if not 0 <= v < m:
            raise IndexOutOfRangeError(f"vertex {v} outside [0, {m})")
    diff = dec.V_right[i, 1:] - dec.V_right[k, 1:]
    return float(np.sum(dec.sigma[1:] ** (2 * t) * diff * diff))


def pairwise_diffusion_distances_sq(dec: SpectralDecomposition, t: int) -> np.ndarray:
    """All-pairs version of :func:`diffusion_distance_sq`."""
    t = _check_time(t)
    Z = dec.V_right[:, 1:] * dec.sigma[1:] ** t
    sq = np.sum(Z * Z, axis=1)
    D = sq[:, None] + sq[None, :] - 2.0 * Z @ Z.T
    np.maximum(D, 0.0, out=D)
    np.fill_diagonal(D, 0.0)
    return D


def walk_probability_oracle(sys: NeumannSystem, t: int) -> np.ndarray:
    """``R^t`` by repeated multiplication; deliberately avoids the eigenbasis."""
    t = _check_time(t)
    P = np.eye(sys.R.shape[0])
    for _ in range(t):
        P = P @ sys.R
    return P


def neumann_extend(dec: SpectralDecomposition, p: SubgraphPartition, g_values) -> np.ndarray:
    """Extend eigenvectors of ``N`` from the kept set to the boundary.

    ``g(x) = sum_{y in S} w(x, y) g(y) / sqrt(dd(x) d(y))`` where ``dd(x)`` is the
    boundary degree (weight from ``x`` into the kept set) and ``d(y)`` the
    ambient degree. Accepts a vector or a matrix of column vectors and returns
    the same layout with one row per boundary vertex.
    """
    g = np.asarray(g_values, dtype=float)
    if g.shape[0] != len(p.keep):
        raise NeuMapError(f"expected {len(p.keep)} values per vector, got {g.shape[0]}")
    if p.boundary.size == 0:
        return np.zeros((0,) + g.shape[1:])
    dd = p.t_delta
    if np.any(dd < MIN_BOUNDARY_DEGREE):
        raise ZeroBoundaryDegreeError("boundary vertex with zero degree into the kept set")
    scaled = g / np.sqrt(p.t_s).reshape((-1,) + (1,) * (g.ndim - 1))
    out = p.B @ scaled
    return out / np.sqrt(dd).reshape((-1,) + (1,) * (g.ndim - 1))


def neumann_boundary_values(p: SubgraphPartition, f_keep) -> np.ndarray:
    """Boundary values making the discrete normal derivative vanish.

    Each boundary vertex gets the ``w``-weighted average of its kept neighbors.
    """
    f = np.asarray(f_keep, dtype=float)
    if p.boundary.size == 0:
        return np.zeros((0,) + f.shape[1:])
    return (p.B @ f) / p.t_delta.reshape((-1,) + (1,) * (f.ndim - 1))


@dataclass(frozen=True, eq=False)
class NeumannEigenpair:
    """A Neumann eigenvalue with its eigenfunction on the kept set and boundary."""

    lambda_N: float
    u: np.ndarray
    f_boundary: np.ndarray
    partition: SubgraphPartition

    @property
    def f_ext(self) -> np.ndarray:
        """Eigenfunction on all vertices; NaN away from the kept set and boundary."""
        p = self.partition
        f = np.full(p.graph.n, np.nan)
        f[p.keep] = self.u
        f[p.boundary] = self.f_boundary
        return f


def neumann_eigenpair(dec: SpectralDecomposition, p: SubgraphPartition, index: int) -> NeumannEigenpair:
    """Eigenpair ``index`` (0 = stationary) as a Neumann eigenfunction.

    ``u = T^{-1/2} U[:, index]`` solves ``L_N u = lambda T_S u`` with
    ``lambda = 1 - sigma``; boundary values come from the Neumann condition.
    """
    if not 0 <= index < len(dec.sigma):
        raise IndexOutOfRangeError(f"eigenpair {index} not available")
    u = dec.V_right[:, index].copy()
    return NeumannEigenpair(1.0 - float(dec.sigma[index]), u, neumann_boundary_values(p, u), p)


def generalized_residual(sys: NeumannSystem, pair: NeumannEigenpair) -> float:
    """Max-norm of ``L_N u - lambda T_S u``."""
    r = sys.L_N @ pair.u - pair.lambda_N * sys.partition.t_s * pair.u
    return float(np.abs(r).max())


def neumann_condition_residual(p: SubgraphPartition, f_keep, f_boundary) -> float:
    """Max over boundary vertices of ``|sum_y w(x, y) (f(x) - f(y))|``."""
    if p.boundary.size == 0:
        return 0.0
    f_keep = np.asarray(f_keep, dtype=float)
    f_boundary = np.asarray(f_boundary, dtype=float)
    r = p.t_delta * f_boundary - p.B @ f_keep
    return float(np.abs(r).max())


def ambient_eigen_residual(p: SubgraphPartition, pair: NeumannEigenpair) -> float:
    """Max over kept vertices of ``|L_{V*} f(x) - lambda d(x) f(x)|``.

    ``L_{V*}`` is the Laplacian of the graph on kept plus boundary vertices,
    evaluated with ambient degrees.
    """
    u, fb = pair.u, pair.f_boundary
    Lf = p.t_s * u - p.W_S @ u
    if p.boundary.size:
        Lf -= p.B.T @ fb
    return float(np.abs(Lf - pair.lambda_N * p.t_s * u).max())


def rayleigh_quotient(p: SubgraphPartition, f_keep, f_boundary) -> float:
    """Neumann Rayleigh quotient summed edge by edge over ``E_S`` and the boundary edges."""
    f = np.asarray(f_keep, dtype=float)
    fb = np.asarray(f_boundary, dtype=float)
    inner = 0.5 * np.sum(p.W_S * (f[:, None] - f[None, :]) ** 2)
    outer = np.sum(p.B * (fb[:, None] - f[None, :]) ** 2) if p.boundary.size else 0.0
    return float((inner + outer) / np.sum(f * f * p.t_s))


@dataclass(frozen=True)
class RayleighReport:
    lambda_1N: float
    min_quotient: float
    trials: int


def verify_rayleigh_minimum(
    p: SubgraphPartition, lambda_1N: float, trials: int = 1000, seed: int = 0, tol: float = 1e-8
) -> RayleighReport:
    """Sample admissible functions and check none beats ``lambda_1N``.

    Each trial draws a Gaussian vector on the kept set, removes its component
    along the constants in the ``T_S`` inner product and fills the boundary by
    the Neumann condition.

    Raises
    ------
    RayleighViolation
        If some sampled quotient falls below ``lambda_1N - tol``.
    """
    rng = np.random.default_rng(seed)
    t_s = p.t_s
    best = np.inf
    for _ in range(trials):
        f = rng.standard_normal(len(t_s))
        f -= (f @ t_s) / t_s.sum()
        q = rayleigh_quotient(p, f, neumann_boundary_values(p, f))
        if q < lambda_1N - tol:
            raise RayleighViolation(f"sampled quotient {q!r} undercuts lambda_1 = {lambda_1N!r}")
        best = min(best, q)
    return RayleighReport(float(lambda_1N), float(best), trials)
