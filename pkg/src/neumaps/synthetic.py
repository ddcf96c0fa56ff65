"""Synthetic stand-in for a torsion-angle trajectory.

Points lie near a circle embedded in a higher-dimensional space and are
parameterized by an angle ``theta``. Three dense arcs at ``pi/3``, ``pi`` and
``5pi/3`` mimic the gauche/anti/gauche wells of a dihedral angle; a uniform
background fills the arcs between them. No sample falls within about one
radian of ``theta = 0``, so the curve is open and ``theta`` is recoverable as
a single monotone coordinate.
"""
from __future__ import annotations

import numpy as np

WELL_CENTERS = (np.pi, np.pi / 3, 5 * np.pi / 3)
SUPPORT = (np.pi / 3 - 0.5, 5 * np.pi / 3 + 0.5)

# Marking intervals for the surrogate: the well centers with halfwidths in the
# 2:1:1 ratio used for the anti/gauche states, scaled so that about 10% of the
# default dataset is marked.
SURROGATE_INTERVALS = ((np.pi, 0.095), (np.pi / 3, 0.0475), (5 * np.pi / 3, 0.0475))


def three_arc_circle(
    n: int = 10_000,
    seed: int = 0,
    dim: int = 42,
    noise: float = 0.008,
    well_sd: float = 0.5,
    weights=(0.3, 0.15, 0.15, 0.4),
):
    """Sample the surrogate dataset.

    Parameters
    ----------
    n : int
        Number of samples.
    seed : int
        Seed for ``numpy.random.Generator(PCG64(seed))``.
    dim : int
        Ambient dimension; the circle spans a random 2-plane.
    noise : float
        Standard deviation of isotropic Gaussian noise added in ambient space.
    well_sd : float
        Spread of each well (truncated normal, restricted to the support).
    weights : sequence of 4 floats
        Mixture weights for the anti well, the two gauche wells and the
        uniform background.

    Returns
    -------
    X : ndarray (n, dim)
    theta : ndarray (n,)
    """
    weights = np.asarray(weights, dtype=float)
    weights = weights / weights.sum()
    rng = np.random.Generator(np.random.PCG64(seed))
    lo, hi = SUPPORT
    comp = rng.choice(4, size=n, p=weights)
    theta = np.empty(n)
    for j, center in enumerate(WELL_CENTERS):
        idx = np.flatnonzero(comp == j)
        vals = rng.normal(center, well_sd, idx.size)
        out = (vals < lo) | (vals > hi)
        while out.any():
            vals[out] = rng.normal(center, well_sd, int(out.sum()))
            out = (vals < lo) | (vals > hi)
        theta[idx] = vals
    bg = comp == 3
    theta[bg] = rng.uniform(lo, hi, int(bg.sum()))

    frame, _ = np.linalg.qr(rng.normal(size=(dim, 2)))
    X = np.column_stack([np.cos(theta), np.sin(theta)]) @ frame.T
    X += rng.normal(scale=noise, size=X.shape)
    return X, theta
