"""Erasure-stability comparison on the synthetic torsion surrogate.

For each marking scheme the first nontrivial coordinate is computed three
ways (diffusion map on all points, Neumann map on the kept points, diffusion
map on the kept points alone) and regressed against the true angle. The
coordinate is standardized first so that standard errors are comparable
across methods.
"""
from __future__ import annotations

import numpy as np

from .baselines import diffusion_map
from .graph import partition
from .kernels import gaussian_affinity, maxmin_bandwidth
from .landmarks import delta_for_count, select_delta_net, select_every_kth, select_threshold
from .metrics import slope_stderr
from .neumann import neumann_laplacian, spectral
from .synthetic import SURROGATE_INTERVALS


def angle_stderr(psi, theta) -> float:
    psi = np.asarray(psi, dtype=float)
    return slope_stderr((psi - psi.mean()) / psi.std(), theta)[1]


def first_coordinate_dmap(g) -> np.ndarray:
    return diffusion_map(g, t=0, d=1).embedding.coords[:, 0]


def first_coordinate_neumap(g, kept) -> np.ndarray:
    dec = spectral(neumann_laplacian(partition(g, kept)), 2)
    return dec.V_right[:, 1]


def marking_schemes(X, theta, stride=10, intervals=SURROGATE_INTERVALS, net_fraction=0.1) -> dict:
    n = X.shape[0]
    return {
        "every_kth": select_every_kth(n, stride),
        "threshold": select_threshold(theta, intervals),
        "delta_net": select_delta_net(X, delta_for_count(X, round(net_fraction * n))),
    }


def stability_report(X, theta, c: float = 2.0, schemes: dict | None = None) -> dict:
    """Standard errors of the angle fit for each scheme and method.

    Returns ``{"epsilon", "dmap_full", "schemes": {name: {"fraction",
    "neumap", "dmap_kept"}}}``.
    """
    epsilon = maxmin_bandwidth(X, c)
    schemes = schemes if schemes is not None else marking_schemes(X, theta)
    g = gaussian_affinity(X, epsilon)
    report = {"epsilon": epsilon, "dmap_full": angle_stderr(first_coordinate_dmap(g), theta), "schemes": {}}
    neu = {name: angle_stderr(first_coordinate_neumap(g, sel.kept), theta[sel.kept]) for name, sel in schemes.items()}
    del g
    for name, sel in schemes.items():
        gk = gaussian_affinity(X[sel.kept], epsilon)
        report["schemes"][name] = {
            "fraction": sel.fraction,
            "neumap": neu[name],
            "dmap_kept": angle_stderr(first_coordinate_dmap(gk), theta[sel.kept]),
        }
        del gk
    return report
