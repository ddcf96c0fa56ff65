"""Shared fixtures: the two hand-worked graphs and a suite of small random systems."""
import sys
import warnings

import mpmath
import numpy as np
import pytest

from neumaps.graph import build_graph, partition
from neumaps.neumann import neumann_laplacian, spectral

N_RANDOM = 200


def triangle():
    return build_graph(np.ones((3, 3)) - np.eye(3))


def path3():
    return build_graph(np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]]))


def random_graph(seed):
    """Symmetric nonnegative W on 3..12 vertices, no isolated vertex.

    Roughly half the graphs are sparse and a third carry self-loops, so the
    boundary is sometimes a strict subset of the complement.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 13))
    W = rng.uniform(0.05, 2.0, size=(n, n))
    if seed % 2:
        W *= rng.uniform(size=(n, n)) < 0.45
    W = np.triu(W, 1)
    W = W + W.T
    if seed % 3 == 0:
        W[np.diag_indices(n)] = rng.uniform(0, 1, n)
    # a ring guarantees every vertex has a neighbour
    for i in range(n):
        j = (i + 1) % n
        if W[i, j] == 0:
            W[i, j] = W[j, i] = rng.uniform(0.05, 2.0)
    keep = np.sort(rng.choice(n, size=int(rng.integers(2, n)), replace=False))
    return build_graph(W), keep


def random_system(seed):
    g, keep = random_graph(seed)
    p = partition(g, keep)
    sys = neumann_laplacian(p)
    return g, p, sys, spectral(sys)


@pytest.fixture(scope="session")
def random_systems():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        return [random_system(s) for s in range(N_RANDOM)]



def exact_distance_oracle(g, keep, times=(1, 2, 5), dps=50):
    """``sum_j (R^t[i, j] - R^t[k, j])^2 / d_j`` for all kept pairs, in 50-digit arithmetic.

    ``R`` is rebuilt from the raw weights as ``T^-1 W_SS + T^-1 B^T T_delta^-1 B``
    and raised to each power by plain multiplication. Working precision far
    beyond float64 keeps the result accurate even when two rows of ``R^t``
    agree to many digits, where a float64 subtraction would be pure noise.
    Returns ``{t: float array}``.
    """
    with mpmath.workdps(dps):
        W = np.vectorize(mpmath.mpf, otypes=[object])(g.W)
        keep = np.asarray(keep)
        out = np.setdiff1d(np.arange(g.n), keep)
        d = W.sum(axis=1)
        K = W[np.ix_(keep, keep)].copy()
        for x in out:
            w = W[x, keep]
            tot = w.sum()
            if tot > 0:
                K = K + np.outer(w, w) / tot
        dk = d[keep]
        R = K / dk[:, None]
        result, P, done = {}, np.eye(len(keep), dtype=object) * mpmath.mpf(1), 0
        for t in sorted(times):
            while done < t:
                P = P.dot(R)
                done += 1
            diff = P[:, None, :] - P[None, :, :]
            D = (diff * diff / dk).sum(axis=2)
            result[t] = np.array([[float(v) for v in row] for row in D])
        return result


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
