import numpy as np
import pytest

from neumaps.experiments import angle_stderr, marking_schemes, stability_report
from neumaps.synthetic import SUPPORT, SURROGATE_INTERVALS, three_arc_circle


class TestSurrogate:
    def test_shape_and_support(self):
        X, theta = three_arc_circle(2000, seed=1, dim=10)
        assert X.shape == (2000, 10)
        assert theta.min() >= SUPPORT[0] and theta.max() <= SUPPORT[1]

    def test_deterministic(self):
        a, b = three_arc_circle(500, seed=4), three_arc_circle(500, seed=4)
        np.testing.assert_array_equal(a[0], b[0])
        assert not np.array_equal(a[0], three_arc_circle(500, seed=5)[0])

    def test_points_near_unit_circle_in_a_plane(self):
        X, theta = three_arc_circle(1000, seed=0, dim=20, noise=0.0)
        np.testing.assert_allclose(np.linalg.norm(X, axis=1), 1.0, atol=1e-12)
        assert np.linalg.matrix_rank(X, tol=1e-8) == 2
        # chord lengths reproduce angle differences
        chord = np.linalg.norm(X[0] - X[1])
        assert chord == pytest.approx(2 * abs(np.sin((theta[0] - theta[1]) / 2)), abs=1e-12)

    def test_wells_are_dense(self):
        _, theta = three_arc_circle(20_000, seed=2)
        hist, edges = np.histogram(theta, bins=40, range=SUPPORT)
        centers = 0.5 * (edges[1:] + edges[:-1])
        dense = hist[np.argmin(np.abs(centers - np.pi))]
        sparse = hist[np.argmin(np.abs(centers - 2 * np.pi / 3))]
        assert dense > 1.5 * sparse

    def test_threshold_marks_about_ten_percent(self):
        for seed in range(3):
            _, theta = three_arc_circle(10_000, seed=seed)
            hit = np.zeros(theta.size, dtype=bool)
            for c, h in SURROGATE_INTERVALS:
                hit |= np.abs(theta - c) <= h
            assert 0.08 < hit.mean() < 0.12


class TestStability:
    def test_angle_stderr_scale_free(self):
        rng = np.random.default_rng(0)
        theta = rng.uniform(0, 3, 200)
        psi = theta + rng.normal(scale=0.05, size=200)
        assert angle_stderr(psi, theta) == pytest.approx(angle_stderr(-7.0 * psi + 3.0, theta), rel=1e-10)

    def test_small_report(self):
        X, theta = three_arc_circle(1500, seed=0, noise=0.02)
        schemes = marking_schemes(X, theta)
        assert sorted(schemes) == ["delta_net", "every_kth", "threshold"]
        rep = stability_report(X, theta, schemes=schemes)
        assert rep["epsilon"] > 0 and rep["dmap_full"] > 0
        for row in rep["schemes"].values():
            assert 0.05 < row["fraction"] < 0.15
            assert np.isfinite(row["neumap"]) and np.isfinite(row["dmap_kept"])
            # the first coordinate tracks the angle closely
            assert row["neumap"] < 0.05
