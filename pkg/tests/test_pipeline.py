"""Config-driven runs, artifacts and the command line."""
import json

import numpy as np
import pytest

from neumaps.cli import main
from neumaps.errors import ConfigError, MismatchedInputsError
from neumaps.graph import partition
from neumaps.kernels import gaussian_affinity
from neumaps.pipeline import PipelineConfig, compare, run


@pytest.fixture
def blobs(tmp_path):
    """Three labelled blobs with a 'cv' column (x coordinate) ahead of the label."""
    rng = np.random.default_rng(0)
    centers = np.array([[0.0, 0.0], [4.0, 0.0], [2.0, 3.5]])
    y = np.repeat([0, 1, 2], 40)
    X = centers[y] + rng.normal(scale=0.6, size=(120, 2))
    path = tmp_path / "blobs.csv"
    np.savetxt(path, np.column_stack([X, X[:, 0], y]), delimiter=",", fmt="%.17g")
    return path


def _cfg(path, out, **kw):
    base = dict(input=str(path), output=str(out), label_col=-1, cv_col=2, fraction=0.25, seed=3)
    base.update(kw)
    return PipelineConfig.from_dict(base)


def _read_csv(path):
    return np.loadtxt(path, delimiter=",", ndmin=2)


class TestRun:
    def test_neumap_artifacts(self, blobs, tmp_path):
        out = tmp_path / "run"
        report = run(_cfg(blobs, out))
        names = sorted(p.name for p in out.iterdir())
        assert names == ["boundary_extension.csv", "embedding.csv", "manifest.json", "metrics.json", "selection.json"]
        metrics = json.loads((out / "metrics.json").read_text())
        assert sorted(metrics) == ["acc", "inertia", "nmi", "seed", "slope", "stderr"]
        assert metrics["acc"] > 0.9 and metrics["seed"] == 3
        sel = json.loads((out / "selection.json").read_text())
        assert len(sel["marked"]) == 30 and sel["scheme"] == "random" and sel["seed"] == 3
        emb = _read_csv(out / "embedding.csv")
        assert emb.shape == (90, 2)
        assert report["metrics"] == metrics

    @pytest.mark.parametrize("basis", ["left", "right"])
    def test_boundary_file_satisfies_neumann_condition(self, blobs, tmp_path, basis):
        # rebuild the graph from the input and recheck the written files independently
        out = tmp_path / basis
        run(_cfg(blobs, out, basis=basis))
        manifest = json.loads((out / "manifest.json").read_text())
        emb, ext = _read_csv(out / "embedding.csv"), _read_csv(out / "boundary_extension.csv")
        data = _read_csv(blobs)[:, :2]
        g = gaussian_affinity(data, manifest["epsilon"])
        marked = json.loads((out / "selection.json").read_text())["marked"]
        p = partition(g, np.setdiff1d(np.arange(120), marked))
        assert manifest["boundary"] == p.boundary.tolist()
        assert ext.shape == (len(p.boundary), 2)
        f_keep = emb / p.t_s[:, None] if basis == "left" else emb
        f_bnd = ext / p.t_delta[:, None] if basis == "left" else ext
        for j in range(2):
            r = p.t_delta * f_bnd[:, j] - p.B @ f_keep[:, j]
            assert np.abs(r).max() <= 1e-8

    def test_dmap_has_no_boundary_file(self, blobs, tmp_path):
        out = tmp_path / "dmap"
        run(_cfg(blobs, out, method="dmap"))
        assert not (out / "boundary_extension.csv").exists()
        assert _read_csv(out / "embedding.csv").shape == (120, 2)
        run(_cfg(blobs, out, method="dmap", dmap_points="kept"))
        assert _read_csv(out / "embedding.csv").shape == (90, 2)

    def test_roseland(self, blobs, tmp_path):
        out = tmp_path / "rose"
        m = run(_cfg(blobs, out, method="roseland"))["metrics"]
        assert _read_csv(out / "embedding.csv").shape == (90, 2)
        assert 0 <= m["nmi"] <= 1

    def test_metrics_without_labels(self, blobs, tmp_path):
        m = run(_cfg(blobs, tmp_path / "o", label_col=None, cv_col=None))["metrics"]
        assert m["nmi"] is None and m["acc"] is None and m["slope"] is None and m["inertia"] is None

    def test_schemes(self, blobs, tmp_path):
        for extra in (
            dict(scheme="every_kth", stride=4),
            dict(scheme="threshold", intervals=[[2.0, 0.5]]),
            dict(scheme="delta_net", delta=1.5),
        ):
            out = tmp_path / extra["scheme"]
            run(_cfg(blobs, out, **extra))
            sel = json.loads((out / "selection.json").read_text())
            assert sel["scheme"] == extra["scheme"] and sel["marked"]

    def test_manifest_records_bandwidth(self, blobs, tmp_path):
        out = tmp_path / "m"
        report = run(_cfg(blobs, out, c=1.5))
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["epsilon"] == report["epsilon"]
        assert manifest["config"]["c"] == 1.5
        run(_cfg(blobs, out, epsilon=0.7))
        assert json.loads((out / "manifest.json").read_text())["epsilon"] == 0.7

    def test_deterministic(self, blobs, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run(_cfg(blobs, a))
        run(_cfg(blobs, b))
        for name in ("metrics.json", "embedding.csv", "boundary_extension.csv", "selection.json"):
            assert (a / name).read_bytes() == (b / name).read_bytes()


class TestConfig:
    def test_unknown_key(self, blobs):
        with pytest.raises(ConfigError):
            PipelineConfig.from_dict({"input": str(blobs), "colour": 1})

    def test_missing_input_key(self):
        with pytest.raises(ConfigError):
            PipelineConfig.from_dict({"method": "neumap"})

    @pytest.mark.parametrize(
        "bad",
        [
            {"scheme": "lottery"},
            {"method": "pca"},
            {"basis": "middle"},
            {"scheme": "threshold"},
            {"scheme": "delta_net"},
            {"epsilon": -1.0},
            {"d": 0},
            {"k": 1},
            {"t": -1},
        ],
    )
    def test_invalid_values(self, blobs, bad):
        with pytest.raises(ConfigError):
            PipelineConfig.from_dict({"input": str(blobs), **bad})

    def test_round_trip(self, blobs, tmp_path):
        cfg = _cfg(blobs, tmp_path)
        f = tmp_path / "c.json"
        f.write_text(json.dumps(cfg.to_dict()))
        assert PipelineConfig.load(f) == cfg
        assert PipelineConfig.load(f, {"d": 3}).d == 3


class TestCompare:
    def test_shared_selection(self, blobs, tmp_path):
        a = _cfg(blobs, tmp_path / "x")
        b = _cfg(blobs, tmp_path / "x", method="roseland")
        report = compare(a, b, seeds=[0, 1], output=tmp_path / "cmp")
        assert [r["seed"] for r in report["rows"]] == [0, 1]
        for s in (0, 1):
            sa = (tmp_path / "cmp" / f"seed_{s}" / "a" / "selection.json").read_bytes()
            sb = (tmp_path / "cmp" / f"seed_{s}" / "b" / "selection.json").read_bytes()
            assert sa == sb
        assert json.loads((tmp_path / "cmp" / "comparison.json").read_text()) == json.loads(json.dumps(report))

    def test_identical_configs_identical_metrics(self, blobs, tmp_path):
        a = _cfg(blobs, tmp_path / "x")
        report = compare(a, a, seeds=[5], output=tmp_path / "cmp")
        assert report["rows"][0]["a"] == report["rows"][0]["b"]

    def test_mismatched_inputs(self, blobs, tmp_path):
        other = tmp_path / "other.csv"
        other.write_bytes(blobs.read_bytes())
        with pytest.raises(MismatchedInputsError):
            compare(_cfg(blobs, tmp_path), _cfg(other, tmp_path))


class TestCLI:
    def test_run_with_overrides(self, blobs, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"input": str(blobs), "label_col": -1}))
        out = tmp_path / "out"
        code = main(["run", "--config", str(cfg), "--output", str(out), "--method", "dmap", "--d", "3"])
        assert code == 0
        assert _read_csv(out / "embedding.csv").shape == (120, 3)
        assert "nmi" in json.loads(capsys.readouterr().out)

    def test_run_without_config_file(self, blobs, tmp_path):
        assert main(["run", "--input", str(blobs), "--output", str(tmp_path / "o"), "--label-col", "-1"]) == 0

    def test_missing_input(self, tmp_path, capsys):
        missing = tmp_path / "nope.csv"
        assert main(["run", "--input", str(missing), "--output", str(tmp_path / "o")]) == 2
        err = capsys.readouterr().err
        assert str(missing) in err and err.count("\n") == 1

    def test_missing_config(self, tmp_path, capsys):
        missing = tmp_path / "nope.json"
        assert main(["run", "--config", str(missing)]) == 2
        assert str(missing) in capsys.readouterr().err

    def test_bad_config(self, blobs, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"input": str(blobs), "bogus": True}))
        assert main(["run", "--config", str(cfg)]) == 2
        assert "bogus" in capsys.readouterr().err

    def test_bad_column(self, blobs, tmp_path):
        assert main(["run", "--input", str(blobs), "--output", str(tmp_path / "o"), "--label-col", "9"]) == 2

    def test_numerical_failure_exit_code(self, tmp_path, capsys):
        # two far-apart clumps with a tiny bandwidth: some kernel row underflows
        f = tmp_path / "far.csv"
        np.savetxt(f, np.array([[0.0], [0.001], [0.002], [1e4], [1e4 + 1e-3]]), delimiter=",")
        assert main(["run", "--input", str(f), "--output", str(tmp_path / "o"), "--epsilon", "1e-12", "--fraction", "0.4"]) == 1
        assert "IsolatedVertexError" in capsys.readouterr().err

    def test_compare(self, blobs, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        a.write_text(json.dumps({"input": str(blobs), "label_col": -1}))
        b.write_text(json.dumps({"input": str(blobs), "label_col": -1, "method": "roseland"}))
        assert main(["compare", str(a), str(b), "--seeds", "0", "1", "--output", str(tmp_path / "cmp")]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert len(rows) == 2

    def test_compare_mismatch(self, blobs, tmp_path):
        other = tmp_path / "other.csv"
        other.write_bytes(blobs.read_bytes())
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        a.write_text(json.dumps({"input": str(blobs)}))
        b.write_text(json.dumps({"input": str(other)}))
        assert main(["compare", str(a), str(b)]) == 2

    def test_gen_synthetic(self, tmp_path):
        f = tmp_path / "s.csv"
        assert main(["gen-synthetic", "--output", str(f), "--n", "200", "--dim", "5"]) == 0
        data = _read_csv(f)
        assert data.shape == (200, 6)
        assert np.all((data[:, -1] > 0.5) & (data[:, -1] < 5.8))
