"""Config-driven runs: load data, mark landmarks, embed, extend, score, write artifacts.

A run writes into its output directory:

``embedding.csv``
    One row per embedded point (ascending index), ``d`` columns.
``boundary_extension.csv``
    Neumann method only: the embedding extended to the boundary vertices
    (ascending index, listed in ``manifest.json``).
``metrics.json``
    Flat object with keys ``nmi, acc, slope, stderr, inertia, seed``; a key
    is ``null`` when its inputs (labels, collective variable, k) are absent.
``selection.json``
    Marked indices, scheme, parameters and seed.
``manifest.json``
    Fully resolved configuration, including the bandwidth actually used.
"""
from __future__ import annotations

import dataclasses
import errno
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import diffusion_map, roseland
from .errors import ConfigError, MismatchedInputsError, NeuMapError
from .graph import partition
from .kernels import gaussian_affinity, load_point_cloud, maxmin_bandwidth
from .landmarks import (
    LandmarkSelection,
    select_delta_net,
    select_every_kth,
    select_random,
    select_threshold,
)
from .metrics import acc, kmeans, nmi, slope_stderr
from .neumann import (
    neumann_condition_residual,
    neumann_extend,
    neumann_laplacian,
    neumap_embed,
    spectral,
)

SCHEMES = ("random", "every_kth", "threshold", "delta_net")
METHODS = ("neumap", "dmap", "roseland")
EXTENSION_TOL = 1e-8


@dataclass(frozen=True)
class PipelineConfig:
    input: str
    output: str = "out"
    label_col: int | None = None
    cv_col: int | None = None
    epsilon: float | None = None
    c: float = 2.0
    zero_diagonal: bool = True
    scheme: str = "random"
    fraction: float = 0.25
    stride: int = 10
    intervals: list | None = None
    delta: float | None = None
    method: str = "neumap"
    t: float = 1
    d: int = 2
    basis: str = "left"
    dmap_points: str = "all"
    k: int | None = None
    restarts: int = 10
    seed: int = 0

    @classmethod
    def from_dict(cls, raw: dict) -> "PipelineConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(raw) - names)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        if "input" not in raw:
            raise ConfigError("config needs an 'input' path")
        cfg = cls(**raw)
        try:
            cfg.validate()
        except TypeError as exc:
            raise ConfigError(f"bad config value: {exc}") from exc
        return cfg

    @classmethod
    def load(cls, path, overrides: dict | None = None) -> "PipelineConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text())
        except FileNotFoundError:
            raise
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        raw.update(overrides or {})
        return cls.from_dict(raw)

    def validate(self) -> None:
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.basis not in ("left", "right"):
            raise ConfigError(f"basis must be 'left' or 'right', got {self.basis!r}")
        if self.dmap_points not in ("all", "kept"):
            raise ConfigError(f"dmap_points must be 'all' or 'kept', got {self.dmap_points!r}")
        if self.scheme == "threshold" and (self.cv_col is None or not self.intervals):
            raise ConfigError("threshold scheme needs cv_col and intervals")
        if self.scheme == "delta_net" and self.delta is None:
            raise ConfigError("delta_net scheme needs delta")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ConfigError("epsilon must be positive")
        if not isinstance(self.d, int) or self.d < 1:
            raise ConfigError("d must be a positive integer")
        if self.t < 0:
            raise ConfigError("t must be nonnegative")
        if self.k is not None and (not isinstance(self.k, int) or self.k < 2):
            raise ConfigError("k must be an integer >= 2")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class Dataset:
    X: np.ndarray
    labels: np.ndarray | None
    cv: np.ndarray | None
    graphs: dict = field(default_factory=dict)


def load_dataset(cfg: PipelineConfig) -> Dataset:
    path = Path(cfg.input)
    if not path.is_file():
        raise FileNotFoundError(errno.ENOENT, "input file not found", str(path))
    X, labels, cv = load_point_cloud(path, cfg.label_col, cfg.cv_col)
    return Dataset(X, labels, cv)


def select_landmarks(cfg: PipelineConfig, data: Dataset) -> LandmarkSelection:
    n = data.X.shape[0]
    if cfg.scheme == "random":
        return select_random(n, cfg.fraction, cfg.seed)
    if cfg.scheme == "every_kth":
        return select_every_kth(n, cfg.stride)
    if cfg.scheme == "threshold":
        return select_threshold(data.cv, cfg.intervals)
    return select_delta_net(data.X, cfg.delta)


def _full_graph(cfg: PipelineConfig, data: Dataset, epsilon: float):
    key = (epsilon, cfg.zero_diagonal)
    if key not in data.graphs:
        data.graphs[key] = gaussian_affinity(data.X, epsilon, cfg.zero_diagonal)
    return data.graphs[key]


def _embed(cfg, data, sel, epsilon):
    """Returns (coords, vertices, boundary_coords, boundary_vertices, sigma)."""
    if cfg.method == "neumap":
        g = _full_graph(cfg, data, epsilon)
        p = partition(g, sel.kept)
        dec = spectral(neumann_laplacian(p), cfg.d + 1)
        emb = neumap_embed(dec, cfg.t, cfg.d, cfg.basis)
        ext = neumann_extend(dec, p, dec.U[:, 1 : cfg.d + 1])
        root_dd = np.sqrt(p.t_delta)[:, None]
        ext = ext * root_dd if cfg.basis == "left" else ext / root_dd
        ext = ext * emb.sigma**cfg.t
        _check_extension(p, emb.coords, ext, cfg.basis)
        return emb.coords, p.keep, ext, p.boundary, emb.sigma
    if cfg.method == "dmap":
        if cfg.dmap_points == "all":
            g, vertices = _full_graph(cfg, data, epsilon), np.arange(data.X.shape[0])
        else:
            g, vertices = gaussian_affinity(data.X[sel.kept], epsilon, cfg.zero_diagonal), sel.kept
        res = diffusion_map(g, cfg.t, cfg.d)
        return res.embedding.coords, vertices, None, None, res.embedding.sigma
    res = roseland(data.X, sel.marked, epsilon, cfg.t, cfg.d, sel.kept)
    return res.embedding.coords, sel.kept, None, None, res.embedding.sigma


def _check_extension(p, coords, ext, basis):
    # undo the basis scaling so both sides are eigenfunction values
    if basis == "left":
        f_keep, f_bnd = coords / p.t_s[:, None], ext / p.t_delta[:, None]
    else:
        f_keep, f_bnd = coords, ext
    for j in range(coords.shape[1]):
        r = neumann_condition_residual(p, f_keep[:, j], f_bnd[:, j])
        if r > EXTENSION_TOL:
            raise NeuMapError(f"boundary extension violates the Neumann condition (residual {r:.3g})")


def _score(cfg, coords, labels, cv) -> dict:
    metrics = {"nmi": None, "acc": None, "slope": None, "stderr": None, "inertia": None, "seed": cfg.seed}
    k = cfg.k
    if k is None and labels is not None:
        k = int(np.unique(labels).size)
    if k is not None and k >= 2:
        ca = kmeans(coords, k, cfg.restarts, cfg.seed)
        metrics["inertia"] = ca.inertia
        if labels is not None:
            metrics["nmi"] = nmi(ca.labels, labels)
            metrics["acc"] = acc(ca.labels, labels)
    if cv is not None:
        x = coords[:, 0]
        sd = x.std()
        if sd > 0:
            metrics["slope"], metrics["stderr"] = slope_stderr((x - x.mean()) / sd, cv)
    return metrics


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(a: np.ndarray) -> str:
    return "".join(",".join(format(v, ".17g") for v in row) + "\n" for row in np.atleast_2d(a))


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def run(cfg: PipelineConfig, selection: LandmarkSelection | None = None, data: Dataset | None = None) -> dict:
    """Execute one pipeline run and write its artifacts; returns the metrics and paths."""
    cfg.validate()
    data = data if data is not None else load_dataset(cfg)
    sel = selection if selection is not None else select_landmarks(cfg, data)
    if sel.n != data.X.shape[0]:
        raise MismatchedInputsError(f"selection covers {sel.n} points but the input has {data.X.shape[0]}")
    epsilon = cfg.epsilon if cfg.epsilon is not None else maxmin_bandwidth(data.X, cfg.c)

    coords, vertices, ext, boundary, sigma = _embed(cfg, data, sel, epsilon)
    labels = data.labels[vertices] if data.labels is not None else None
    cv = data.cv[vertices] if data.cv is not None else None
    metrics = _score(cfg, coords, labels, cv)

    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    _atomic_write(out / "embedding.csv", _csv(coords))
    if ext is not None:
        _atomic_write(out / "boundary_extension.csv", _csv(ext) if len(ext) else "")
    _atomic_write(out / "metrics.json", _json(metrics))
    _atomic_write(out / "selection.json", _json(sel.to_json()))
    manifest = {
        "version": __version__,
        "config": cfg.to_dict(),
        "epsilon": epsilon,
        "n": int(data.X.shape[0]),
        "n_marked": int(len(sel.marked)),
        "embedded": "kept" if len(vertices) != data.X.shape[0] else "all",
        "eigenvalues": [float(s) for s in sigma],
        "boundary": boundary.tolist() if boundary is not None else None,
    }
    _atomic_write(out / "manifest.json", _json(manifest))
    return {"metrics": metrics, "output": str(out), "epsilon": epsilon, "selection": sel}


def compare(cfg_a: PipelineConfig, cfg_b: PipelineConfig, seeds=None, output=None) -> dict:
    """Run two configurations on identical landmark selections.

    For every seed the selection is computed once from ``cfg_a`` and injected
    into both runs. Artifacts go to ``<output>/seed_<s>/{a,b}``; the table is
    returned and written to ``<output>/comparison.json``.
    """
    if Path(cfg_a.input).resolve() != Path(cfg_b.input).resolve():
        raise MismatchedInputsError(f"inputs differ: {cfg_a.input} vs {cfg_b.input}")
    if cfg_a.seed != cfg_b.seed:
        raise MismatchedInputsError(f"seeds differ: {cfg_a.seed} vs {cfg_b.seed}")
    if (cfg_a.label_col, cfg_a.cv_col) != (cfg_b.label_col, cfg_b.cv_col):
        raise MismatchedInputsError("label/cv columns differ")
    seeds = [cfg_a.seed] if seeds is None else [int(s) for s in seeds]
    out = Path(output if output is not None else cfg_a.output)
    data = load_dataset(cfg_a)
    rows = []
    for s in seeds:
        a = dataclasses.replace(cfg_a, seed=s, output=str(out / f"seed_{s}" / "a"))
        b = dataclasses.replace(cfg_b, seed=s, output=str(out / f"seed_{s}" / "b"))
        sel = select_landmarks(a, data)
        ra = run(a, sel, data)
        rb = run(b, sel, data)
        rows.append({"seed": s, "a": ra["metrics"], "b": rb["metrics"]})
    report = {"a": cfg_a.method, "b": cfg_b.method, "input": cfg_a.input, "rows": rows}
    out.mkdir(parents=True, exist_ok=True)
    _atomic_write(out / "comparison.json", _json(report))
    return report
