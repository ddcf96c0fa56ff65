"""Neumann eigenmaps: landmark embeddings from the Neumann Laplacian of a subgraph."""

__version__ = "0.1.0"

from .baselines import dmap_embed, roseland_embed
from .graph import WeightedGraph, SubgraphPartition, build_graph, graph_laplacian, partition
from .kernels import gaussian_affinity, maxmin_bandwidth
from .landmarks import (
    LandmarkSelection,
    select_delta_net,
    select_every_kth,
    select_random,
    select_threshold,
)
from .metrics import acc, kmeans, nmi, slope_stderr
from .neumann import (
    EmbeddingMatrix,
    NeumannSystem,
    SpectralDecomposition,
    diffusion_distance_sq,
    neumann_extend,
    neumann_laplacian,
    neumap_embed,
    spectral,
    verify_rayleigh_minimum,
    walk_probability_oracle,
)

__all__ = [
    "EmbeddingMatrix",
    "LandmarkSelection",
    "NeumannSystem",
    "SpectralDecomposition",
    "SubgraphPartition",
    "WeightedGraph",
    "acc",
    "build_graph",
    "diffusion_distance_sq",
    "dmap_embed",
    "gaussian_affinity",
    "graph_laplacian",
    "kmeans",
    "maxmin_bandwidth",
    "neumann_extend",
    "neumann_laplacian",
    "neumap_embed",
    "nmi",
    "partition",
    "roseland_embed",
    "select_delta_net",
    "select_every_kth",
    "select_random",
    "select_threshold",
    "slope_stderr",
    "spectral",
    "verify_rayleigh_minimum",
    "walk_probability_oracle",
]
