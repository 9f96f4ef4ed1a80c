"""hygraph: one data model for simple graphs, hypergraphs and hierarchies.

The package couples an immutable hybrid-graph container with hyperedge
construction pipelines, subgraph samplers with hyperedge masking, summary
statistics, and a small from-scratch training harness for graph neural
networks, including a label-probing combiner that mixes two base networks.
"""

from . import construct, io, nn, sampling, stats, synthetic
from .graph import (
    GraphKind,
    HybridGraph,
    InvalidGraphError,
    Task,
    classify,
    duplicate_hyperedges,
    structurally_equal,
    to_hypergraph,
    to_simple,
    to_two_level_hierarchy,
    validate,
)
from .sampling import SampledSubgraph, SamplerSpec, induce, run_sampler
from .stats import GraphStats, compute_stats, sampler_report

__version__ = "0.1.0"

__all__ = [
    "GraphKind",
    "GraphStats",
    "HybridGraph",
    "InvalidGraphError",
    "SampledSubgraph",
    "SamplerSpec",
    "Task",
    "classify",
    "compute_stats",
    "construct",
    "duplicate_hyperedges",
    "induce",
    "io",
    "nn",
    "run_sampler",
    "sampler_report",
    "sampling",
    "stats",
    "structurally_equal",
    "synthetic",
    "to_hypergraph",
    "to_simple",
    "to_two_level_hierarchy",
    "validate",
    "__version__",
]
