"""Subgraph samplers and node-induced subgraph extraction.

Five samplers produce node sets; ``induce`` turns a node set into a
``SampledSubgraph`` carrying relabeled simple edges, masked hyperedges
(members restricted to the sample, empty ones dropped), inherited features
and labels, and a parent function that falls back to self wherever the
original parent fell outside the sample.

The degree and edge samplers draw without replacement from non-uniform
distributions using the exponential-race trick: each item gets key
``Exp(1) / weight`` and the ``k`` smallest keys win, in key order, which
reproduces sequential weighted draws.
"""

from dataclasses import dataclass

import numpy as np

from .graph import HybridGraph

__all__ = [
    "SampledSubgraph",
    "SamplerSpec",
    "induce",
    "run_sampler",
    "sample_edges",
    "sample_nodes_by_degree",
    "sample_random_walk",
    "sample_uniform_hyperedges",
    "sample_uniform_nodes",
    "weighted_sample_without_replacement",
]

SAMPLER_METHODS = ("node", "edge", "rw", "rand-node", "rand-hyperedge")


@dataclass(frozen=True)
class SamplerSpec:
    """Which sampler to run and its knobs.

    ``budget`` is the node count for ``node`` and ``rand-node``, the edge
    count for ``edge`` and the hyperedge count for ``rand-hyperedge``;
    the walk sampler ignores it and uses ``roots`` and ``walk_length``.
    """

    method: str
    budget: int = 0
    roots: int = 0
    walk_length: int = 0

    def __post_init__(self):
        if self.method not in SAMPLER_METHODS:
            raise ValueError(
                f"unknown sampler method {self.method!r}, "
                f"expected one of {SAMPLER_METHODS}"
            )


@dataclass(frozen=True)
class SampledSubgraph:
    """A node-induced subgraph with bookkeeping back to the parent graph.

    ``node_ids`` are the sampled global ids in ascending order;
    ``hyperedge_ids`` are the global indices of the retained hyperedges.
    All other fields are in local coordinates.
    """

    node_ids: np.ndarray
    node_features: np.ndarray
    simple_edges: np.ndarray
    hyperedges: tuple[tuple[int, ...], ...]
    hyperedge_ids: np.ndarray
    hyperedge_weights: np.ndarray
    hyperedge_features: np.ndarray | None
    parent: np.ndarray
    labels: np.ndarray

    @property
    def num_nodes(self) -> int:
        return len(self.node_ids)

    @property
    def index_map(self) -> dict[int, int]:
        """Global node id -> local index."""
        return {int(v): i for i, v in enumerate(self.node_ids)}

    def to_graph(self, task=None) -> HybridGraph:
        kwargs = {} if task is None else {"task": task}
        return HybridGraph(
            node_features=self.node_features,
            simple_edges=self.simple_edges,
            hyperedges=self.hyperedges,
            hyperedge_weights=self.hyperedge_weights,
            hyperedge_features=self.hyperedge_features,
            parent=self.parent,
            labels=self.labels,
            **kwargs,
        )


def induce(g: HybridGraph, node_ids) -> SampledSubgraph:
    """Extract the subgraph induced by ``node_ids`` (deduplicated, sorted)."""
    ids = np.unique(np.asarray(node_ids, dtype=np.int64))
    if ids.size and (ids[0] < 0 or ids[-1] >= g.num_nodes):
        raise ValueError("node id out of range")
    local = np.full(g.num_nodes, -1, dtype=np.int64)
    local[ids] = np.arange(ids.size)

    edges = g.simple_edges
    if edges.size:
        keep = (local[edges[:, 0]] >= 0) & (local[edges[:, 1]] >= 0)
        sub_edges = local[edges[keep]]
    else:
        sub_edges = np.zeros((0, 2), dtype=np.int64)

    kept_he: list[tuple[int, ...]] = []
    kept_idx: list[int] = []
    for k, e in enumerate(g.hyperedges):
        members = [int(local[v]) for v in e if local[v] >= 0]
        if members:
            kept_he.append(tuple(sorted(members)))
            kept_idx.append(k)
    kept_idx_arr = np.asarray(kept_idx, dtype=np.int64)

    mapped = local[g.parent[ids]]
    parent = np.where(mapped >= 0, mapped, np.arange(ids.size))

    return SampledSubgraph(
        node_ids=ids,
        node_features=g.node_features[ids],
        simple_edges=sub_edges,
        hyperedges=tuple(kept_he),
        hyperedge_ids=kept_idx_arr,
        hyperedge_weights=g.hyperedge_weights[kept_idx_arr]
        if len(g.hyperedges)
        else np.zeros(0, dtype=np.float64),
        hyperedge_features=g.hyperedge_features[kept_idx_arr]
        if g.hyperedge_features is not None
        else None,
        parent=parent,
        labels=g.labels[ids],
    )


def weighted_sample_without_replacement(
    weights: np.ndarray, k: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw ``k`` distinct indices with probability proportional to weight.

    Returns indices in draw order.  Equivalent to repeatedly drawing one
    index proportional to weight and removing it.
    """
    w = np.asarray(weights, dtype=np.float64)
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and non-negative")
    alive = np.flatnonzero(w > 0)
    if k > alive.size:
        raise ValueError(f"cannot draw {k} items from {alive.size} with positive weight")
    keys = rng.exponential(size=alive.size) / w[alive]
    order = np.argsort(keys, kind="stable")[:k]
    return alive[order]


def sample_nodes_by_degree(g: HybridGraph, budget: int, rng) -> SampledSubgraph:
    """Nodes drawn without replacement, probability (degree + 1) squared."""
    if budget < 1 or budget > g.num_nodes:
        raise ValueError(f"budget must be in [1, {g.num_nodes}], got {budget}")
    w = (g.degrees.astype(np.float64) + 1.0) ** 2
    ids = weighted_sample_without_replacement(w, budget, rng)
    return induce(g, ids)


def sample_edges(g: HybridGraph, budget: int, rng) -> SampledSubgraph:
    """Edges drawn without replacement, probability 1/deg(u) + 1/deg(v)."""
    m = g.num_edges
    if budget < 1 or budget > m:
        raise ValueError(f"budget must be in [1, {m}], got {budget}")
    deg = g.degrees.astype(np.float64)
    u, v = g.simple_edges[:, 0], g.simple_edges[:, 1]
    w = 1.0 / deg[u] + 1.0 / deg[v]
    picked = weighted_sample_without_replacement(w, budget, rng)
    return induce(g, g.simple_edges[picked].ravel())


def sample_random_walk(
    g: HybridGraph, roots: int, walk_length: int, rng
) -> SampledSubgraph:
    """Union of uniform random walks from uniformly chosen roots.

    Roots are drawn with replacement; each walk takes up to ``walk_length``
    uniform neighbor steps and halts early at a node with no neighbors.
    """
    if roots < 1:
        raise ValueError(f"roots must be >= 1, got {roots}")
    if walk_length < 0:
        raise ValueError(f"walk_length must be >= 0, got {walk_length}")
    if g.num_nodes == 0:
        raise ValueError("cannot walk an empty graph")
    nbrs = [
        np.sort(np.fromiter(s, dtype=np.int64)) if s else None
        for s in g.adjacency_sets
    ]
    visited: set[int] = set()
    for _ in range(roots):
        v = int(rng.integers(g.num_nodes))
        visited.add(v)
        for _ in range(walk_length):
            options = nbrs[v]
            if options is None:
                break
            v = int(options[rng.integers(options.size)])
            visited.add(v)
    return induce(g, sorted(visited))


def sample_uniform_nodes(g: HybridGraph, budget: int, rng) -> SampledSubgraph:
    """Uniform node sample without replacement."""
    if budget < 1 or budget > g.num_nodes:
        raise ValueError(f"budget must be in [1, {g.num_nodes}], got {budget}")
    ids = rng.choice(g.num_nodes, size=budget, replace=False)
    return induce(g, ids)


def sample_uniform_hyperedges(g: HybridGraph, budget: int, rng) -> SampledSubgraph:
    """Uniform hyperedge sample without replacement; nodes are the union."""
    m = g.num_hyperedges
    if budget < 1 or budget > m:
        raise ValueError(f"budget must be in [1, {m}], got {budget}")
    picked = rng.choice(m, size=budget, replace=False)
    members: set[int] = set()
    for k in picked:
        members.update(g.hyperedges[int(k)])
    return induce(g, sorted(members))


def run_sampler(g: HybridGraph, spec: SamplerSpec, rng) -> SampledSubgraph:
    """Dispatch one sampler run."""
    if spec.method == "node":
        return sample_nodes_by_degree(g, spec.budget, rng)
    if spec.method == "edge":
        return sample_edges(g, spec.budget, rng)
    if spec.method == "rw":
        return sample_random_walk(g, spec.roots, spec.walk_length, rng)
    if spec.method == "rand-node":
        return sample_uniform_nodes(g, spec.budget, rng)
    return sample_uniform_hyperedges(g, spec.budget, rng)
