"""Synthetic hybrid graphs with controllable signal, for tests and demos.

The classification generator plants the label three ways at once: as a
one-hot bump in the features, as edge homophily, and as mostly label-pure
hyperedges.  Any of the model families can therefore learn it, which makes
the generator a good end-to-end fixture.
"""

import numpy as np

from .graph import HybridGraph, Task

__all__ = ["make_classification_graph", "make_regression_graph"]


def make_classification_graph(
    num_nodes: int = 300,
    num_classes: int = 2,
    feature_dim: int = 8,
    noise: float = 0.3,
    homophily: float = 0.9,
    avg_degree: float = 6.0,
    num_hyperedges: int = 60,
    purity: float = 0.9,
    seed: int = 0,
) -> HybridGraph:
    if feature_dim < num_classes:
        raise ValueError("feature_dim must be >= num_classes")
    rng = np.random.default_rng(seed)
    labels = rng.permutation(np.arange(num_nodes) % num_classes)
    x = noise * rng.standard_normal((num_nodes, feature_dim))
    x[np.arange(num_nodes), labels] += 1.0

    by_class = [np.flatnonzero(labels == c) for c in range(num_classes)]
    target_edges = int(num_nodes * avg_degree / 2)
    seen: set[tuple[int, int]] = set()
    edges = []
    attempts = 0
    while len(edges) < target_edges and attempts < 50 * target_edges:
        attempts += 1
        u = int(rng.integers(num_nodes))
        if rng.random() < homophily:
            pool = by_class[labels[u]]
        else:
            c = int((labels[u] + 1 + rng.integers(num_classes - 1)) % num_classes)
            pool = by_class[c]
        v = int(pool[rng.integers(pool.size)])
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            continue
        seen.add(key)
        edges.append(key)

    hyperedges = []
    for k in range(num_hyperedges):
        c = k % num_classes
        size = int(rng.integers(3, 6))
        pool = by_class[c]
        members = set(rng.choice(pool, size=min(size, pool.size), replace=False).tolist())
        if rng.random() > purity:
            other = by_class[(c + 1) % num_classes]
            members.add(int(other[rng.integers(other.size)]))
        if len(members) >= 2:
            hyperedges.append(tuple(sorted(int(v) for v in members)))

    return HybridGraph(
        node_features=x,
        simple_edges=np.array(sorted(edges), dtype=np.int64),
        hyperedges=tuple(hyperedges),
        labels=labels,
        task=Task("classification", num_classes=num_classes),
    ).require_valid()


def make_regression_graph(
    num_nodes: int = 200,
    feature_dim: int = 6,
    noise: float = 0.05,
    avg_degree: float = 4.0,
    seed: int = 0,
) -> HybridGraph:
    """Targets are a fixed linear readout of the features plus small noise."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((num_nodes, feature_dim))
    w = rng.standard_normal(feature_dim) / np.sqrt(feature_dim)
    y = x @ w + noise * rng.standard_normal(num_nodes)

    target_edges = int(num_nodes * avg_degree / 2)
    seen: set[tuple[int, int]] = set()
    while len(seen) < target_edges:
        u, v = rng.integers(num_nodes, size=2)
        if u != v:
            seen.add((int(min(u, v)), int(max(u, v))))

    return HybridGraph(
        node_features=x,
        simple_edges=np.array(sorted(seen), dtype=np.int64),
        labels=y,
        task=Task("regression"),
    ).require_valid()
