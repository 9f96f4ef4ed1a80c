"""Dataset serialization and deterministic splitting.

The canonical on-disk form is a single UTF-8 JSON object with arrays in
node-index order:

``{"name", "num_nodes", "node_features", "edges", "hyperedges",
"hyperedge_weights"?, "hyperedge_features"?, "parent"?, "labels", "task",
"num_classes"?, "positions"?, "embeddings"?}``

Missing optional fields take documented defaults: weights -> all 1.0,
parent -> identity.  ``positions`` (per-node ``[chromosome, offset]``) and
``embeddings`` are carried for the hyperedge-construction pipelines and are
not part of the in-memory graph.
"""

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .graph import HybridGraph, InvalidGraphError, Task

__all__ = [
    "DatasetFile",
    "ParseError",
    "SchemaError",
    "SplitMasks",
    "load",
    "load_file",
    "resolve_dataset",
    "save",
    "split",
]

DATA_DIR_ENV = "HYGRAPH_DATA"


class ParseError(ValueError):
    """File is not well-formed JSON."""


class SchemaError(ValueError):
    """JSON is well-formed but does not match the dataset schema."""


@dataclass
class DatasetFile:
    """Everything a canonical dataset file can carry.

    ``positions`` entries are ``(chromosome, base-pair offset)`` pairs;
    chromosome ids may be strings or ints and are compared by equality only.
    """

    name: str
    num_nodes: int
    node_features: np.ndarray
    edges: np.ndarray
    hyperedges: tuple[tuple[int, ...], ...] = ()
    hyperedge_weights: np.ndarray | None = None
    hyperedge_features: np.ndarray | None = None
    parent: np.ndarray | None = None
    labels: np.ndarray | None = None
    task: Task = field(default_factory=lambda: Task("regression"))
    positions: list[tuple[object, int]] | None = None
    embeddings: np.ndarray | None = None

    def to_graph(self) -> HybridGraph:
        g = HybridGraph(
            node_features=self.node_features,
            simple_edges=self.edges,
            hyperedges=self.hyperedges,
            hyperedge_weights=self.hyperedge_weights,
            hyperedge_features=self.hyperedge_features,
            parent=self.parent,
            labels=self.labels,
            task=self.task,
        )
        g.require_valid()
        return g


def _need(obj: dict, key: str, path: str):
    if key not in obj:
        raise SchemaError(f"{path}: missing required field '{key}'")
    return obj[key]


def load_file(path: str) -> DatasetFile:
    """Parse a canonical JSON dataset, checking the schema field by field."""
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as e:
            raise ParseError(f"{path}: line {e.lineno}: {e.msg}") from e
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: top level must be a JSON object")

    n = _need(obj, "num_nodes", path)
    if not isinstance(n, int) or n < 0:
        raise SchemaError(f"{path}: field 'num_nodes' must be a non-negative integer")

    features = np.asarray(_need(obj, "node_features", path), dtype=np.float64)
    features = np.atleast_2d(features)
    if features.shape[0] != n:
        raise SchemaError(
            f"{path}: field 'node_features' has {features.shape[0]} rows, expected {n}"
        )

    edges_raw = _need(obj, "edges", path)
    edges = np.asarray(edges_raw, dtype=np.int64).reshape(-1, 2) if edges_raw else np.zeros((0, 2), np.int64)
    if edges.size and (edges.min() < 0 or edges.max() >= n):
        raise SchemaError(f"{path}: field 'edges': index out of range")

    hyperedges = tuple(tuple(int(v) for v in e) for e in obj.get("hyperedges", []))
    for k, e in enumerate(hyperedges):
        if any(v < 0 or v >= n for v in e):
            raise SchemaError(f"{path}: field 'hyperedges'[{k}]: index out of range")

    weights = obj.get("hyperedge_weights")
    if weights is not None:
        weights = np.asarray(weights, dtype=np.float64)
        if weights.shape[0] != len(hyperedges):
            raise SchemaError(
                f"{path}: field 'hyperedge_weights' length {weights.shape[0]}, "
                f"expected {len(hyperedges)}"
            )

    he_features = obj.get("hyperedge_features")
    if he_features is not None:
        he_features = np.atleast_2d(np.asarray(he_features, dtype=np.float64))

    parent = obj.get("parent")
    if parent is not None:
        parent = np.asarray(parent, dtype=np.int64)
        if parent.shape[0] != n:
            raise SchemaError(f"{path}: field 'parent' length {parent.shape[0]}, expected {n}")
        if parent.size and (parent.min() < 0 or parent.max() >= n):
            raise SchemaError(f"{path}: field 'parent': index out of range")

    task_kind = _need(obj, "task", path)
    if task_kind == "classification":
        task = Task("classification", num_classes=_need(obj, "num_classes", path))
    elif task_kind == "regression":
        task = Task("regression")
    else:
        raise SchemaError(f"{path}: field 'task' must be 'classification' or 'regression'")

    labels = np.asarray(_need(obj, "labels", path))
    if labels.shape[0] != n:
        raise SchemaError(f"{path}: field 'labels' length {labels.shape[0]}, expected {n}")
    if task.is_classification:
        lab_int = labels.astype(np.int64)
        if labels.dtype.kind == "f" and not np.array_equal(lab_int, labels):
            raise SchemaError(f"{path}: field 'labels': non-integer class label")
        if lab_int.size and (lab_int.min() < 0 or lab_int.max() >= task.num_classes):
            raise SchemaError(f"{path}: field 'labels': class out of range")
        labels = lab_int

    positions = obj.get("positions")
    if positions is not None:
        if len(positions) != n:
            raise SchemaError(f"{path}: field 'positions' length {len(positions)}, expected {n}")
        positions = [(p[0], int(p[1])) for p in positions]

    embeddings = obj.get("embeddings")
    if embeddings is not None:
        embeddings = np.atleast_2d(np.asarray(embeddings, dtype=np.float64))
        if embeddings.shape[0] != n:
            raise SchemaError(
                f"{path}: field 'embeddings' has {embeddings.shape[0]} rows, expected {n}"
            )

    return DatasetFile(
        name=obj.get("name", ""),
        num_nodes=n,
        node_features=features,
        edges=edges,
        hyperedges=hyperedges,
        hyperedge_weights=weights,
        hyperedge_features=he_features,
        parent=parent,
        labels=labels,
        task=task,
        positions=positions,
        embeddings=embeddings,
    )


def load(path: str) -> HybridGraph:
    """Load a canonical dataset file as a validated graph."""
    try:
        return load_file(path).to_graph()
    except InvalidGraphError as e:
        raise SchemaError(f"{path}: graph fails validation: {e}") from e


def _dataset_dict(ds: DatasetFile) -> dict:
    out: dict = {
        "name": ds.name,
        "num_nodes": ds.num_nodes,
        "node_features": ds.node_features.tolist(),
        "edges": [[int(u), int(v)] for u, v in ds.edges],
        "hyperedges": [list(e) for e in ds.hyperedges],
        "labels": ds.labels.tolist() if ds.labels is not None else [],
        "task": ds.task.kind,
    }
    if ds.task.is_classification:
        out["num_classes"] = ds.task.num_classes
    if ds.hyperedge_weights is not None and not np.all(ds.hyperedge_weights == 1.0):
        out["hyperedge_weights"] = ds.hyperedge_weights.tolist()
    if ds.hyperedge_features is not None:
        out["hyperedge_features"] = ds.hyperedge_features.tolist()
    if ds.parent is not None and not np.array_equal(
        ds.parent, np.arange(ds.num_nodes)
    ):
        out["parent"] = ds.parent.tolist()
    if ds.positions is not None:
        out["positions"] = [[c, int(o)] for c, o in ds.positions]
    if ds.embeddings is not None:
        out["embeddings"] = ds.embeddings.tolist()
    return out


def save_file(ds: DatasetFile, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_dataset_dict(ds), fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def save(g: HybridGraph, path: str, name: str = "") -> None:
    """Write a validated graph in canonical form; round-trips exactly."""
    g.require_valid()
    ds = DatasetFile(
        name=name,
        num_nodes=g.num_nodes,
        node_features=g.node_features,
        edges=g.simple_edges,
        hyperedges=g.hyperedges,
        hyperedge_weights=g.hyperedge_weights,
        hyperedge_features=g.hyperedge_features,
        parent=g.parent,
        labels=g.labels,
        task=g.task,
    )
    save_file(ds, path)


def resolve_dataset(path: str) -> str:
    """Resolve a dataset reference against the cwd, then $HYGRAPH_DATA."""
    if os.path.exists(path):
        return path
    data_dir = os.environ.get(DATA_DIR_ENV)
    if data_dir:
        candidate = os.path.join(data_dir, path)
        if os.path.exists(candidate):
            return candidate
    raise FileNotFoundError(f"dataset not found: {path}")


@dataclass(frozen=True)
class SplitMasks:
    """Disjoint, exhaustive train/val/test node-index sets."""

    train: np.ndarray
    val: np.ndarray
    test: np.ndarray

    def as_dict(self) -> dict:
        return {
            "train": self.train.tolist(),
            "val": self.val.tolist(),
            "test": self.test.tolist(),
        }


def split(g: HybridGraph, seed: int) -> SplitMasks:
    """Uniform 6:2:2 node split: floor for train and val, remainder test."""
    n = g.num_nodes
    if n < 5:
        raise ValueError(f"need at least 5 nodes to split, got {n}")
    perm = np.random.default_rng(seed).permutation(n)
    n_train = 6 * n // 10
    n_val = 2 * n // 10
    return SplitMasks(
        train=np.sort(perm[:n_train]),
        val=np.sort(perm[n_train : n_train + n_val]),
        test=np.sort(perm[n_train + n_val :]),
    )
