"""Pipelines that build hyperedges from raw relational or positional data.

Three constructions are provided:

* ``cliques_to_hyperedges``: one hyperedge per maximal clique of size >= 3
  in the simple-edge graph.
* ``interval_hyperedges``: one hyperedge per anchor node, grouping nodes
  whose genomic offset lies within a window around the anchor on the same
  chromosome; duplicate member sets are collapsed.
* ``ball_hyperedges``: one hyperedge per node, grouping all nodes whose
  embedding lies within distance ``tau`` of the anchor's embedding.
  Duplicates are kept so the list length always equals the node count.

All member tuples are sorted ascending.  Clique and interval lists are
ordered lexicographically; the ball list is in anchor order.
"""

import numpy as np

__all__ = [
    "ball_hyperedges",
    "cliques_to_hyperedges",
    "interval_hyperedges",
]

INTERVAL_WINDOW = 200_000


def _adjacency_sets(num_nodes: int, edges: np.ndarray) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(num_nodes)]
    for u, v in np.asarray(edges, dtype=np.int64).reshape(-1, 2):
        adj[int(u)].add(int(v))
        adj[int(v)].add(int(u))
    return adj


def _degeneracy_order(adj: list[set[int]]) -> list[int]:
    """Peel minimum-degree nodes repeatedly; classic bucket-queue version."""
    n = len(adj)
    degree = [len(a) for a in adj]
    buckets: list[set[int]] = [set() for _ in range(max(degree, default=0) + 1)]
    for v, d in enumerate(degree):
        buckets[d].add(v)
    removed = [False] * n
    order = []
    d = 0
    while len(order) < n:
        while d < len(buckets) and not buckets[d]:
            d += 1
        if d >= len(buckets):
            break
        v = buckets[d].pop()
        removed[v] = True
        order.append(v)
        for u in adj[v]:
            if not removed[u]:
                buckets[degree[u]].discard(u)
                degree[u] -= 1
                buckets[degree[u]].add(u)
        d = max(d - 1, 0)
    return order


def _bron_kerbosch_pivot(adj, r: set, p: set, x: set, out: list) -> None:
    if not p and not x:
        if len(r) >= 3:
            out.append(tuple(sorted(r)))
        return
    pivot = max(p | x, key=lambda u: len(adj[u] & p))
    for v in list(p - adj[pivot]):
        _bron_kerbosch_pivot(adj, r | {v}, p & adj[v], x & adj[v], out)
        p.remove(v)
        x.add(v)


def cliques_to_hyperedges(
    num_nodes: int, edges: np.ndarray, min_size: int = 3
) -> list[tuple[int, ...]]:
    """All maximal cliques of at least ``min_size`` nodes.

    Uses Bron-Kerbosch with pivoting over a degeneracy ordering, so sparse
    graphs stay tractable.  Members sorted, list lexicographic.
    """
    if min_size < 3:
        raise ValueError(f"min_size must be >= 3, got {min_size}")
    adj = _adjacency_sets(num_nodes, edges)
    order = _degeneracy_order(adj)
    rank = {v: i for i, v in enumerate(order)}
    raw: list[tuple[int, ...]] = []
    for v in order:
        later = {u for u in adj[v] if rank[u] > rank[v]}
        earlier = {u for u in adj[v] if rank[u] < rank[v]}
        _bron_kerbosch_pivot(adj, {v}, later, earlier, raw)
    cliques = [c for c in raw if len(c) >= min_size]
    cliques.sort()
    return cliques


def interval_hyperedges(
    positions: list[tuple[object, int]], window: int = INTERVAL_WINDOW
) -> list[tuple[int, ...]]:
    """Window grouping over (chromosome, offset) node positions.

    For each anchor node the hyperedge contains every node on the same
    chromosome whose offset differs by at most ``window``.  Identical member
    sets are merged; output is lexicographic.
    """
    if window < 0:
        raise ValueError(f"window must be non-negative, got {window}")
    by_chrom: dict[object, list[tuple[int, int]]] = {}
    for v, (chrom, offset) in enumerate(positions):
        by_chrom.setdefault(chrom, []).append((int(offset), v))
    seen: set[tuple[int, ...]] = set()
    for group in by_chrom.values():
        group.sort()
        offsets = [o for o, _ in group]
        nodes = [v for _, v in group]
        lo = 0
        hi = 0
        for i, anchor in enumerate(offsets):
            while offsets[lo] < anchor - window:
                lo += 1
            while hi < len(offsets) and offsets[hi] <= anchor + window:
                hi += 1
            seen.add(tuple(sorted(nodes[lo:hi])))
    return sorted(seen)


def ball_hyperedges(
    embeddings: np.ndarray, tau: float, metric: str = "euclidean"
) -> list[tuple[int, ...]]:
    """Metric-ball grouping over node embeddings, one hyperedge per node.

    ``metric`` is ``euclidean`` or ``cosine`` (cosine distance is
    ``1 - cos(u, v)``; zero vectors are rejected).  Every anchor is within
    distance 0 of itself, so each hyperedge is non-empty.  Duplicates stay.
    """
    emb = np.asarray(embeddings, dtype=np.float64)
    if emb.ndim != 2:
        raise ValueError(f"embeddings must be 2-D, got shape {emb.shape}")
    if not np.all(np.isfinite(emb)):
        raise ValueError("embeddings contain non-finite values")
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    n = emb.shape[0]
    if metric == "euclidean":
        sq_norms = np.einsum("ij,ij->i", emb, emb)
    elif metric == "cosine":
        norms = np.sqrt(np.einsum("ij,ij->i", emb, emb))
        if np.any(norms == 0):
            raise ValueError("cosine metric undefined for zero embeddings")
        emb = emb / norms[:, None]
    else:
        raise ValueError(f"unknown metric: {metric!r}")

    out: list[tuple[int, ...]] = []
    chunk = max(1, min(n, 4_000_000 // max(n, 1)))
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        if metric == "euclidean":
            d2 = (
                sq_norms[start:stop, None]
                + sq_norms[None, :]
                - 2.0 * emb[start:stop] @ emb.T
            )
            within = d2 <= tau * tau + 1e-12
        else:
            cos = np.clip(emb[start:stop] @ emb.T, -1.0, 1.0)
            within = 1.0 - cos <= tau + 1e-12
        for i in range(stop - start):
            out.append(tuple(np.flatnonzero(within[i]).tolist()))
    return out
