"""Message-passing layers over hybrid graphs.

Every layer maps a node feature matrix (n, d_in) to (n, d_out) using
structure precomputed once per graph in :class:`GraphTensors`:

* ``a_hat``: symmetrically normalized adjacency with self-loops,
* ``mean_adj``: row-normalized adjacency (zero rows for isolated nodes),
* directed edge pairs with self-loops for pairwise attention,
* node-hyperedge incidence pairs for hypergraph attention,
* ``hyper_prop``: the normalized weighted clique-style propagation matrix.

Attention never materializes dense score matrices; scores live on the edge
or incidence pair lists and are normalized with a segment softmax.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..graph import HybridGraph
from . import autodiff as ad

__all__ = [
    "GraphTensors",
    "LAYER_TYPES",
    "build_graph_tensors",
    "glorot",
]

LEAKY_SLOPE = 0.2


@dataclass(frozen=True)
class GraphTensors:
    num_nodes: int
    num_hyperedges: int
    a_hat: sp.csr_matrix
    mean_adj: sp.csr_matrix
    att_src: np.ndarray
    att_dst: np.ndarray
    inc_node: np.ndarray
    inc_edge: np.ndarray
    incidence_t: sp.csr_matrix
    hyper_prop: sp.csr_matrix
    log_weights: np.ndarray


def build_graph_tensors(g: HybridGraph) -> GraphTensors:
    g.require_valid()
    n = g.num_nodes
    m = g.num_hyperedges
    edges = g.simple_edges

    if edges.size:
        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
        data = np.ones(rows.size, dtype=np.float64)
        adj = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
    else:
        adj = sp.csr_matrix((n, n), dtype=np.float64)

    with_loops = (adj + sp.eye(n, format="csr")).tocsr()
    deg_hat = np.asarray(with_loops.sum(axis=1)).ravel()
    inv_sqrt = 1.0 / np.sqrt(deg_hat)
    a_hat = sp.diags(inv_sqrt) @ with_loops @ sp.diags(inv_sqrt)

    deg = np.asarray(adj.sum(axis=1)).ravel()
    inv_deg = np.where(deg > 0, 1.0 / np.where(deg > 0, deg, 1.0), 0.0)
    mean_adj = sp.diags(inv_deg) @ adj

    loops = np.arange(n, dtype=np.int64)
    if edges.size:
        att_src = np.concatenate([edges[:, 0], edges[:, 1], loops])
        att_dst = np.concatenate([edges[:, 1], edges[:, 0], loops])
    else:
        att_src = loops.copy()
        att_dst = loops.copy()
    order = np.lexsort((att_src, att_dst))
    att_src, att_dst = att_src[order], att_dst[order]

    members, offsets = g.incidence_arrays
    sizes = np.diff(offsets)
    inc_edge = np.repeat(np.arange(m, dtype=np.int64), sizes)
    inc_node = members.copy()
    if members.size:
        incidence = sp.csr_matrix(
            (np.ones(members.size), (inc_node, inc_edge)), shape=(n, m)
        )
    else:
        incidence = sp.csr_matrix((n, m), dtype=np.float64)

    w = g.hyperedge_weights
    edge_scale = np.where(sizes > 0, w / np.where(sizes > 0, sizes, 1), 0.0)
    node_mass = np.asarray((incidence @ sp.diags(w)).sum(axis=1)).ravel()
    node_scale = np.where(node_mass > 0, 1.0 / np.where(node_mass > 0, node_mass, 1.0), 0.0)
    hyper_prop = (
        sp.diags(node_scale) @ incidence @ sp.diags(edge_scale) @ incidence.T
    ).tocsr()

    return GraphTensors(
        num_nodes=n,
        num_hyperedges=m,
        a_hat=a_hat.tocsr(),
        mean_adj=mean_adj.tocsr(),
        att_src=att_src,
        att_dst=att_dst,
        inc_node=inc_node,
        inc_edge=inc_edge,
        incidence_t=incidence.T.tocsr(),
        hyper_prop=hyper_prop,
        log_weights=np.log(w) if m else np.zeros(0),
    )


def glorot(rng: np.random.Generator, fan_in: int, fan_out: int, shape=None) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape if shape is not None else (fan_in, fan_out))


class GCNLayer:
    """Symmetric-normalized convolution with self-loops."""

    def __init__(self, d_in: int, d_out: int, rng):
        self.theta = ad.Tensor(glorot(rng, d_in, d_out))

    def params(self):
        return [self.theta]

    def forward(self, gt: GraphTensors, x: ad.Tensor) -> ad.Tensor:
        return ad.matmul(gt.a_hat, ad.matmul(x, self.theta))


class SAGELayer:
    """Separate self and mean-of-neighbors transforms, summed."""

    def __init__(self, d_in: int, d_out: int, rng):
        self.theta_self = ad.Tensor(glorot(rng, d_in, d_out))
        self.theta_nbr = ad.Tensor(glorot(rng, d_in, d_out))

    def params(self):
        return [self.theta_self, self.theta_nbr]

    def forward(self, gt: GraphTensors, x: ad.Tensor) -> ad.Tensor:
        own = ad.matmul(x, self.theta_self)
        nbr = ad.matmul(gt.mean_adj, ad.matmul(x, self.theta_nbr))
        return ad.add(own, nbr)


class GATLayer:
    """Single-head additive attention over neighbors plus self."""

    def __init__(self, d_in: int, d_out: int, rng):
        self.theta = ad.Tensor(glorot(rng, d_in, d_out))
        self.a_src = ad.Tensor(glorot(rng, d_out, 1, shape=(d_out, 1)))
        self.a_dst = ad.Tensor(glorot(rng, d_out, 1, shape=(d_out, 1)))

    def params(self):
        return [self.theta, self.a_src, self.a_dst]

    def forward(self, gt: GraphTensors, x: ad.Tensor) -> ad.Tensor:
        h = ad.matmul(x, self.theta)
        s_src = ad.matmul(h, self.a_src)
        s_dst = ad.matmul(h, self.a_dst)
        scores = ad.leaky_relu(
            ad.add(ad.take_rows(s_src, gt.att_src), ad.take_rows(s_dst, gt.att_dst)),
            LEAKY_SLOPE,
        )
        alpha = ad.segment_softmax(scores, gt.att_dst, gt.num_nodes)
        return ad.edge_mix(alpha, ad.take_rows(h, gt.att_src), gt.att_dst, gt.num_nodes)


class GATv2Layer:
    """Attention with the nonlinearity inside the score, fixing static ranking."""

    def __init__(self, d_in: int, d_out: int, rng):
        self.theta_l = ad.Tensor(glorot(rng, d_in, d_out))
        self.theta_r = ad.Tensor(glorot(rng, d_in, d_out))
        self.a = ad.Tensor(glorot(rng, d_out, 1, shape=(d_out, 1)))

    def params(self):
        return [self.theta_l, self.theta_r, self.a]

    def forward(self, gt: GraphTensors, x: ad.Tensor) -> ad.Tensor:
        h_l = ad.matmul(x, self.theta_l)
        h_r = ad.matmul(x, self.theta_r)
        pair = ad.add(ad.take_rows(h_l, gt.att_src), ad.take_rows(h_r, gt.att_dst))
        scores = ad.matmul(ad.leaky_relu(pair, LEAKY_SLOPE), self.a)
        alpha = ad.segment_softmax(scores, gt.att_dst, gt.num_nodes)
        return ad.edge_mix(
            alpha, ad.take_rows(h_l, gt.att_src), gt.att_dst, gt.num_nodes
        )


class HyperConvLayer:
    """Weighted clique-style hypergraph convolution.

    Propagates with the degree-normalized incidence product; nodes in no
    hyperedge get zero rows.
    """

    def __init__(self, d_in: int, d_out: int, rng):
        self.theta = ad.Tensor(glorot(rng, d_in, d_out))

    def params(self):
        return [self.theta]

    def forward(self, gt: GraphTensors, x: ad.Tensor) -> ad.Tensor:
        return ad.matmul(gt.hyper_prop, ad.matmul(x, self.theta))


class HyperAttenLayer:
    """Attention from nodes over their incident hyperedges.

    Hyperedge messages are sums of transformed member rows; per-incidence
    scores add the log hyperedge weight before the segment softmax, which
    reproduces weighted normalized mixing exactly.
    """

    def __init__(self, d_in: int, d_out: int, rng):
        self.theta = ad.Tensor(glorot(rng, d_in, d_out))
        self.a_node = ad.Tensor(glorot(rng, d_out, 1, shape=(d_out, 1)))
        self.a_edge = ad.Tensor(glorot(rng, d_out, 1, shape=(d_out, 1)))

    def params(self):
        return [self.theta, self.a_node, self.a_edge]

    def forward(self, gt: GraphTensors, x: ad.Tensor) -> ad.Tensor:
        h = ad.matmul(x, self.theta)
        z = ad.matmul(gt.incidence_t, h)
        s_node = ad.matmul(h, self.a_node)
        s_edge = ad.matmul(z, self.a_edge)
        raw = ad.leaky_relu(
            ad.add(
                ad.take_rows(s_node, gt.inc_node), ad.take_rows(s_edge, gt.inc_edge)
            ),
            LEAKY_SLOPE,
        )
        scores = ad.add(raw, gt.log_weights[gt.inc_edge].reshape(-1, 1))
        alpha = ad.segment_softmax(scores, gt.inc_node, gt.num_nodes)
        return ad.edge_mix(alpha, ad.take_rows(z, gt.inc_edge), gt.inc_node, gt.num_nodes)


LAYER_TYPES = {
    "gcn": GCNLayer,
    "sage": SAGELayer,
    "gat": GATLayer,
    "gatv2": GATv2Layer,
    "hyperconv": HyperConvLayer,
    "hyperatten": HyperAttenLayer,
}
