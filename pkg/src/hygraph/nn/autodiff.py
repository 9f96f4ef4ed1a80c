"""Reverse-mode automatic differentiation over a small, closed op set.

Values are float64 ndarrays wrapped in :class:`Tensor`; constants (including
scipy sparse matrices on the left of ``matmul``) pass through unchanged and
receive no gradient.  Every op builds the graph eagerly and stores a closure
that pushes the output gradient to its tensor parents; ``Tensor.backward``
walks the graph once in reverse topological order.

The op set is deliberately small: linear maps (``matmul``, ``add``,
``concat``, ``reshape``, ``take_rows``, ``edge_mix``, ``mean``), pointwise
nonlinearities (``relu``, ``elu``, ``leaky_relu``), normalizers (``softmax``,
``log_softmax``, ``segment_softmax``) and masked ``dropout``.  Gathers and
scatters are linear maps too (selection matrices), which keeps every
gradient a hand-derivable expression checked by finite differences.
"""

import numpy as np
import scipy.sparse as sp

__all__ = [
    "Tensor",
    "add",
    "concat",
    "dropout",
    "edge_mix",
    "elu",
    "leaky_relu",
    "log_softmax",
    "matmul",
    "mean",
    "random_mask",
    "relu",
    "reshape",
    "segment_softmax",
    "softmax",
    "take_rows",
]


class Tensor:
    """A node in the autodiff graph: a float64 array plus backward closure."""

    __slots__ = ("value", "grad", "parents", "_backward")

    def __init__(self, value, parents=(), backward=None):
        self.value = np.asarray(value, dtype=np.float64)
        self.parents = parents
        self._backward = backward
        self.grad = None

    @property
    def shape(self):
        return self.value.shape

    def zero_grad(self):
        self.grad = None

    def backward(self):
        if self.value.size != 1:
            raise ValueError("backward requires a scalar root")
        self.grad = np.ones_like(self.value)
        for t in reversed(_topological(self)):
            if t._backward is not None and t.grad is not None:
                t._backward(t.grad)


def _topological(root: Tensor) -> list[Tensor]:
    order: list[Tensor] = []
    seen: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node.parents:
            if id(p) not in seen:
                stack.append((p, False))
    return order


def _accumulate(t: Tensor, g: np.ndarray) -> None:
    if t.grad is None:
        t.grad = np.zeros_like(t.value)
    t.grad = t.grad + g


def _unbroadcast(g: np.ndarray, shape: tuple) -> np.ndarray:
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and g.shape[axis] != 1:
            g = g.sum(axis=axis, keepdims=True)
    return g


def matmul(a, b) -> Tensor:
    """Matrix product; ``a`` may be a constant ndarray or sparse matrix."""
    a_is_t = isinstance(a, Tensor)
    b_is_t = isinstance(b, Tensor)
    av = a.value if a_is_t else a
    bv = b.value if b_is_t else b
    out_value = av @ bv
    if sp.issparse(out_value):
        out_value = out_value.toarray()
    parents = tuple(t for t in (a, b) if isinstance(t, Tensor))

    def backward(g):
        if a_is_t:
            _accumulate(a, g @ bv.T)
        if b_is_t:
            if sp.issparse(av):
                _accumulate(b, np.asarray(av.T @ g))
            else:
                _accumulate(b, av.T @ g)

    return Tensor(out_value, parents, backward)


def add(a, b) -> Tensor:
    a_is_t = isinstance(a, Tensor)
    b_is_t = isinstance(b, Tensor)
    av = a.value if a_is_t else np.asarray(a, dtype=np.float64)
    bv = b.value if b_is_t else np.asarray(b, dtype=np.float64)
    parents = tuple(t for t in (a, b) if isinstance(t, Tensor))

    def backward(g):
        if a_is_t:
            _accumulate(a, _unbroadcast(g, av.shape))
        if b_is_t:
            _accumulate(b, _unbroadcast(g, bv.shape))

    return Tensor(av + bv, parents, backward)


def mean(a: Tensor) -> Tensor:
    size = a.value.size

    def backward(g):
        _accumulate(a, np.full_like(a.value, float(g) / size))

    return Tensor(a.value.mean(), (a,), backward)


def concat(tensors, axis: int = 1) -> Tensor:
    values = [t.value for t in tensors]
    sizes = [v.shape[axis] for v in values]
    splits = np.cumsum(sizes)[:-1]

    def backward(g):
        for t, piece in zip(tensors, np.split(g, splits, axis=axis)):
            _accumulate(t, piece)

    return Tensor(np.concatenate(values, axis=axis), tuple(tensors), backward)


def reshape(a: Tensor, shape) -> Tensor:
    def backward(g):
        _accumulate(a, g.reshape(a.value.shape))

    return Tensor(a.value.reshape(shape), (a,), backward)


def relu(a: Tensor) -> Tensor:
    mask = a.value > 0

    def backward(g):
        _accumulate(a, g * mask)

    return Tensor(np.where(mask, a.value, 0.0), (a,), backward)


def elu(a: Tensor, alpha: float = 1.0) -> Tensor:
    pos = a.value > 0
    neg_part = alpha * np.expm1(np.minimum(a.value, 0.0))
    out_value = np.where(pos, a.value, neg_part)

    def backward(g):
        _accumulate(a, g * np.where(pos, 1.0, neg_part + alpha))

    return Tensor(out_value, (a,), backward)


def leaky_relu(a: Tensor, slope: float = 0.2) -> Tensor:
    pos = a.value > 0

    def backward(g):
        _accumulate(a, g * np.where(pos, 1.0, slope))

    return Tensor(np.where(pos, a.value, slope * a.value), (a,), backward)


def softmax(a: Tensor) -> Tensor:
    shifted = a.value - a.value.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    out_value = e / e.sum(axis=-1, keepdims=True)

    def backward(g):
        inner = (g * out_value).sum(axis=-1, keepdims=True)
        _accumulate(a, out_value * (g - inner))

    return Tensor(out_value, (a,), backward)


def log_softmax(a: Tensor) -> Tensor:
    shifted = a.value - a.value.max(axis=-1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=-1, keepdims=True))
    out_value = shifted - log_z

    def backward(g):
        _accumulate(a, g - np.exp(out_value) * g.sum(axis=-1, keepdims=True))

    return Tensor(out_value, (a,), backward)


def segment_softmax(scores: Tensor, segments, num_segments: int) -> Tensor:
    """Softmax within groups of entries sharing a segment id.

    ``scores`` is (k,) or (k, 1); ``segments`` gives each entry's group.
    Groups never mix, so the gradient is the per-segment softmax Jacobian.
    """
    seg = np.asarray(segments, dtype=np.int64)
    s = scores.value.reshape(-1)
    seg_max = np.full(num_segments, -np.inf)
    np.maximum.at(seg_max, seg, s)
    e = np.exp(s - seg_max[seg])
    denom = np.zeros(num_segments)
    np.add.at(denom, seg, e)
    flat = e / denom[seg]
    out_value = flat.reshape(scores.value.shape)

    def backward(g):
        gv = g.reshape(-1)
        seg_dot = np.zeros(num_segments)
        np.add.at(seg_dot, seg, gv * flat)
        _accumulate(scores, (flat * (gv - seg_dot[seg])).reshape(scores.value.shape))

    return Tensor(out_value, (scores,), backward)


def take_rows(a: Tensor, idx) -> Tensor:
    """Gather rows; the transpose scatter-adds, so repeats accumulate."""
    rows = np.asarray(idx, dtype=np.int64)

    def backward(g):
        ga = np.zeros_like(a.value)
        np.add.at(ga, rows, g)
        _accumulate(a, ga)

    return Tensor(a.value[rows], (a,), backward)


def edge_mix(alpha: Tensor, h: Tensor, targets, num_rows: int) -> Tensor:
    """Weighted scatter: ``out[targets[e]] += alpha[e] * h[e]``.

    The workhorse of attention layers: ``alpha`` holds one coefficient per
    edge (or incidence pair), ``h`` the per-edge message rows.
    """
    tgt = np.asarray(targets, dtype=np.int64)
    av = alpha.value.reshape(-1)
    out_value = np.zeros((num_rows, h.value.shape[1]))
    np.add.at(out_value, tgt, av[:, None] * h.value)

    def backward(g):
        g_rows = g[tgt]
        _accumulate(h, av[:, None] * g_rows)
        _accumulate(alpha, (g_rows * h.value).sum(axis=1).reshape(alpha.value.shape))

    return Tensor(out_value, (alpha, h), backward)


def dropout(a: Tensor, mask: np.ndarray, keep: float) -> Tensor:
    """Masked inverted dropout with a caller-supplied 0/1 mask.

    Taking the mask as data keeps the op a fixed linear map, so finite
    differences can check it like everything else; drawing the mask from an
    rng is the caller's job (see ``random_mask``).
    """
    scale = mask / keep

    def backward(g):
        _accumulate(a, g * scale)

    return Tensor(a.value * scale, (a,), backward)


def random_mask(rng: np.random.Generator, shape, drop: float) -> np.ndarray:
    """A 0/1 keep-mask where each entry survives with probability 1 - drop."""
    return (rng.random(shape) >= drop).astype(np.float64)
