"""Graph representation, three-way partitions and separator validation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

BLOCK1 = 0
BLOCK2 = 1
SEP = 2


class GraphError(ValueError):
    pass


class Graph:
    """Undirected graph with positive integer node and edge weights.

    Stored in CSR form (``xadj``, ``adjncy``, ``adjwgt``) with every edge
    present in both endpoint lists. ``adj``, ``adjw`` and ``weights`` are plain
    Python lists mirroring the arrays; the local search loops use those.
    """

    def __init__(self, xadj, adjncy, adjwgt, vwgt):
        self.xadj = np.asarray(xadj, dtype=np.int64)
        self.adjncy = np.asarray(adjncy, dtype=np.int64)
        self.adjwgt = np.asarray(adjwgt, dtype=np.int64)
        self.vwgt = np.asarray(vwgt, dtype=np.int64)
        self.n = len(self.vwgt)
        self.m = len(self.adjncy) // 2
        bounds = self.xadj.tolist()
        nbrs = self.adjncy.tolist()
        ws = self.adjwgt.tolist()
        self.adj = [nbrs[bounds[v]:bounds[v + 1]] for v in range(self.n)]
        self.adjw = [ws[bounds[v]:bounds[v + 1]] for v in range(self.n)]
        self.weights = self.vwgt.tolist()
        self.total_weight = int(self.vwgt.sum())

    def degree(self, v):
        return len(self.adj[v])

    @property
    def degrees(self):
        return np.diff(self.xadj)

    def csr(self):
        """Adjacency as a ``scipy.sparse.csr_array`` holding edge weights."""
        return sp.csr_array((self.adjwgt, self.adjncy, self.xadj), shape=(self.n, self.n))

    def edges(self):
        """Each undirected edge once as arrays ``(u, v, w)`` with ``u < v``."""
        src = np.repeat(np.arange(self.n), self.degrees)
        keep = src < self.adjncy
        return src[keep], self.adjncy[keep], self.adjwgt[keep]

    def edge_weight(self, u, v):
        for x, w in zip(self.adj[u], self.adjw[u]):
            if x == v:
                return w
        raise KeyError((u, v))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m}, c(V)={self.total_weight})"


def _csr_from_edges(n, us, vs, ws):
    src = np.concatenate([us, vs])
    dst = np.concatenate([vs, us])
    wgt = np.concatenate([ws, ws])
    order = np.lexsort((dst, src))
    counts = np.bincount(src, minlength=n)
    xadj = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=xadj[1:])
    return xadj, dst[order], wgt[order]


def build_graph(n, edges=(), node_weights=None):
    """Build a :class:`Graph` from an edge list of ``(u, v)`` or ``(u, v, w)``.

    Duplicate edges are merged by summing their weights.
    """
    if n < 0:
        raise GraphError("negative node count")
    if node_weights is None:
        vwgt = np.ones(n, dtype=np.int64)
    else:
        vwgt = np.asarray(node_weights, dtype=np.int64)
        if vwgt.shape != (n,):
            raise GraphError(f"expected {n} node weights, got {vwgt.size}")
        if n and vwgt.min() < 1:
            raise GraphError("node weights must be positive")
    edges = list(edges)
    if edges:
        arr = np.array([(e[0], e[1], e[2] if len(e) > 2 else 1) for e in edges], dtype=np.int64)
        us, vs, ws = arr[:, 0], arr[:, 1], arr[:, 2]
        if us.min() < 0 or vs.min() < 0 or us.max() >= n or vs.max() >= n:
            raise GraphError("node id out of range")
        if np.any(us == vs):
            raise GraphError("self-loops are not allowed")
        if ws.min() < 1:
            raise GraphError("edge weights must be positive")
        lo, hi = np.minimum(us, vs), np.maximum(us, vs)
        keys, inverse = np.unique(lo * n + hi, return_inverse=True)
        ws = np.bincount(inverse, weights=ws).astype(np.int64)
        us, vs = keys // n, keys % n
    else:
        us = vs = ws = np.zeros(0, dtype=np.int64)
    xadj, adjncy, adjwgt = _csr_from_edges(n, us, vs, ws)
    return Graph(xadj, adjncy, adjwgt, vwgt)


@dataclass(frozen=True)
class BalanceSpec:
    epsilon: float
    total_weight: int

    @property
    def half(self):
        return -(-self.total_weight // 2)

    @property
    def lmax(self):
        # small tolerance so that e.g. 1.2 * 5 is not truncated to 5
        return max(self.half, int(math.floor((1 + self.epsilon) * self.half + 1e-9)))

    @classmethod
    def for_graph(cls, graph, epsilon):
        if epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        return cls(epsilon, graph.total_weight)


class Partition3:
    """Assignment of every node to BLOCK1, BLOCK2 or SEP with cached weights."""

    __slots__ = ("labels", "block_weight")

    def __init__(self, graph, labels):
        labels = [int(x) for x in labels]
        if len(labels) != graph.n:
            raise ValueError("partition does not cover all nodes")
        self.labels = labels
        self.block_weight = [0, 0, 0]
        for v, lab in enumerate(labels):
            self.block_weight[lab] += graph.weights[v]

    def copy(self):
        other = Partition3.__new__(Partition3)
        other.labels = self.labels.copy()
        other.block_weight = self.block_weight.copy()
        return other

    def move(self, graph, v, to):
        c = graph.weights[v]
        self.block_weight[self.labels[v]] -= c
        self.block_weight[to] += c
        self.labels[v] = to

    @property
    def separator_weight(self):
        return self.block_weight[SEP]

    @property
    def max_block(self):
        return max(self.block_weight[BLOCK1], self.block_weight[BLOCK2])

    def separator(self):
        return [v for v, lab in enumerate(self.labels) if lab == SEP]

    def key(self):
        """Ordering used to compare solutions: smaller separator, then balance."""
        return (self.block_weight[SEP], self.max_block)

    def __eq__(self, other):
        return isinstance(other, Partition3) and self.labels == other.labels

    def __repr__(self):
        w1, w2, ws = self.block_weight
        return f"Partition3(c(V1)={w1}, c(V2)={w2}, c(S)={ws})"


@dataclass(frozen=True)
class ValidityReport:
    is_separator: bool
    is_balanced: bool
    separator_weight: int


def block_weights(graph, part):
    sums = np.bincount(np.asarray(part.labels, dtype=np.int64), weights=graph.vwgt, minlength=3)
    return tuple(int(x) for x in sums)


def separator_weight(graph, part):
    return block_weights(graph, part)[SEP]


def crossing_edges(graph, part):
    """Number of undirected edges running between BLOCK1 and BLOCK2."""
    labels = np.asarray(part.labels)
    us, vs, _ = graph.edges()
    a, b = labels[us], labels[vs]
    return int(np.count_nonzero(((a == BLOCK1) & (b == BLOCK2)) | ((a == BLOCK2) & (b == BLOCK1))))


def validate_separator(graph, part, balance):
    w1, w2, ws = block_weights(graph, part)
    return ValidityReport(
        is_separator=crossing_edges(graph, part) == 0,
        is_balanced=max(w1, w2) <= balance.lmax,
        separator_weight=ws,
    )


def is_feasible(part, balance):
    return part.max_block <= balance.lmax
