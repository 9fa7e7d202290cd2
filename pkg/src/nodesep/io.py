"""Reading and writing METIS graph files and separator files."""

from __future__ import annotations

import io
import os
from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphError, Partition3, _csr_from_edges


class MetisFormatError(GraphError):
    pass


@dataclass(frozen=True)
class MetisHeader:
    n: int
    m: int
    fmt: int = 0
    ncon: int = 1

    @property
    def has_edge_weights(self):
        return self.fmt % 10 == 1

    @property
    def has_node_weights(self):
        return (self.fmt // 10) % 10 == 1

    @property
    def has_node_sizes(self):
        return self.fmt // 100 == 1


def _parse_header(tokens):
    if len(tokens) < 2 or len(tokens) > 4:
        raise MetisFormatError(f"malformed header: {' '.join(tokens)!r}")
    try:
        values = [int(t) for t in tokens]
    except ValueError:
        raise MetisFormatError(f"malformed header: {' '.join(tokens)!r}") from None
    n, m = values[0], values[1]
    fmt_token = tokens[2] if len(tokens) > 2 else "0"
    if len(fmt_token) > 3 or any(ch not in "01" for ch in fmt_token):
        raise MetisFormatError(f"unsupported fmt {fmt_token!r}")
    ncon = values[3] if len(values) > 3 else 1
    if ncon != 1:
        raise MetisFormatError("only a single node weight (ncon=1) is supported")
    if n < 0 or m < 0:
        raise MetisFormatError("negative counts in header")
    return MetisHeader(n, m, int(fmt_token), ncon)


def _content_lines(text):
    for line in text.splitlines():
        if line.lstrip().startswith("%"):
            continue
        yield line


def parse_metis(source):
    """Parse METIS text (``str``, ``bytes`` or a readable file) into a Graph.

    Node ids in the file are 1-based; the returned graph uses 0-based ids.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, (bytes, bytearray)):
        source = source.decode("ascii")
    lines = _content_lines(source)
    header = None
    for line in lines:
        if line.strip():
            header = _parse_header(line.split())
            break
    if header is None:
        raise MetisFormatError("empty input")

    n = header.n
    vwgt = np.ones(n, dtype=np.int64)
    src, dst, wgt = [], [], []
    step = 2 if header.has_edge_weights else 1
    v = 0
    for line in lines:
        if v >= n:
            if line.strip():
                raise MetisFormatError("more node lines than declared")
            continue
        try:
            tok = [int(t) for t in line.split()]
        except ValueError:
            raise MetisFormatError(f"non-integer token on line of node {v + 1}") from None
        if header.has_node_sizes:
            # node sizes only matter for communication volume; drop them
            tok = tok[1:]
        if header.has_node_weights:
            if not tok:
                raise MetisFormatError(f"missing node weight for node {v + 1}")
            vwgt[v] = tok[0]
            tok = tok[1:]
        if len(tok) % step:
            raise MetisFormatError(f"dangling neighbor/weight pair on node {v + 1}")
        nb = tok[::step]
        src.extend([v] * len(nb))
        dst.extend(nb)
        wgt.extend(tok[1::2] if step == 2 else [1] * len(nb))
        v += 1
    if v < n and header.has_node_weights:
        raise MetisFormatError(f"expected {n} node lines, found {v}")
    # otherwise missing trailing lines are read as isolated nodes; the
    # symmetry and edge-count checks below reject truncated files

    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64) - 1
    wgt = np.asarray(wgt, dtype=np.int64)
    if n and vwgt.min() < 1:
        raise MetisFormatError("node weights must be positive")
    if len(dst):
        if dst.min() < 0 or dst.max() >= n:
            raise MetisFormatError("neighbor id out of range")
        if np.any(src == dst):
            raise MetisFormatError("self-loop")
        if wgt.min() < 1:
            raise MetisFormatError("edge weights must be positive")

    # every directed entry must have its reverse with the same weight
    fwd = np.stack([src, dst, wgt], axis=1)
    rev = np.stack([dst, src, wgt], axis=1)
    fwd_sorted = fwd[np.lexsort(fwd.T[::-1])]
    rev_sorted = rev[np.lexsort(rev.T[::-1])]
    if not np.array_equal(fwd_sorted, rev_sorted):
        raise MetisFormatError("adjacency is not symmetric")
    keys = src * max(n, 1) + dst
    if len(np.unique(keys)) != len(keys):
        raise MetisFormatError("parallel edges")
    if len(src) != 2 * header.m:
        raise MetisFormatError(f"header declares {header.m} edges, found {len(src) // 2}")

    keep = src < dst
    xadj, adjncy, adjwgt = _csr_from_edges(n, src[keep], dst[keep], wgt[keep])
    return Graph(xadj, adjncy, adjwgt, vwgt)


def read_metis(path):
    with open(path, "rb") as fh:
        return parse_metis(fh.read())


def write_metis(graph, sink=None):
    """Emit ``graph`` in METIS format; weights are written only when non-unit."""
    node_w = bool(np.any(graph.vwgt != 1))
    edge_w = bool(np.any(graph.adjwgt != 1))
    out = io.StringIO()
    fmt = f"{int(node_w)}{int(edge_w)}"
    out.write(f"{graph.n} {graph.m}" + (f" {fmt}" if node_w or edge_w else "") + "\n")
    for v in range(graph.n):
        parts = [str(graph.weights[v])] if node_w else []
        for u, w in zip(graph.adj[v], graph.adjw[v]):
            parts.append(str(u + 1))
            if edge_w:
                parts.append(str(w))
        out.write(" ".join(parts) + "\n")
    return _emit(out.getvalue(), sink)


def write_separator(part, sink=None):
    """One line per node: 0 for BLOCK1, 1 for BLOCK2, 2 for the separator."""
    text = "".join(f"{lab}\n" for lab in part.labels)
    return _emit(text, sink)


def read_separator(graph, source):
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source) as fh:
            source = fh.read()
    elif hasattr(source, "read"):
        source = source.read()
    labels = [int(tok) for tok in source.split()]
    if any(lab not in (0, 1, 2) for lab in labels):
        raise ValueError("separator labels must be 0, 1 or 2")
    return Partition3(graph, labels)


def _emit(text, sink):
    if sink is None:
        return text
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w", newline="\n") as fh:
            fh.write(text)
    return text
