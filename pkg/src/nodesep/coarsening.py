"""Edge ratings, Global Path Algorithm matching and graph contraction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import RatingKind
from .graph import Graph, Partition3, _csr_from_edges

# finite log ratings are at most 1/log(2) ~ 1.44
LOG_SENTINEL = 1e9


def rate_edge(graph, u, v, kind, weight=None):
    """Rating of the edge ``{u, v}``; ``weight`` defaults to its stored weight."""
    w = graph.edge_weight(u, v) if weight is None else weight
    du, dv = graph.degree(u), graph.degree(v)
    if kind is RatingKind.EXP_STAR:
        return w / (du * dv)
    if kind is RatingKind.EXP_2STAR:
        return w * w / (du * dv)
    if kind is RatingKind.MAX:
        return 1.0 / max(du, dv)
    if kind is RatingKind.LOG:
        prod = du * dv
        return LOG_SENTINEL if prod == 1 else 1.0 / math.log(prod)
    if kind is RatingKind.WEIGHT:
        return float(w)
    raise ValueError(kind)


def edge_ratings(graph, kind, us, vs, ws):
    """Vectorised :func:`rate_edge` over edge arrays."""
    deg = graph.degrees.astype(np.float64)
    du, dv = deg[us], deg[vs]
    w = ws.astype(np.float64)
    if kind is RatingKind.EXP_STAR:
        return w / (du * dv)
    if kind is RatingKind.EXP_2STAR:
        return w * w / (du * dv)
    if kind is RatingKind.MAX:
        return 1.0 / np.maximum(du, dv)
    if kind is RatingKind.LOG:
        prod = du * dv
        with np.errstate(divide="ignore"):
            r = 1.0 / np.log(prod)
        return np.where(prod == 1, LOG_SENTINEL, r)
    if kind is RatingKind.WEIGHT:
        return w
    raise ValueError(kind)


@dataclass
class Matching:
    partner: list  # partner id per node, -1 if unmatched
    rating_sum: float = 0.0

    @property
    def size(self):
        return sum(1 for v, p in enumerate(self.partner) if p > v)

    def pairs(self):
        return [(v, p) for v, p in enumerate(self.partner) if p > v]

    @classmethod
    def empty(cls, n):
        return cls([-1] * n, 0.0)


def max_weight_path_matching(ratings):
    """Optimal matching on a path whose i-th edge has rating ``ratings[i]``.

    Returns ``(total, chosen_edge_indices)``.
    """
    k = len(ratings)
    best = [0.0] * (k + 1)
    for i in range(1, k + 1):
        take = ratings[i - 1] + (best[i - 2] if i >= 2 else 0.0)
        best[i] = take if take >= best[i - 1] else best[i - 1]
    chosen = []
    i = k
    while i >= 1:
        take = ratings[i - 1] + (best[i - 2] if i >= 2 else 0.0)
        if take >= best[i - 1]:
            chosen.append(i - 1)
            i -= 2
        else:
            i -= 1
    chosen.reverse()
    return best[k], chosen


def max_weight_cycle_matching(ratings):
    """Optimal matching on a cycle; edge ``i`` joins nodes ``i`` and ``i+1 mod k``."""
    k = len(ratings)
    if k < 3:
        return max_weight_path_matching(ratings)
    # closing edge unused: plain path over the others
    skip_total, skip_chosen = max_weight_path_matching(ratings[:-1])
    # closing edge used: its two neighbours on the cycle are excluded
    inner_total, inner_chosen = max_weight_path_matching(ratings[1:-2])
    use_total = ratings[-1] + inner_total
    if use_total > skip_total:
        return use_total, [i + 1 for i in inner_chosen] + [k - 1]
    return skip_total, skip_chosen


def gpa_matching(graph, kind=RatingKind.EXP_STAR, forbidden=None, rng=None, ratings=None):
    """Global Path Algorithm.

    Scans edges by decreasing rating and keeps those that extend the current
    collection of paths and even cycles; each path/cycle is then matched
    optimally by dynamic programming.

    ``forbidden`` is a boolean array over ``graph.edges()`` marking edges that
    must not be matched. ``ratings`` may override the computed ratings (same
    order as ``graph.edges()``).
    """
    rng = np.random.default_rng() if rng is None else rng
    n = graph.n
    us, vs, ws = graph.edges()
    if ratings is None:
        ratings = edge_ratings(graph, kind, us, vs, ws)
    else:
        ratings = np.asarray(ratings, dtype=np.float64)
    idx = np.arange(len(us))
    if forbidden is not None:
        idx = idx[~np.asarray(forbidden, dtype=bool)]
    ties = rng.random(len(idx))
    idx = idx[np.lexsort((ties, -ratings[idx]))]

    u_list, v_list, r_list = us.tolist(), vs.tolist(), ratings.tolist()
    pdeg = [0] * n
    other = list(range(n))  # other end of the path, valid for path ends
    plen = [0] * n  # number of edges of the path, valid for path ends
    links = [[] for _ in range(n)]
    for e in idx.tolist():
        u, v = u_list[e], v_list[e]
        if pdeg[u] >= 2 or pdeg[v] >= 2:
            continue
        if pdeg[u] and pdeg[v] and other[u] == v:
            # closing the path into a cycle; only even cycles are allowed
            if plen[u] % 2 == 0:
                continue
        else:
            a, b = other[u], other[v]
            length = plen[u] + plen[v] + 1
            other[a], other[b] = b, a
            plen[a] = plen[b] = length
        pdeg[u] += 1
        pdeg[v] += 1
        links[u].append((v, r_list[e]))
        links[v].append((u, r_list[e]))

    partner = [-1] * n
    total = 0.0
    seen = [False] * n

    def walk(start):
        nodes = [start]
        rates = []
        seen[start] = True
        prev, cur = -1, start
        while True:
            step = None
            for nxt, r in links[cur]:
                if nxt != prev and not seen[nxt]:
                    step = (nxt, r)
                    break
            if step is None:
                # a cycle closes back onto start
                for nxt, r in links[cur]:
                    if nxt == start and len(nodes) > 2:
                        rates.append(r)
                        return nodes, rates, True
                return nodes, rates, False
            prev, cur = cur, step[0]
            seen[cur] = True
            nodes.append(cur)
            rates.append(step[1])

    def apply(nodes, chosen):
        nonlocal total
        k = len(nodes)
        for i in chosen:
            a, b = nodes[i], nodes[(i + 1) % k]
            partner[a], partner[b] = b, a

    for v in range(n):
        if pdeg[v] == 1 and not seen[v]:
            nodes, rates, _ = walk(v)
            t, chosen = max_weight_path_matching(rates)
            total += t
            apply(nodes, chosen)
    for v in range(n):
        if pdeg[v] == 2 and not seen[v]:
            nodes, rates, _ = walk(v)
            t, chosen = max_weight_cycle_matching(rates)
            total += t
            apply(nodes, chosen)
    return Matching(partner, total)


@dataclass
class CoarseLevel:
    coarse_graph: Graph
    fine_to_coarse: np.ndarray
    coarse_to_fine: list = field(repr=False)


def contract(graph, matching):
    """Contract every matched pair into one node; parallel edges are merged."""
    n = graph.n
    ids = np.arange(n)
    partner = np.asarray(matching.partner, dtype=np.int64)
    rep = np.where(partner < 0, ids, np.minimum(ids, partner))
    _, f2c = np.unique(rep, return_inverse=True)
    nc = int(f2c.max()) + 1 if n else 0
    cvwgt = np.bincount(f2c, weights=graph.vwgt, minlength=nc).astype(np.int64)
    us, vs, ws = graph.edges()
    cu, cv = f2c[us], f2c[vs]
    keep = cu != cv
    cu, cv, ws = cu[keep], cv[keep], ws[keep]
    lo, hi = np.minimum(cu, cv), np.maximum(cu, cv)
    if len(lo):
        keys, inv = np.unique(lo * nc + hi, return_inverse=True)
        cws = np.bincount(inv, weights=ws).astype(np.int64)
        lo, hi = keys // nc, keys % nc
    else:
        cws = ws
    xadj, adjncy, adjwgt = _csr_from_edges(nc, lo, hi, cws)
    c2f = [[] for _ in range(nc)]
    for v, c in enumerate(f2c.tolist()):
        c2f[c].append(v)
    return CoarseLevel(Graph(xadj, adjncy, adjwgt, cvwgt), f2c, c2f)


def project_down(level, part):
    """Labels of fine nodes carried to the coarse graph (pairs share a label)."""
    labels = np.asarray(part.labels)
    coarse = np.empty(level.coarse_graph.n, dtype=np.int64)
    coarse[level.fine_to_coarse] = labels
    return Partition3(level.coarse_graph, coarse)


def project_up(graph, level, coarse_part):
    labels = np.asarray(coarse_part.labels)[level.fine_to_coarse]
    return Partition3(graph, labels)


@dataclass
class Hierarchy:
    graphs: list
    levels: list
    pinned: list | None = None

    def __len__(self):
        return len(self.graphs)

    @property
    def coarsest(self):
        return self.graphs[-1]


def pinned_forbidden(graph, part):
    """Edges whose endpoints carry different labels (i.e. touch the separator)."""
    labels = np.asarray(part.labels)
    us, vs, _ = graph.edges()
    return labels[us] != labels[vs]


def build_hierarchy(graph, cfg, pinned=None, rng=None, rating=None):
    """Match and contract until the graph is below ``cfg.coarsest_target``.

    Stops early when a contraction shrinks the graph by less than 5%. With a
    ``pinned`` partition no separator edge is contracted and the partition is
    projected onto every level.
    """
    rng = np.random.default_rng() if rng is None else rng
    kind = cfg.rating if rating is None else rating
    graphs, levels = [graph], []
    pins = [pinned] if pinned is not None else None
    current = graph
    while current.n >= cfg.coarsest_target:
        forbidden = pinned_forbidden(current, pins[-1]) if pins is not None else None
        matching = gpa_matching(current, kind, forbidden, rng)
        if matching.size == 0:
            break
        level = contract(current, matching)
        graphs.append(level.coarse_graph)
        levels.append(level)
        if pins is not None:
            pins.append(project_down(level, pins[-1]))
        reduced = current.n - level.coarse_graph.n
        current = level.coarse_graph
        if reduced < 0.05 * (current.n + reduced):
            break
    return Hierarchy(graphs, levels, pins)
