"""Flow-based separator refinement.

A region ``A`` around the separator is grown by two bounded BFS, turned into
a node-capacitated s-t problem via node splitting and solved exactly. Any
minimum cut of that problem is a separator no heavier than the current one.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import breadth_first_order, connected_components, maximum_flow

from .graph import BLOCK1, BLOCK2, SEP, Partition3, is_feasible

SOURCE = 0
SINK = 1


@dataclass
class FlowRegion:
    nodes: list
    left: list  # attached to the source
    right: list  # attached to the sink
    budgets: tuple = (0, 0)

    def __len__(self):
        return len(self.nodes)


@dataclass
class FlowNetwork:
    """Node-split network; region node ``i`` becomes ``2 + 2i`` (in) and ``3 + 2i`` (out)."""

    num_nodes: int
    tails: np.ndarray
    heads: np.ndarray
    caps: np.ndarray
    inf: int
    region: FlowRegion = field(repr=False)

    @staticmethod
    def node_in(i):
        return 2 + 2 * i

    @staticmethod
    def node_out(i):
        return 3 + 2 * i

    def original(self, x):
        """Region index of network node ``x`` (``None`` for source and sink)."""
        return None if x < 2 else (x - 2) // 2


@dataclass
class Residual:
    flow: np.ndarray  # flow per arc of the network, same order as ``tails``
    matrix: sp.csr_array = field(repr=False)  # adjacency of arcs with residual capacity > 0

    def reachable_from(self, x):
        order = breadth_first_order(self.matrix, x, directed=True, return_predecessors=False)
        mask = np.zeros(self.matrix.shape[0], dtype=bool)
        mask[order] = True
        return mask

    def reaching(self, x):
        order = breadth_first_order(self.matrix.T.tocsr(), x, directed=True, return_predecessors=False)
        mask = np.zeros(self.matrix.shape[0], dtype=bool)
        mask[order] = True
        return mask


def _border(graph, part, inside, nodes):
    left, right = [], []
    labels = part.labels
    for u in nodes:
        touches1 = touches2 = False
        for v in graph.adj[u]:
            if not inside[v]:
                if labels[v] == BLOCK1:
                    touches1 = True
                elif labels[v] == BLOCK2:
                    touches2 = True
        if touches1:
            left.append(u)
        if touches2:
            right.append(u)
    return left, right


def grow_region(graph, part, balance, alpha, rng):
    """Separator plus two weight-bounded BFS into BLOCK1 and BLOCK2.

    The BFS into block ``i`` may add at most ``(1+alpha)*L_max - c(other) - c(S)``
    node weight. Nodes that do not fit are skipped, not used as a stop signal.
    Returns ``None`` when the separator is empty.
    """
    sep = part.separator()
    if not sep:
        return None
    c1, c2, cs = part.block_weight
    lmax = balance.lmax
    budgets = ((1 + alpha) * lmax - c2 - cs, (1 + alpha) * lmax - c1 - cs)
    labels, weights, adj = part.labels, graph.weights, graph.adj
    inside = bytearray(graph.n)
    for u in sep:
        inside[u] = 1
    nodes = list(sep)
    last_layer = ([], [])
    for block, budget in zip((BLOCK1, BLOCK2), budgets):
        remaining = budget
        visited = set()
        frontier = sep
        while frontier and remaining > 0:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if labels[v] == block and not inside[v] and v not in visited:
                        visited.add(v)
                        nxt.append(v)
            if len(nxt) > 1:
                nxt = [nxt[i] for i in rng.permutation(len(nxt))]
            frontier = []
            for v in nxt:
                if weights[v] <= remaining:
                    remaining -= weights[v]
                    inside[v] = 1
                    nodes.append(v)
                    frontier.append(v)
            if frontier:
                last_layer[block][:] = frontier
    left, right = _border(graph, part, inside, nodes)
    # a BFS that swallowed everything it could reach leaves no border on its
    # side; its outermost layer stands in for it
    if not left:
        left = last_layer[BLOCK1]
    if not right:
        right = last_layer[BLOCK2]
    return FlowRegion(nodes, left, right, budgets)


def build_flow_network(graph, region):
    nodes = np.asarray(region.nodes, dtype=np.int64)
    k = len(nodes)
    index = np.full(graph.n, -1, dtype=np.int64)
    index[nodes] = np.arange(k)
    inf = graph.total_weight + 1

    starts = graph.xadj[nodes]
    deg = graph.xadj[nodes + 1] - starts
    owner = np.repeat(np.arange(k), deg)
    offsets = np.arange(int(deg.sum())) - np.repeat(np.cumsum(deg) - deg, deg)
    j = index[graph.adjncy[np.repeat(starts, deg) + offsets]]
    inner = j >= 0
    owner, j = owner[inner], j[inner]

    left = index[np.asarray(region.left, dtype=np.int64)]
    right = index[np.asarray(region.right, dtype=np.int64)]
    tails = np.concatenate([2 + 2 * np.arange(k), 3 + 2 * owner, np.full(len(left), SOURCE), 3 + 2 * right])
    heads = np.concatenate([3 + 2 * np.arange(k), 2 + 2 * j, 2 + 2 * left, np.full(len(right), SINK)])
    caps = np.concatenate([graph.vwgt[nodes], np.full(len(owner) + len(left) + len(right), inf)])
    return FlowNetwork(
        num_nodes=2 + 2 * k,
        tails=tails.astype(np.int64),
        heads=heads.astype(np.int64),
        caps=caps.astype(np.int64),
        inf=inf,
        region=region,
    )


def max_flow(net):
    """Exact maximum s-t flow (Dinic). Returns ``(value, Residual)``."""
    n = net.num_nodes
    if net.inf >= 2**31:
        raise OverflowError("total node weight too large for the flow solver")
    cap = sp.csr_array(
        (net.caps.astype(np.int32), (net.tails, net.heads)), shape=(n, n)
    )
    if len(net.tails):
        result = maximum_flow(cap, SOURCE, SINK, method="dinic")
        value = int(result.flow_value)
        flow = np.asarray(result.flow[net.tails, net.heads]).ravel().astype(np.int64)
    else:
        value, flow = 0, np.zeros(0, dtype=np.int64)
    return value, _residual(net, flow)


def _residual(net, flow):
    fwd = flow < net.caps
    bwd = flow > 0
    rt = np.concatenate([net.tails[fwd], net.heads[bwd]])
    rh = np.concatenate([net.heads[fwd], net.tails[bwd]])
    n = net.num_nodes
    mat = sp.csr_array((np.ones(len(rt), dtype=np.int8), (rt, rh)), shape=(n, n))
    return Residual(flow, mat)


def partition_from_closed_set(graph, part, region, closed):
    """Map a closed set of network nodes (containing s, not t) to a Partition3."""
    new = part.copy()
    k = len(region.nodes)
    in_c = closed[2:2 + 2 * k:2]
    out_c = closed[3:3 + 2 * k:2]
    labs = np.where(out_c, BLOCK1, np.where(in_c, SEP, BLOCK2)).tolist()
    current = new.labels
    for u, lab in zip(region.nodes, labs):
        if current[u] != lab:
            new.move(graph, u, lab)
    return new


def extract_separator(graph, part, region, net, residual):
    """Separator given by the source side of the residual network."""
    return partition_from_closed_set(graph, part, region, residual.reachable_from(SOURCE))


def _component_dag(net, residual):
    """SCC labels plus the successor lists of the condensed residual graph."""
    ncomp, comp = connected_components(residual.matrix, directed=True, connection="strong")
    coo = residual.matrix.tocoo()
    a, b = comp[coo.row], comp[coo.col]
    keep = a != b
    pairs = np.unique(np.stack([a[keep], b[keep]], axis=1), axis=0) if keep.any() else np.zeros((0, 2), dtype=np.int64)
    return ncomp, comp, pairs


def _random_topological_order(members, succ, indeg, rng):
    keys = rng.random(len(members)).tolist()
    pos = {c: i for i, c in enumerate(members)}
    deg = {c: indeg[c] for c in members}
    ready = [(keys[pos[c]], c) for c in members if deg[c] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        _, c = heapq.heappop(ready)
        order.append(c)
        for d in succ.get(c, ()):
            deg[d] -= 1
            if deg[d] == 0:
                heapq.heappush(ready, (keys[pos[d]], d))
    return order


def closed_set_sweep(net, residual, orders, rng):
    """Data for enumerating closed sets of the residual network.

    Returns the base closed set (everything reachable from s), the free
    components that may be added, and ``orders`` random topological orders of
    those components. Adding components in reverse order keeps the set closed.
    """
    base = residual.reachable_from(SOURCE)
    blocked = residual.reaching(SINK)
    ncomp, comp, pairs = _component_dag(net, residual)
    free_mask = ~(base | blocked)
    free_comps = np.unique(comp[free_mask]).tolist()
    free_set = set(free_comps)
    succ, indeg = {}, {c: 0 for c in free_comps}
    for a, b in pairs.tolist():
        if a in free_set and b in free_set:
            succ.setdefault(a, []).append(b)
            indeg[b] += 1
    members = {}
    for x in np.flatnonzero(free_mask).tolist():
        members.setdefault(int(comp[x]), []).append(x)
    topo = [_random_topological_order(free_comps, succ, indeg, rng) for _ in range(orders)]
    return base, members, topo


def _region_weight_profile(weights, t_in, t_out, steps):
    """Block weights of region nodes after each sweep step ``0..steps``.

    ``t_in``/``t_out`` give the step at which a node's in/out copy joins the
    closed set. Out joined means BLOCK1; in joined only means SEP.
    """
    size = steps + 2
    b1 = np.cumsum(np.bincount(np.minimum(t_out, size - 1), weights, minlength=size))
    ins = np.cumsum(np.bincount(np.minimum(t_in, size - 1), weights, minlength=size))
    both = np.cumsum(np.bincount(np.minimum(np.maximum(t_in, t_out), size - 1), weights, minlength=size))
    sep = ins - both
    return b1[: steps + 1], sep[: steps + 1]


def most_balanced_cut(graph, part, region, net, residual, orders=20, rng=None, candidates=None):
    """Among the minimum cuts visited by a reverse topological sweep, return
    the best balanced one (ties go to the smaller separator).

    If ``candidates`` is a list, every visited closed set is appended to it as
    a boolean mask over the network nodes.
    """
    rng = np.random.default_rng() if rng is None else rng
    base, members, topo = closed_set_sweep(net, residual, orders, rng)
    start = partition_from_closed_set(graph, part, region, base)
    if candidates is not None:
        candidates.append(base.copy())
    if not members:
        return start

    k = len(region.nodes)
    w = graph.vwgt[np.asarray(region.nodes, dtype=np.int64)].astype(np.float64)
    total = float(w.sum())
    comps = list(members)
    comp_of = np.full(net.num_nodes, -1, dtype=np.int64)
    for c, xs in members.items():
        comp_of[xs] = c
    never = len(comps) + 1
    in_ids = 2 + 2 * np.arange(k)
    out_ids = in_ids + 1
    # weight outside the region never changes
    outside = np.array(start.block_weight, dtype=np.float64)
    b1_0 = w[base[out_ids]].sum()
    sep_0 = w[base[in_ids] & ~base[out_ids]].sum()
    outside -= (b1_0, total - b1_0 - sep_0, sep_0)

    best_key = (start.max_block, start.separator_weight)
    best = None  # (order index, prefix length)
    steps = len(comps)
    pos = np.full(max(comps) + 1, never, dtype=np.int64)
    for oi, order in enumerate(topo):
        pos[list(reversed(order))] = np.arange(1, steps + 1)
        t = np.where(base, 0, np.where(comp_of >= 0, pos[np.maximum(comp_of, 0)], never))
        b1, sep = _region_weight_profile(w, t[in_ids], t[out_ids], steps)
        b2 = total - b1 - sep
        c1 = b1[1:] + outside[BLOCK1]
        c2 = b2[1:] + outside[BLOCK2]
        cs = sep[1:] + outside[SEP]
        mx = np.maximum(c1, c2)
        if candidates is not None:
            closed = base.copy()
            for c in reversed(order):
                closed[members[c]] = True
                candidates.append(closed.copy())
        # lexicographic (max block, separator), earliest step on ties
        i = int(np.lexsort((np.arange(steps), cs, mx))[0])
        key = (int(round(mx[i])), int(round(cs[i])))
        if key < best_key:
            best_key, best = key, (oi, i + 1)
    if best is None:
        return start
    oi, step = best
    closed = base.copy()
    for c in list(reversed(topo[oi]))[:step]:
        closed[members[c]] = True
    return partition_from_closed_set(graph, part, region, closed)


def adaptive_flow_refine(graph, part, balance, alpha0, rng, orders=20, most_balanced=True,
                         trace=None, max_failures=10):
    """Repeated flow refinement with the shrinking-region schedule.

    An unbalanced result halves ``alpha``; after ``max_failures`` failures
    ``alpha`` drops to 0, where the region is small enough that every cut is
    balanced. Stops when the flow cannot beat the current separator. If
    ``trace`` is a list, the alpha of every attempt is appended to it.
    """
    part = part.copy()
    alpha, failures = alpha0, 0
    while part.separator_weight > 0:
        if trace is not None:
            trace.append(alpha)
        region = grow_region(graph, part, balance, alpha, rng)
        net = build_flow_network(graph, region)
        value, residual = max_flow(net)
        if value >= part.separator_weight:
            break
        if most_balanced:
            cand = most_balanced_cut(graph, part, region, net, residual, orders, rng)
        else:
            cand = extract_separator(graph, part, region, net, residual)
        if is_feasible(cand, balance):
            part = cand
            alpha, failures = alpha0, 0
            continue
        if alpha == 0:
            # only reachable when c(V_i) + c(S) > L_max makes a budget negative
            break
        failures += 1
        alpha = 0.0 if failures >= max_failures else alpha / 2
    return part
