"""Initial separators on the coarsest graph.

A balanced edge-cut bisection is computed first; the endpoints of all cut
edges form a separator which is then shrunk to a minimum-weight vertex cover
of the cut edges with the flow machinery.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import breadth_first_order, connected_components

from .coarsening import contract, gpa_matching
from .config import RatingKind
from .flow import FlowRegion, build_flow_network, max_flow, most_balanced_cut
from .graph import BLOCK1, BLOCK2, SEP, Partition3

BISECT_COARSE_SIZE = 100
LEVEL_REUSE = 5
GROW_TRIES = 4


@dataclass
class Partition2:
    labels: list
    cut: int
    block_weight: list

    @property
    def max_block(self):
        return max(self.block_weight)


def cut_weight(graph, labels):
    us, vs, ws = graph.edges()
    lab = np.asarray(labels)
    return int(ws[lab[us] != lab[vs]].sum())


def _grow(graph, balance, rng):
    """BFS region growing of BLOCK1 up to half of the total weight."""
    n = graph.n
    half, lmax = balance.half, balance.lmax
    labels = [BLOCK2] * n
    if n == 0:
        return labels
    csr = graph.csr()
    ncomp, comp = connected_components(csr, directed=False)
    sizes = np.bincount(comp, weights=graph.vwgt, minlength=ncomp)
    # largest component first; equal sizes in random order
    comp_order = np.lexsort((rng.random(ncomp), -sizes)).tolist()
    members = [[] for _ in range(ncomp)]
    for v, c in enumerate(comp.tolist()):
        members[c].append(v)

    weights, adj = graph.weights, graph.adj
    keys = rng.random(n).tolist()  # random neighbour order
    visited = bytearray(n)
    w1 = 0
    for c in comp_order:
        if w1 >= half:
            break
        # pseudo-peripheral seed: the last node of a BFS from a random node
        start = members[c][int(rng.integers(len(members[c])))]
        seed = int(breadth_first_order(csr, start, directed=False, return_predecessors=False)[-1])
        queue = [seed]
        visited[seed] = 1
        head = 0
        while head < len(queue) and w1 < half:
            v = queue[head]
            head += 1
            if w1 + weights[v] > lmax:
                continue
            labels[v] = BLOCK1
            w1 += weights[v]
            for u in sorted(adj[v], key=keys.__getitem__):
                if not visited[u]:
                    visited[u] = 1
                    queue.append(u)
    return labels


def _fm_edge_cut_pass(graph, labels, bw, lmax, rng, stall_limit):
    """One FM pass on the edge cut; returns the new cut improvement (>= 0)."""
    n = graph.n
    adj, adjw, weights = graph.adj, graph.adjw, graph.weights
    lab = np.asarray(labels)
    src = np.repeat(np.arange(n), graph.degrees)
    same = lab[src] == lab[graph.adjncy]
    inn = np.bincount(src, graph.adjwgt * same, minlength=n).astype(np.int64).tolist()
    ext = np.bincount(src, graph.adjwgt * ~same, minlength=n).astype(np.int64).tolist()

    ties = rng.random(n).tolist()
    heaps = ([], [])
    for v in range(n):
        if ext[v] > 0:
            heaps[labels[v]].append((inn[v] - ext[v], ties[v], v))
    for h in heaps:
        heapq.heapify(h)

    moved = bytearray(n)
    log = []
    cut_delta = 0
    best_delta, best_bal, best_len = 0, max(bw), 0
    since_best = 0
    while since_best < stall_limit:
        choice = None
        for side in (BLOCK1, BLOCK2):
            h = heaps[side]
            while h:
                neg_gain, _, v = h[0]
                if moved[v] or labels[v] != side or inn[v] - ext[v] != neg_gain:
                    heapq.heappop(h)
                    continue
                break
            if h and bw[1 - side] + weights[h[0][2]] <= lmax:
                if choice is None or h[0] < heaps[choice][0]:
                    choice = side
        if choice is None:
            break
        neg_gain, _, v = heapq.heappop(heaps[choice])
        to = 1 - choice
        moved[v] = 1
        labels[v] = to
        bw[choice] -= weights[v]
        bw[to] += weights[v]
        cut_delta += neg_gain
        ext[v], inn[v] = inn[v], ext[v]
        log.append(v)
        for u, w in zip(adj[v], adjw[v]):
            if labels[u] == to:
                inn[u] += w
                ext[u] -= w
            else:
                inn[u] -= w
                ext[u] += w
            if not moved[u] and ext[u] > 0:
                heapq.heappush(heaps[labels[u]], (inn[u] - ext[u], ties[u], u))
        bal = max(bw)
        if cut_delta < best_delta or (cut_delta == best_delta and bal < best_bal):
            best_delta, best_bal, best_len = cut_delta, bal, len(log)
            since_best = 0
        else:
            since_best += 1
    for v in reversed(log[best_len:]):
        frm = labels[v]
        labels[v] = 1 - frm
        bw[frm] -= weights[v]
        bw[1 - frm] += weights[v]
    return -best_delta


def _refine_cut(graph, labels, balance, rng, max_passes):
    bw = [0, 0]
    for v, lab in enumerate(labels):
        bw[lab] += graph.weights[v]
    stall = max(50, graph.n // 100)
    cut = cut_weight(graph, labels)
    for _ in range(max_passes):
        before = (cut, max(bw))
        cut -= _fm_edge_cut_pass(graph, labels, bw, balance.lmax, rng, stall)
        if (cut, max(bw)) >= before:
            break
    return Partition2(labels, cut, bw)


def bisection_levels(graph, rng, coarse_size=BISECT_COARSE_SIZE):
    """GPA contractions down to at most ``coarse_size`` nodes.

    Returns the graphs (finest first) and the fine-to-coarse maps between them.
    """
    graphs, maps = [graph], []
    while graphs[-1].n > coarse_size:
        current = graphs[-1]
        level = contract(current, gpa_matching(current, RatingKind.EXP_STAR, rng=rng))
        if level.coarse_graph.n > 0.95 * current.n:
            break
        graphs.append(level.coarse_graph)
        maps.append(level.fine_to_coarse)
    return graphs, maps


def bisect_edge_cut(graph, balance, rng, max_passes=20, levels=None):
    """Balanced 2-way partition by greedy region growing plus edge-cut FM.

    Growing (best of ``GROW_TRIES``) happens on the coarsest graph of
    ``levels``, built on demand with :func:`bisection_levels`; FM runs on
    every level on the way back up.
    """
    graphs, maps = bisection_levels(graph, rng) if levels is None else levels
    bottom = graphs[-1]
    p2 = None
    for _ in range(GROW_TRIES):
        cand = _refine_cut(bottom, _grow(bottom, balance, rng), balance, rng, max_passes)
        if p2 is None or (cand.cut, cand.max_block) < (p2.cut, p2.max_block):
            p2 = cand
    for g, f2c in zip(reversed(graphs[:-1]), reversed(maps)):
        labels = np.asarray(p2.labels)[f2c].tolist()
        p2 = _refine_cut(g, labels, balance, rng, max_passes)
    return p2


def boundary_to_separator(graph, p2, rng=None, orders=20):
    """Smallest-weight separator made of endpoints of cut edges.

    Equivalent to a minimum-weight vertex cover of the bipartite graph formed
    by the cut edges, solved as a node-capacitated flow problem.
    """
    rng = np.random.default_rng() if rng is None else rng
    labels = p2.labels
    boundary = []
    for v in range(graph.n):
        lv = labels[v]
        for u in graph.adj[v]:
            if labels[u] != lv:
                boundary.append(v)
                break
    part = Partition3(graph, labels)
    if not boundary:
        return part
    for v in boundary:
        part.move(graph, v, SEP)
    left = [v for v in boundary if labels[v] == BLOCK1]
    right = [v for v in boundary if labels[v] == BLOCK2]
    region = FlowRegion(boundary, left, right)
    net = build_flow_network(graph, region)
    _, residual = max_flow(net)
    return most_balanced_cut(graph, part, region, net, residual, orders, rng)


def compute_initial(graph, balance, reps=25, rng=None, orders=20):
    """Best of ``reps`` independent bisection + vertex cover runs.

    Every ``LEVEL_REUSE`` repetitions share one bisection hierarchy.
    """
    rng = np.random.default_rng() if rng is None else rng
    best = None
    levels = None
    for i, child in enumerate(rng.spawn(reps)):
        if i % LEVEL_REUSE == 0:
            levels = bisection_levels(graph, child)
        p2 = bisect_edge_cut(graph, balance, child, levels=levels)
        part = boundary_to_separator(graph, p2, child, orders)
        if best is None or part.key() < best.key():
            best = part
    return best
