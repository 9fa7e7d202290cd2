"""FM-style local search on node separators.

A move takes a separator node ``v`` into block ``t``; its neighbours in the
other block are pulled into the separator. The gain of such a move is
``c(v)`` minus the weight of the pulled neighbours.
"""

from __future__ import annotations

import enum
import heapq
import random

from .graph import BLOCK1, BLOCK2, SEP

KEEP_SEP = "keep_sep"
ALLOW_GROWTH = "allow_growth"


class BalanceStrategy(enum.Enum):
    KEEP_SEP = KEEP_SEP
    ALLOW_GROWTH = ALLOW_GROWTH


def gains(graph, part, v):
    """``(gain_to_V1, gain_to_V2)`` of separator node ``v``."""
    if part.labels[v] != SEP:
        raise ValueError(f"node {v} is not in the separator")
    pull = [0, 0]
    labels, weights = part.labels, graph.weights
    for u in graph.adj[v]:
        lu = labels[u]
        if lu != SEP:
            pull[lu] += weights[u]
    c = weights[v]
    return c - pull[BLOCK2], c - pull[BLOCK1]


class SeparatorFM:
    """Move machinery shared by all separator searches.

    Keeps per-target gain heaps for eligible separator nodes, a move log for
    roll-back and a ``moved`` marker (nodes moved out of the separator), which
    callers may share between searches to enforce one move per node.
    """

    def __init__(self, graph, part, lmax, rng, moved=None):
        self.graph = graph
        self.part = part
        self.lmax = lmax
        self.rng = rng
        self.moved = moved if moved is not None else bytearray(graph.n)
        self.gain = {}  # v -> [gain_to_V1, gain_to_V2] for tracked nodes
        self.heaps = ([], [])
        self.log = []  # (v, target, pulled nodes)
        self.moves_out = set()
        self._rand = random.Random(int(rng.integers(2**63))).random

    def track(self, v):
        g = list(gains(self.graph, self.part, v))
        self.gain[v] = g
        tie = self._rand()
        heapq.heappush(self.heaps[BLOCK1], (-g[BLOCK1], tie, v))
        heapq.heappush(self.heaps[BLOCK2], (-g[BLOCK2], tie, v))

    def seed(self, nodes):
        for v in nodes:
            if self.part.labels[v] == SEP and not self.moved[v]:
                self.track(v)

    def _valid(self, entry, target):
        neg, _, v = entry
        g = self.gain.get(v)
        return g is not None and g[target] == -neg

    def pop(self, target):
        """Best eligible move into ``target`` that respects L_max, or None."""
        h = self.heaps[target]
        part, weights = self.part, self.graph.weights
        room = self.lmax - part.block_weight[target]
        skipped = []
        found = None
        while h:
            entry = heapq.heappop(h)
            if not self._valid(entry, target):
                continue
            if weights[entry[2]] <= room:
                found = entry
                break
            skipped.append(entry)
        for entry in skipped:
            heapq.heappush(h, entry)
        return found

    def peek_gain(self, target):
        h = self.heaps[target]
        while h and not self._valid(h[0], target):
            heapq.heappop(h)
        return -h[0][0] if h else None

    def move(self, v, target):
        graph, part = self.graph, self.part
        labels, weights, adj = part.labels, graph.weights, graph.adj
        other = 1 - target
        part.move(graph, v, target)
        self.moved[v] = 1
        self.moves_out.add(v)
        del self.gain[v]
        cv = weights[v]
        pulled = []
        for x in adj[v]:
            lx = labels[x]
            if lx == SEP:
                g = self.gain.get(x)
                if g is not None:
                    g[other] -= cv
                    heapq.heappush(self.heaps[other], (-g[other], self._rand(), x))
            elif lx == other:
                pulled.append(x)
        for w in pulled:
            part.move(graph, w, SEP)
        for w in pulled:
            cw = weights[w]
            for y in adj[w]:
                if labels[y] == SEP:
                    g = self.gain.get(y)
                    if g is not None:
                        g[target] += cw
                        heapq.heappush(self.heaps[target], (-g[target], self._rand(), y))
        for w in pulled:
            if not self.moved[w]:
                self.track(w)
        self.log.append((v, target, pulled))

    def undo_to(self, length):
        graph, part = self.graph, self.part
        while len(self.log) > length:
            v, target, pulled = self.log.pop()
            for w in pulled:
                part.move(graph, w, 1 - target)
            part.move(graph, v, SEP)


def _overload(part, lmax):
    return max(0, part.max_block - lmax)


def _run(graph, part, balance, rng, seeds, moved=None, strategy=None):
    """Core FM loop; mutates ``part`` and returns it.

    Without ``strategy`` targets alternate and the best feasible prefix is
    kept. With a balancing strategy every move drains the heavier block.
    """
    lmax = balance.lmax
    fm = SeparatorFM(graph, part, lmax, rng, moved)
    start_sep = part.separator_weight
    stall_limit = max(50, len(seeds))
    fm.seed(seeds)

    def key():
        over = _overload(part, lmax)
        if strategy is None:
            return (over > 0, part.separator_weight, part.max_block)
        if strategy == KEEP_SEP:
            if part.separator_weight > start_sep:
                return None
            return (over, part.separator_weight, part.max_block)
        return (part.max_block, part.separator_weight)

    best_key, best_len = key(), 0
    since_best = 0
    turn = int(rng.integers(2))
    while since_best < stall_limit:
        if strategy is None:
            entry = fm.pop(turn)
            if entry is None:
                turn = 1 - turn
                entry = fm.pop(turn)
        else:
            if _overload(part, lmax) == 0:
                break
            w1, w2 = part.block_weight[BLOCK1], part.block_weight[BLOCK2]
            turn = BLOCK2 if w1 > w2 else BLOCK1
            entry = fm.pop(turn)
        if entry is None:
            break
        fm.move(entry[2], turn)
        turn = 1 - turn
        k = key()
        if k is not None and (best_key is None or k < best_key):
            best_key, best_len = k, len(fm.log)
            since_best = 0
        else:
            since_best += 1
    fm.undo_to(best_len)
    return part


def fm_pass(graph, part, balance, rng):
    """Classic FM pass seeded with every separator node (random order)."""
    part = part.copy()
    seeds = part.separator()
    order = rng.permutation(len(seeds)).tolist()
    return _run(graph, part, balance, rng, [seeds[i] for i in order])


def balance_pass(graph, part, balance, strategy, rng):
    """Move nodes into the lighter block until the partition is balanced.

    KEEP_SEP keeps the best prefix whose separator is no heavier than the
    input; ALLOW_GROWTH keeps the best balanced prefix (smaller separator on
    ties).
    """
    strategy = BalanceStrategy(strategy).value
    part = part.copy()
    if _overload(part, balance.lmax) == 0:
        return part
    seeds = part.separator()
    order = rng.permutation(len(seeds)).tolist()
    return _run(graph, part, balance, rng, [seeds[i] for i in order], strategy=strategy)


def localized_rounds(graph, part, balance, subset_size=5, rng=None):
    """Rounds of FM searches each started from a few random separator nodes."""
    part = part.copy()
    while True:
        start = part.separator_weight
        todo = part.separator()
        todo = [todo[i] for i in rng.permutation(len(todo)).tolist()]
        moved = bytearray(graph.n)
        while todo:
            seeds = []
            while todo and len(seeds) < subset_size:
                v = todo.pop()
                if part.labels[v] == SEP and not moved[v]:
                    seeds.append(v)
            if seeds:
                _run(graph, part, balance, rng, seeds, moved)
        if part.separator_weight >= start:
            return part


def _quality(part, balance):
    return (part.max_block > balance.lmax, part.separator_weight, part.max_block)


def local_search(graph, part, balance, rng, subset_size=5):
    """FM passes with balancing, then localized rounds, until nothing improves."""
    part = part.copy()
    while True:
        before = _quality(part, balance)
        part = fm_pass(graph, part, balance, rng)
        if part.max_block > balance.lmax:
            part = balance_pass(graph, part, balance, KEEP_SEP, rng)
            if part.max_block > balance.lmax:
                part = balance_pass(graph, part, balance, ALLOW_GROWTH, rng)
        part = localized_rounds(graph, part, balance, subset_size, rng)
        if _quality(part, balance) >= before:
            return part
