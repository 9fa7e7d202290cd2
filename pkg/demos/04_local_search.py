"""
Local search on separators
==========================

Separator nodes move into a block; their neighbours in the other block are
pulled into the separator. Gains decide which moves are taken.
"""

import numpy as np

from nodesep import BLOCK1, BLOCK2, SEP, BalanceSpec, Partition3
from nodesep.localsearch import fm_pass, gains, local_search

from _grids import grid

a, b = 10, 16
g = grid(a, b)
balance = BalanceSpec.for_graph(g, 0.2)

# Start from a thick, ragged separator: three full columns
cols = np.arange(g.n) % b
labels = np.where(cols < 6, BLOCK1, np.where(cols < 9, SEP, BLOCK2))
p = Partition3(g, labels)
print("start:", p)

v = p.separator()[0]
print(f"gains of node {v} (to BLOCK1, to BLOCK2):", gains(g, p, v))

rng = np.random.default_rng(0)
p = fm_pass(g, p, balance, rng)
print("after one FM pass:", p)
p = local_search(g, p, balance, rng)
print("after full local search:", p)  # a straight column of 10 is optimal
