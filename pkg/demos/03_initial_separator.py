"""
Initial separators
==================

An edge-cut bisection is turned into a node separator by covering the cut
edges with as little node weight as possible.
"""

import numpy as np

from nodesep import BalanceSpec, validate_separator
from nodesep.initial import bisect_edge_cut, boundary_to_separator, compute_initial

from _grids import grid

g = grid(20, 30)
balance = BalanceSpec.for_graph(g, 0.2)
rng = np.random.default_rng(3)

p2 = bisect_edge_cut(g, balance, rng)
print("edge cut", p2.cut, "block weights", p2.block_weight)

part = boundary_to_separator(g, p2, rng)
print("separator from the cut:", part)

# Several repetitions, keep the best
best = compute_initial(g, balance, reps=10, rng=rng)
print("best of 10:", best, validate_separator(g, best, balance))
