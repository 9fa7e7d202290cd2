"""
Matching and contraction
========================

Edges are rated, matched by the global path algorithm and contracted until
the graph is small.
"""

import numpy as np

from nodesep import preset
from nodesep.coarsening import (
    build_hierarchy,
    contract,
    gpa_matching,
    max_weight_cycle_matching,
    max_weight_path_matching,
)

from _grids import delaunay

# Dynamic programs on a single path and a single even cycle
print(max_weight_path_matching([3.0, 5.0, 3.0]))  # the two outer edges (6) beat the middle one (5)
print(max_weight_cycle_matching([1.0, 4.0, 1.0, 4.0]))

g = delaunay(5000)
rng = np.random.default_rng(1)
m = gpa_matching(g, rng=rng)
print(f"{m.size} pairs matched out of {g.n} nodes")

level = contract(g, m)
print("after one contraction:", level.coarse_graph.n, "nodes,",
      int(level.coarse_graph.vwgt.sum()), "total weight")  # weight is preserved

h = build_hierarchy(g, preset("lsflow1", coarsest_target=200), rng=rng)
print("hierarchy sizes:", [x.n for x in h.graphs])
