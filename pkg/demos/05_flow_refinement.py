"""
Flow-based refinement
=====================

A region around the separator is grown into both blocks, nodes are split
into in/out copies, and a minimum s-t cut gives the lightest separator
inside the region. Among all minimum cuts the most balanced one is kept.
"""

import numpy as np

from nodesep import BLOCK1, BLOCK2, SEP, BalanceSpec, Partition3, build_graph
from nodesep.flow import adaptive_flow_refine, build_flow_network, grow_region, max_flow

# A weighted path whose lightest node is off-centre
weights = [3, 3, 3, 1, 3, 3, 3, 3, 3]
g = build_graph(9, [(i, i + 1) for i in range(8)], weights)
balance = BalanceSpec.for_graph(g, 0.2)
p = Partition3(g, [BLOCK1] * 4 + [SEP] + [BLOCK2] * 4)
print("start:", p, "L_max", balance.lmax)

rng = np.random.default_rng(0)
region = grow_region(g, p, balance, 1.0, rng)
print("region:", region.nodes, "budgets:", region.budgets)

net = build_flow_network(g, region)
value, _ = max_flow(net)
print("max flow:", value, "(network has", net.num_nodes, "nodes)")

trace = []
out = adaptive_flow_refine(g, p, balance, 1.0, rng, trace=trace)
print("refined:", out, "alpha values tried:", trace)
