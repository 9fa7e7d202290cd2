"""
Graphs, partitions and the METIS file format
============================================
"""

import io

from nodesep import BLOCK1, BLOCK2, SEP, BalanceSpec, Partition3, build_graph, validate_separator
from nodesep.io import parse_metis, write_metis, write_separator

# Parallel edges are merged and their weights summed
g = build_graph(2, [(0, 1, 1), (0, 1, 2)])
print(g.n, g.m, g.edges())

# A path a-b-c with b removed splits into two halves
path = build_graph(3, [(0, 1), (1, 2)])
balance = BalanceSpec.for_graph(path, 0.2)
print("L_max =", balance.lmax)

good = Partition3(path, [BLOCK1, SEP, BLOCK2])
bad = Partition3(path, [BLOCK1, BLOCK2, BLOCK2])
print(validate_separator(path, good, balance))
print(validate_separator(path, bad, balance))  # edge a-b crosses the blocks

# Round trip through the METIS text format (1-based neighbour lists)
text = "3 2\n2\n1 3\n2\n"
h = parse_metis(io.StringIO(text))
buf = io.StringIO()
write_metis(h, buf)
print(buf.getvalue())

# A separator file has one label per line: 0, 1, or 2 for the separator
out = io.StringIO()
write_separator(good, out)
print(out.getvalue().split())
