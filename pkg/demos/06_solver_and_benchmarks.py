"""
The full solver, the command line and the benchmark harness
===========================================================
"""

import subprocess
import sys
import tempfile
from pathlib import Path

from nodesep import preset, solve
from nodesep.bench import bench_harness
from nodesep.io import write_metis

from _grids import delaunay, grid

g = delaunay(3000, seed=4)
for name in ("flow0", "lsflow1"):
    r = solve(g, preset(name, seed=1))
    print(f"{name:8} separator {r.separator_weight:4d}  balance {r.balance:.2f}  "
          f"V-cycles {r.history}  {r.seconds:.1f}s")

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    write_metis(grid(30, 50), tmp / "grid.graph")

    # python -m nodesep is the same as the installed `nodesep` command
    subprocess.run([sys.executable, "-m", "nodesep", "--graph", str(tmp / "grid.graph"),
                    "--seed", "2", "--output", str(tmp / "grid.sep")], check=True)

    report = bench_harness([tmp / "grid.graph"], presets=("flow1", "lsflow1"), seeds=3, vcycles=1)
    for row in report.summary:
        print(row)
