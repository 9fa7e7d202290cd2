"""Benchmark harness: several seeds per instance and preset, summarized as
average separator size, best separator size and average balance.

CSV output uses '.' as the decimal separator.
"""

from __future__ import annotations

import argparse
import csv
import statistics
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .cli import REPORT_FIELDS, report_row, write_report
from .config import PRESETS, preset
from .driver import solve
from .graph import GraphError
from .io import read_metis

SUMMARY_FIELDS = ("graph", "preset", "runs", "avg", "best", "bal", "t_avg", "reference", "best_vs_reference")


@dataclass
class BenchReport:
    runs: list = field(default_factory=list)  # rows in the CLI report schema
    summary: list = field(default_factory=list)
    missing: list = field(default_factory=list)  # (path, reason)

    def best(self, graph, preset_name):
        for row in self.summary:
            if row["graph"] == graph and row["preset"] == preset_name:
                return row["best"]
        raise KeyError((graph, preset_name))


def load_reference(path):
    """``graph -> best`` from a CSV with at least the columns ``graph`` and ``best``."""
    with open(path, newline="") as fh:
        return {row["graph"]: int(row["best"]) for row in csv.DictReader(fh)}


def summarize(graph, preset_name, results, reference=None):
    weights = [r.separator_weight for r in results]
    best = min(weights)
    ref = None if reference is None else reference.get(graph)
    return {
        "graph": graph,
        "preset": preset_name,
        "runs": len(results),
        "avg": round(statistics.fmean(weights), 1),
        "best": best,
        "bal": round(statistics.fmean(r.balance for r in results), 2),
        "t_avg": round(statistics.fmean(r.seconds for r in results), 3),
        "reference": "" if ref is None else ref,
        "best_vs_reference": "" if not ref else round(best / ref, 3),
    }


def check_result(graph, result):
    """Harness invariants: valid balanced output, weights never grow over V-cycles."""
    if not result.valid:
        raise AssertionError(f"{graph}: invalid or unbalanced separator")
    if result.balance > 1 + result.config.epsilon + 1e-9:
        raise AssertionError(f"{graph}: balance {result.balance:.4f} exceeds 1+eps")
    h = result.history
    if any(b > a for a, b in zip(h, h[1:])):
        raise AssertionError(f"{graph}: V-cycle weights increased {h}")


def bench_harness(instances, presets=("lsflow1",), seeds=10, out=None, reference=None,
                  exclude=(), runs_out=None, epsilon=0.20, vcycles=3, progress=None):
    """Run every (instance, preset, seed) and summarize per instance and preset.

    Missing or unreadable instance files are recorded in ``report.missing`` and
    skipped. ``reference`` is a mapping or CSV path of best known values.
    """
    if isinstance(reference, (str, Path)):
        reference = load_reference(reference)
    excluded = set(exclude)
    report = BenchReport()
    for path in instances:
        name = Path(path).stem
        if name in excluded:
            continue
        try:
            graph = read_metis(path)
        except (OSError, GraphError) as exc:
            report.missing.append((str(path), str(exc)))
            continue
        for preset_name in presets:
            results = []
            for seed in range(seeds):
                cfg = preset(preset_name, epsilon=epsilon, seed=seed, vcycles=vcycles)
                result = solve(graph, cfg)
                check_result(name, result)
                results.append(result)
                report.runs.append(report_row(name, graph, preset_name, result))
                if progress is not None:
                    progress(name, preset_name, seed, result)
            report.summary.append(summarize(name, preset_name, results, reference))
    if out is not None:
        with open(out, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=SUMMARY_FIELDS)
            writer.writeheader()
            for row in report.summary:
                writer.writerow({**row, "bal": f"{row['bal']:.2f}"})
    if runs_out is not None:
        write_report(runs_out, report.runs)
    return report


def main(argv=None):
    p = argparse.ArgumentParser(prog="nodesep-bench", description="Run the benchmark harness.")
    p.add_argument("instances", nargs="*", help="METIS graph files")
    p.add_argument("--presets", nargs="+", choices=sorted(PRESETS), default=["lsflow1"])
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--eps", type=float, default=0.20)
    p.add_argument("--vcycles", type=int, default=3)
    p.add_argument("--out", help="summary CSV")
    p.add_argument("--runs", help="per-run CSV (" + ",".join(REPORT_FIELDS) + ")")
    p.add_argument("--reference", help="CSV with graph,best columns to compare against")
    p.add_argument("--exclude", nargs="*", default=[], help="instance names to skip")
    args = p.parse_args(argv)

    def progress(name, preset_name, seed, result):
        print(f"{name} {preset_name} seed={seed} sep={result.separator_weight} "
              f"bal={result.balance:.2f} t={result.seconds:.1f}s", file=sys.stderr)

    report = bench_harness(args.instances, args.presets, args.seeds, args.out, args.reference,
                           args.exclude, args.runs, args.eps, args.vcycles, progress)
    for path, reason in report.missing:
        print(f"skipped {path}: {reason}", file=sys.stderr)
    for row in report.summary:
        print(f"{row['graph']:<16} {row['preset']:<10} avg {row['avg']:>9} best {row['best']:>7} "
              f"bal {row['bal']:.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
