"""Multilevel node separator pipeline and iterated V-cycles."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .coarsening import build_hierarchy, project_up
from .config import Mode, RatingKind, SepConfig
from .flow import adaptive_flow_refine
from .graph import BalanceSpec, validate_separator
from .initial import compute_initial
from .localsearch import local_search

# ratings drawn from in later V-cycles
CYCLE_RATINGS = (RatingKind.EXP_STAR, RatingKind.EXP_2STAR, RatingKind.MAX, RatingKind.LOG)


def refine(graph, part, balance, cfg, rng):
    if cfg.mode is Mode.LS_PLUS_FLOW:
        part = local_search(graph, part, balance, rng, cfg.subset_size)
    return adaptive_flow_refine(graph, part, balance, cfg.alpha, rng, orders=cfg.topo_orders)


def run_multilevel(graph, cfg, pinned=None, rng=None, rating=None):
    """One multilevel cycle: coarsen, initial separator, refine while uncoarsening.

    With ``pinned`` the hierarchy keeps that separator intact and its coarse
    image competes with a freshly computed initial separator.
    """
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    coarsen_rng, initial_rng, refine_rng = rng.spawn(3)
    balance = BalanceSpec.for_graph(graph, cfg.epsilon)
    hierarchy = build_hierarchy(graph, cfg, pinned, coarsen_rng, rating)
    coarsest = hierarchy.coarsest
    part = compute_initial(coarsest, balance, cfg.initial_reps, initial_rng, cfg.topo_orders)
    if pinned is not None:
        carried = hierarchy.pinned[-1]
        if carried.key() <= part.key():
            part = carried

    level_rngs = refine_rng.spawn(len(hierarchy))
    for i in range(len(hierarchy) - 1, -1, -1):
        g = hierarchy.graphs[i]
        part = refine(g, part, balance, cfg, level_rngs[i])
        if i > 0:
            part = project_up(hierarchy.graphs[i - 1], hierarchy.levels[i - 1], part)
    return part


def vcycle_solve(graph, cfg, rng=None, history=None):
    """``cfg.vcycles`` multilevel cycles, each seeded with the best solution so far.

    If ``history`` is a list, the separator weight after every cycle is
    appended to it.
    """
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    cycle_rngs = rng.spawn(cfg.vcycles)
    part = run_multilevel(graph, cfg, None, cycle_rngs[0])
    if history is not None:
        history.append(part.separator_weight)
    others = [r for r in CYCLE_RATINGS if r is not cfg.rating] or list(CYCLE_RATINGS)
    for crng in cycle_rngs[1:]:
        rating = others[int(crng.integers(len(others)))]
        candidate = run_multilevel(graph, cfg, part, crng, rating)
        if candidate.key() < part.key():
            part = candidate
        if history is not None:
            history.append(part.separator_weight)
    return part


@dataclass
class RunResult:
    separator_weight: int
    block_weights: tuple
    balance: float
    seconds: float
    seed: int
    config: SepConfig
    partition: object = field(repr=False, default=None)
    valid: bool = True
    history: list = field(default_factory=list)  # separator weight after each V-cycle

    @property
    def c1(self):
        return self.block_weights[0]

    @property
    def c2(self):
        return self.block_weights[1]


def solve(graph, cfg=None):
    """Run the full algorithm and report the quantities used in benchmarks."""
    cfg = SepConfig() if cfg is None else cfg
    start = time.perf_counter()
    history = []
    part = vcycle_solve(graph, cfg, history=history)
    seconds = time.perf_counter() - start
    balance_spec = BalanceSpec.for_graph(graph, cfg.epsilon)
    report = validate_separator(graph, part, balance_spec)
    half = max(balance_spec.half, 1)
    w1, w2, _ = part.block_weight
    return RunResult(
        separator_weight=report.separator_weight,
        block_weights=(w1, w2),
        balance=max(w1, w2) / half,
        seconds=seconds,
        seed=cfg.seed,
        config=cfg,
        partition=part,
        valid=report.is_separator and report.is_balanced,
        history=history,
    )
