import itertools

import numpy as np
import pytest

from nodesep.flow import (
    SINK,
    SOURCE,
    FlowRegion,
    adaptive_flow_refine,
    build_flow_network,
    extract_separator,
    grow_region,
    max_flow,
    most_balanced_cut,
)
from nodesep.graph import BLOCK1, BLOCK2, SEP, BalanceSpec, Partition3, build_graph, validate_separator

from oracles import min_vertex_cut, random_connected_graph, separates
from test_localsearch import random_valid_partition


def path(n, weights=None):
    return build_graph(n, [(i, i + 1) for i in range(n - 1)], weights)


def test_budget_alpha0():
    g = path(10)
    b = BalanceSpec.for_graph(g, 0.2)
    assert b.lmax == 6
    p = Partition3(g, [BLOCK1] * 5 + [SEP] + [BLOCK2] * 4)
    region = grow_region(g, p, b, 0.0, np.random.default_rng(0))
    assert region.budgets == (1, 0)
    assert sorted(region.nodes) == [4, 5]


def test_zero_budgets_give_separator_only():
    g = path(7)
    b = BalanceSpec.for_graph(g, 0.2)
    p = Partition3(g, [BLOCK1] * 3 + [SEP] + [BLOCK2] * 3)
    region = grow_region(g, p, b, 0.0, np.random.default_rng(0))
    assert region.budgets == (0, 0)
    assert region.nodes == [3]
    assert region.left == [3] and region.right == [3]


def test_budget_alpha1():
    g = path(10)
    b = BalanceSpec.for_graph(g, 0.2)
    p = Partition3(g, [BLOCK1] * 5 + [SEP] + [BLOCK2] * 4)
    region = grow_region(g, p, b, 1.0, np.random.default_rng(0))
    assert region.budgets == (2 * 6 - 4 - 1, 2 * 6 - 5 - 1)


def test_region_respects_budget_with_skipping():
    # heavy neighbour of S is skipped, its light sibling still enters
    g = build_graph(5, [(0, 1), (0, 2), (0, 3), (3, 4)], [1, 5, 1, 1, 1])
    p = Partition3(g, [SEP, BLOCK1, BLOCK1, BLOCK2, BLOCK2])
    b = BalanceSpec(0.2, 100)
    region = grow_region(g, p, b, 0.0, np.random.default_rng(0))
    assert 2 in region.nodes
    assert sum(g.weights[v] for v in region.nodes if p.labels[v] == BLOCK1) <= region.budgets[0]


def test_empty_separator_gives_no_region():
    g = path(4)
    p = Partition3(g, [BLOCK1, BLOCK1, BLOCK2, BLOCK2])
    assert grow_region(g, p, BalanceSpec.for_graph(g, 0.2), 1.0, np.random.default_rng(0)) is None


def test_single_node_network():
    g = build_graph(1, [], [7])
    net = build_flow_network(g, FlowRegion([0], [0], [0]))
    value, _ = max_flow(net)
    assert value == 7
    assert net.num_nodes == 4


def test_path_network():
    g = path(3)
    net = build_flow_network(g, FlowRegion([0, 1, 2], [0], [2]))
    finite = net.caps < net.inf
    assert np.all(net.heads[finite] == net.tails[finite] + 1)
    assert np.all(net.tails[finite] % 2 == 0)
    value, residual = max_flow(net)
    assert value == 1 == min_vertex_cut(g, [0], [2])
    part = extract_separator(g, Partition3(g, [SEP] * 3), net.region, net, residual)
    assert part.separator_weight == 1
    assert separates(g, set(part.separator()), [0], [2])


def test_component_away_from_borders_carries_no_flow():
    g = build_graph(4, [(0, 1), (2, 3)])
    net = build_flow_network(g, FlowRegion([0, 1, 2, 3], [0], [1]))
    value, residual = max_flow(net)
    assert value == 1
    mid = {2 + 2 * 2, 3 + 2 * 2, 2 + 2 * 3, 3 + 2 * 3}
    for t, h, f in zip(net.tails, net.heads, residual.flow):
        if t in mid or h in mid:
            assert f == 0


def test_diamond():
    g = build_graph(2, [])
    net = build_flow_network(g, FlowRegion([0, 1], [0, 1], [0, 1]))
    assert max_flow(net)[0] == 2


def test_serial_bottleneck():
    g = path(5, [4, 3, 1, 6, 2])
    net = build_flow_network(g, FlowRegion(list(range(5)), [0], [4]))
    assert max_flow(net)[0] == 1


def test_star_center_beats_leaves():
    g = build_graph(4, [(0, 1), (0, 2), (0, 3)])
    region = FlowRegion([0, 1, 2, 3], [0], [1, 2, 3])
    net = build_flow_network(g, region)
    value, residual = max_flow(net)
    part = extract_separator(g, Partition3(g, [BLOCK1, SEP, SEP, SEP]), region, net, residual)
    assert value == 1
    assert part.separator() == [0]


def test_most_balanced_on_path4():
    g = path(4)
    region = FlowRegion([0, 1, 2, 3], [0], [3])
    net = build_flow_network(g, region)
    value, residual = max_flow(net)
    assert value == 1
    part = most_balanced_cut(g, Partition3(g, [SEP] * 4), region, net, residual, 20, np.random.default_rng(0))
    assert part.separator_weight == 1
    assert part.separator()[0] in (1, 2)
    assert part.max_block == 2


def test_unique_min_cut_matches_extraction():
    g = path(3, [3, 1, 3])
    region = FlowRegion([0, 1, 2], [0], [2])
    net = build_flow_network(g, region)
    _, residual = max_flow(net)
    p = Partition3(g, [SEP] * 3)
    assert most_balanced_cut(g, p, region, net, residual, 20, np.random.default_rng(0)) == extract_separator(
        g, p, region, net, residual
    )


def brute_force_max_flow(net):
    """Minimum capacity over all s-t arc cuts, by enumerating source sides."""
    inner = list(range(2, net.num_nodes))
    best = None
    for r in range(len(inner) + 1):
        for side in itertools.combinations(inner, r):
            closed = {SOURCE, *side}
            cap = sum(int(c) for t, h, c in zip(net.tails, net.heads, net.caps) if t in closed and h not in closed)
            best = cap if best is None else min(best, cap)
    return best


@pytest.mark.parametrize("seed", range(30))
def test_max_flow_matches_arc_cut_brute_force(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    g = random_connected_graph(rng, n, int(rng.integers(0, 4)), max_weight=4)
    left = [v for v in range(n) if rng.random() < 0.4] or [0]
    right = [v for v in range(n) if rng.random() < 0.4] or [n - 1]
    net = build_flow_network(g, FlowRegion(list(range(n)), left, right))
    assert max_flow(net)[0] == brute_force_max_flow(net)


@pytest.mark.parametrize("seed", range(60))
def test_vertex_cut_equivalence(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 11))
    g = random_connected_graph(rng, n, int(rng.integers(0, 2 * n)), max_weight=4)
    order = rng.permutation(n).tolist()
    k = int(rng.integers(1, n))
    left = order[: int(rng.integers(1, k + 1))]
    right = order[k:]
    region = FlowRegion(list(range(n)), left, right)
    net = build_flow_network(g, region)
    value, residual = max_flow(net)
    assert value == min_vertex_cut(g, left, right)
    part = extract_separator(g, Partition3(g, [SEP] * n), region, net, residual)
    assert part.separator_weight == value
    assert separates(g, set(part.separator()), left, right)


def _residual_closed(residual, mask):
    coo = residual.matrix.tocoo()
    return not np.any(mask[coo.row] & ~mask[coo.col])


@pytest.mark.parametrize("seed", range(30))
def test_min_cut_family(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, int(rng.integers(4, 60)), int(rng.integers(0, 60)), max_weight=3)
    b = BalanceSpec.for_graph(g, 0.2)
    p = random_valid_partition(g, rng, b)
    region = grow_region(g, p, b, float(rng.choice([0.0, 0.5, 1.0])), rng)
    net = build_flow_network(g, region)
    value, residual = max_flow(net)
    assert value <= p.separator_weight
    cands = []
    best = most_balanced_cut(g, p, region, net, residual, 5, rng, candidates=cands)
    assert cands
    for mask in cands:
        assert mask[SOURCE] and not mask[SINK]
        assert _residual_closed(residual, mask)
        in_c, out_c = mask[2::2], mask[3::2]
        weight = sum(g.weights[u] for u, a, o in zip(region.nodes, in_c, out_c) if a and not o)
        assert weight == value
    assert best.separator_weight == value
    assert validate_separator(g, best, b).is_separator


@pytest.mark.parametrize("seed", range(40))
def test_alpha_zero_is_always_balanced(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, int(rng.integers(3, 80)), int(rng.integers(0, 80)), max_weight=3)
    b = BalanceSpec.for_graph(g, float(rng.choice([0.0, 0.03, 0.2])))
    p = random_valid_partition(g, rng, b)
    region = grow_region(g, p, b, 0.0, rng)
    if min(region.budgets) < 0:
        # c(V_i) + c(S) > L_max: the balance argument does not apply, the
        # refinement keeps its input instead
        out = adaptive_flow_refine(g, p, b, 0.0, rng)
        assert validate_separator(g, out, b).is_balanced
        return
    net = build_flow_network(g, region)
    _, residual = max_flow(net)
    for cut in (
        extract_separator(g, p, region, net, residual),
        most_balanced_cut(g, p, region, net, residual, 5, rng),
    ):
        r = validate_separator(g, cut, b)
        assert r.is_separator and r.is_balanced


def lure_path():
    """Weight-2 path with one weight-1 node 120 steps into BLOCK1.

    Cutting at the light node is cheaper than the separator but overloads
    BLOCK2; it lies just past the alpha=0 region yet inside every alpha>0
    region down to 1/512.
    """
    k = 600
    weights = [2] * (2 * k + 1)
    s = k  # separator node
    z = s - 121
    weights[z] = 1
    labels = [BLOCK1] * k + [SEP] + [BLOCK2] * k
    g = path(2 * k + 1, weights)
    return g, Partition3(g, labels)


def test_alpha_schedule():
    g, p = lure_path()
    b = BalanceSpec.for_graph(g, 0.2)
    assert b.lmax == 1441
    trace = []
    out = adaptive_flow_refine(g, p, b, 1.0, np.random.default_rng(0), trace=trace)
    assert trace == [1.0 / 2**i for i in range(10)] + [0.0]
    assert out == p


def test_early_exit_when_optimal():
    g = path(7)
    b = BalanceSpec.for_graph(g, 0.2)
    p = Partition3(g, [BLOCK1] * 3 + [SEP] + [BLOCK2] * 3)
    trace = []
    assert adaptive_flow_refine(g, p, b, 1.0, np.random.default_rng(0), trace=trace) == p
    assert trace == [1.0]


def test_improvement_is_accepted_and_repeated():
    g = path(9)
    b = BalanceSpec.for_graph(g, 0.2)
    p = Partition3(g, [BLOCK1] * 3 + [SEP] * 3 + [BLOCK2] * 3)
    trace = []
    out = adaptive_flow_refine(g, p, b, 1.0, np.random.default_rng(0), trace=trace)
    assert out.separator_weight == 1
    assert len(trace) == 2
    assert validate_separator(g, out, b).is_balanced


@pytest.mark.parametrize("seed", range(30))
def test_refine_monotone(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, int(rng.integers(3, 150)), int(rng.integers(0, 150)), max_weight=3)
    b = BalanceSpec.for_graph(g, 0.2)
    p = random_valid_partition(g, rng, b)
    alpha = float(rng.choice([0.0, 0.5, 1.0]))
    out = adaptive_flow_refine(g, p, b, alpha, rng, most_balanced=bool(rng.integers(2)))
    r = validate_separator(g, out, b)
    assert r.is_separator and r.is_balanced
    assert out.separator_weight <= p.separator_weight
