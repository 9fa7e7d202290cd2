import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nodesep.graph import BLOCK1, BLOCK2, SEP, Partition3, build_graph
from nodesep.io import (
    MetisFormatError,
    parse_metis,
    read_metis,
    read_separator,
    write_metis,
    write_separator,
)


def test_minimal_path():
    g = parse_metis("3 2\n2\n1 3\n2\n")
    assert g.n == 3 and g.m == 2
    assert g.adj == [[1], [0, 2], [1]]
    assert g.weights == [1, 1, 1]


def test_weighted_format():
    g = parse_metis("2 1 11\n4 2 7\n3 1 7\n")
    assert g.weights == [4, 3]
    assert g.edge_weight(0, 1) == 7


def test_asymmetric_rejected():
    with pytest.raises(MetisFormatError, match="symmetric"):
        parse_metis("2 1\n2\n")


def test_comments_crlf_and_bytes():
    text = b"% a comment\r\n3 2\r\n2\r\n% inner\r\n1 3\r\n2\r\n"
    g = parse_metis(text)
    assert g.adj == [[1], [0, 2], [1]]


def test_isolated_node_blank_line():
    g = parse_metis("3 1\n2\n1\n\n")
    assert g.n == 3 and g.adj[2] == []


def test_node_size_digit_ignored():
    g = parse_metis("2 1 111\n9 5 2 3\n9 6 1 3\n")
    assert g.weights == [5, 6]
    assert g.edge_weight(0, 1) == 3


@pytest.mark.parametrize(
    "text, match",
    [
        ("", "empty"),
        ("x y\n", "header"),
        ("2 1 12\n2\n1\n", "fmt"),
        ("2 1 0 2\n2\n1\n", "ncon"),
        ("2 1\n3\n1\n", "range"),
        ("2 1\n1\n2\n", "self-loop"),
        ("2 2\n2\n1\n", "declares"),
        ("2 1\n2 2\n1 1\n", "parallel"),
        ("2 1 1\n2\n1 1\n", "dangling"),
        ("2 1 10\n1 2\n", "expected"),
        ("2 1\n2\n1\n2\n", "more node lines"),
        ("2 1 1\n2 0\n1 0\n", "positive"),
        ("2 1 1\n2 3\n1 4\n", "symmetric"),
    ],
)
def test_malformed(text, match):
    with pytest.raises(MetisFormatError, match=match):
        parse_metis(text)


def test_write_separator():
    g = build_graph(3, [(0, 1), (1, 2)])
    p = Partition3(g, [BLOCK1, SEP, BLOCK2])
    assert write_separator(p) == "0\n2\n1\n"
    assert write_separator(Partition3(g, [SEP] * 3)) == "2\n2\n2\n"


def test_separator_round_trip(tmp_path):
    g = build_graph(4, [(0, 1), (1, 2), (2, 3)])
    p = Partition3(g, [BLOCK1, SEP, BLOCK2, BLOCK2])
    path = tmp_path / "sep.txt"
    write_separator(p, path)
    assert read_separator(g, path) == p
    assert read_separator(g, io.StringIO(write_separator(p))) == p


def test_read_separator_rejects_bad_labels():
    g = build_graph(2, [(0, 1)])
    with pytest.raises(ValueError):
        read_separator(g, "0\n3\n")


@st.composite
def graphs(draw):
    n = draw(st.integers(0, 25))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=50)) if pairs else []
    ew = draw(st.lists(st.integers(1, 5), min_size=len(chosen), max_size=len(chosen)))
    nw = draw(st.lists(st.integers(1, 5), min_size=n, max_size=n))
    return build_graph(n, [(u, v, w) for (u, v), w in zip(chosen, ew)], nw)


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_metis_round_trip(g):
    h = parse_metis(write_metis(g))
    assert h.n == g.n and h.m == g.m
    assert np.array_equal(h.xadj, g.xadj)
    assert np.array_equal(h.adjncy, g.adjncy)
    assert np.array_equal(h.adjwgt, g.adjwgt)
    assert np.array_equal(h.vwgt, g.vwgt)


def test_read_metis_file(tmp_path):
    path = tmp_path / "g.graph"
    path.write_text("3 2\n2\n1 3\n2\n")
    assert read_metis(path).m == 2
