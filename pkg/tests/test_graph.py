from __future__ import annotations

import math

import pytest

from conbreak import (
    FormatError,
    Graph,
    ParameterError,
    contains_hn,
    gen_gnp,
    is_spanning_connected,
    read_edge_list,
    write_edge_list,
)
from conbreak.graph import degree_into, edge, edges_between
from conbreak.rng import Rng

from oracles import all_labeled_graphs, connected_graph_classes, spanning_pair_oracle


def test_edge_canonicalizes():
    assert edge(3, 1) == (1, 3)
    assert edge(1, 3) == (1, 3)
    with pytest.raises(ParameterError):
        edge(2, 2)


def test_graph_basic_accessors():
    g = Graph(4, [(0, 1), (2, 1), (1, 2)])  # duplicate collapses
    assert g.n == 4
    assert g.edge_count() == 2
    assert g.edges == frozenset({(0, 1), (1, 2)})
    assert g.sorted_edges() == ((0, 1), (1, 2))
    assert g.has_edge(1, 0) and not g.has_edge(0, 2)
    assert g.neighbors(1) == frozenset({0, 2})
    assert g.degree(1) == 2 and g.degree(3) == 0


def test_graph_validation():
    with pytest.raises(ParameterError):
        Graph(-1)
    with pytest.raises(ParameterError):
        Graph(3, [(0, 3)])
    with pytest.raises(ParameterError):
        Graph(3, [(1, 1)])


def test_graph_eq_hash():
    a = Graph(3, [(0, 1)])
    b = Graph(3, [(1, 0)])
    c = Graph(4, [(0, 1)])
    assert a == b and hash(a) == hash(b)
    assert a != c


def test_gnp_determinism_and_extremes():
    g1 = gen_gnp(30, 0.3, 42)
    g2 = gen_gnp(30, 0.3, 42)
    assert g1 == g2
    assert gen_gnp(30, 0.3, 43) != g1  # overwhelmingly likely by design
    assert gen_gnp(10, 0.0, 7).edge_count() == 0
    assert gen_gnp(10, 1.0, 7).edge_count() == 45
    assert gen_gnp(0, 0.5, 1).n == 0
    assert gen_gnp(1, 0.5, 1).edge_count() == 0


def test_gnp_parameter_validation():
    with pytest.raises(ParameterError):
        gen_gnp(5, -0.1, 0)
    with pytest.raises(ParameterError):
        gen_gnp(5, 1.1, 0)
    with pytest.raises(ParameterError):
        gen_gnp(-2, 0.5, 0)
    with pytest.raises(ParameterError):
        gen_gnp(5, 0.5, -1)


def test_gnp_vector_path_matches_scalar_recipe():
    # n=120 has 7140 pairs, well past the vectorised cutover; replay the
    # documented scalar recipe and demand the identical edge set
    n, p, seed = 120, 0.07, 2024
    g = gen_gnp(n, p, seed)
    rng = Rng(seed)
    expect = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                expect.add((i, j))
    assert set(g.edges) == expect


def test_gnp_mean_edge_count():
    # 400 graphs at n=60, p=0.1: total edge count is Binomial(400*1770, .1)
    total = sum(gen_gnp(60, 0.1, s).edge_count() for s in range(400))
    ntrials = 400 * 1770
    mean = ntrials * 0.1
    sigma = math.sqrt(ntrials * 0.1 * 0.9)
    assert abs(total - mean) < 5 * sigma


def test_degree_into_and_edges_between():
    g = Graph(5, [(0, 1), (0, 2), (0, 3), (2, 3), (3, 4)])
    assert degree_into(g, 0, {1, 2}) == 2
    assert degree_into(g, 0, {4}) == 0
    assert degree_into(g, 3, [0, 2, 4]) == 3
    assert edges_between(g, {0}, {1, 2, 3}) == frozenset({(0, 1), (0, 2), (0, 3)})
    assert edges_between(g, {2, 3}, {0, 4}) == frozenset({(0, 2), (0, 3), (3, 4)})
    assert edges_between(g, {1}, {4}) == frozenset()
    # overlapping sets never produce loops
    assert edges_between(g, {0, 1}, {0, 1}) == frozenset({(0, 1)})


def test_is_spanning_connected():
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert is_spanning_connected(g, [(0, 1), (1, 2), (2, 3)])
    assert not is_spanning_connected(g, [(0, 1), (2, 3)])
    assert not is_spanning_connected(g, [])
    assert is_spanning_connected(Graph(1), [])
    assert is_spanning_connected(Graph(0), [])
    with pytest.raises(ParameterError):
        is_spanning_connected(g, [(0, 2)])


def test_contains_hn_examples():
    # triangle: every edge is a spanning pair
    assert contains_hn(Graph(3, [(0, 1), (1, 2), (0, 2)])) == (0, 1)
    # path on 3: no edge has both endpoints adjacent to the third vertex
    assert contains_hn(Graph(3, [(0, 1), (1, 2)])) is None
    # K4 minus one edge: (u,v) must itself be an edge with full common reach
    g = Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    assert contains_hn(g) == (0, 1)
    # star has no edge between two dominating vertices
    assert contains_hn(Graph(4, [(0, 1), (0, 2), (0, 3)])) is None
    with pytest.raises(ParameterError):
        contains_hn(Graph(2, [(0, 1)]))


def test_contains_hn_matches_pair_oracle_exhaustive():
    for n in (3, 4, 5):
        for g in all_labeled_graphs(n):
            got = contains_hn(g)
            assert (got is not None) == spanning_pair_oracle(g), (n, sorted(g.edges))
            if got is not None:
                u, v = got
                assert g.has_edge(u, v)
                assert g.neighbors(u) & g.neighbors(v) >= set(range(g.n)) - {u, v}


def test_contains_hn_matches_pair_oracle_classes_n6():
    for g in connected_graph_classes(6):
        assert (contains_hn(g) is not None) == spanning_pair_oracle(g)


def test_edge_list_roundtrip(tmp_path):
    g = gen_gnp(12, 0.4, 5)
    path = str(tmp_path / "g.edges")
    write_edge_list(g, path)
    assert read_edge_list(path) == g
    empty = Graph(3)
    write_edge_list(empty, path)
    assert read_edge_list(path) == empty


def test_edge_list_format_errors(tmp_path):
    def load(text):
        p = tmp_path / "bad.edges"
        p.write_text(text)
        return read_edge_list(str(p))

    for text in (
        "",
        "m 3\n0 1\n",
        "n\n",
        "n x\n",
        "n -2\n",
        "n 3\n0\n",
        "n 3\n0 one\n",
        "n 3\n1 1\n",
        "n 3\n2 1\n",
        "n 3\n0 3\n",
        "n 3\n0 1\n0 1\n",
    ):
        with pytest.raises(FormatError):
            load(text)
    g = load("n 3\n\n0 1\n 1 2 \n")  # blank lines and padding are fine
    assert g.edges == frozenset({(0, 1), (1, 2)})
