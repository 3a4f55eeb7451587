import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from helpers import all_graphs, random_graphs
from sparseminors.errors import GraphFormatError, InvalidArgument
from sparseminors.graphcore import (
    Forest,
    Graph,
    Primality,
    connected_components,
    d_invariant,
    is_m_connected,
    parse_forest,
    parse_graph,
    primality_verdict,
    spanning_forest,
    tree_path,
)
from sparseminors.ideals import binom


def example_graph():
    """Two disjoint K4 plus the matching 15, 26, 37, 48."""
    k4 = lambda s: list(itertools.combinations(s, 2))
    return Graph.from_edges(8, k4([1, 2, 3, 4]) + k4([5, 6, 7, 8]) + [(1, 5), (2, 6), (3, 7), (4, 8)])


graphs = st.integers(2, 6).flatmap(
    lambda n: st.sets(st.sampled_from(list(itertools.combinations(range(1, n + 1), 2)))).map(
        lambda es: Graph.from_edges(n, es)
    )
)


def test_graph_normalizes_edges():
    g = Graph.from_edges(3, [(2, 1), (3, 2)])
    assert g.edges == frozenset({(1, 2), (2, 3)})
    assert g.num_variables == 3 + 2
    assert g.non_edges() == [(1, 3)]


def test_graph_rejects_bad_edges():
    with pytest.raises(InvalidArgument):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(InvalidArgument):
        Graph.from_edges(3, [(1, 4)])


def test_components_and_d():
    g = Graph.from_edges(5, [(1, 2), (3, 4)])
    assert sorted(connected_components(g).sizes()) == [1, 2, 2]
    assert d_invariant(g) == 2 * 2 + 2 * 1 + 2 * 1
    assert d_invariant(Graph.edgeless(4)) == 6
    assert d_invariant(Graph.complete(4)) == 0


@settings(max_examples=150, deadline=None)
@given(graphs)
def test_d_from_component_sizes(g):
    sizes = connected_components(g).sizes()
    assert d_invariant(g) == (g.n ** 2 - sum(s * s for s in sizes)) // 2
    assert (d_invariant(g) == 0) == g.is_connected()
    assert 0 <= d_invariant(g) <= binom(g.n, 2)


@settings(max_examples=150, deadline=None)
@given(graphs)
def test_spanning_forest_properties(g):
    t = spanning_forest(g)
    comps = connected_components(g)
    assert t.edges <= g.edges
    assert len(t.edges) == g.n - len(comps.blocks)
    assert connected_components(t.as_graph()) == comps
    for k, l in itertools.combinations(g.vertices, 2):
        p = tree_path(t, k, l)
        if comps.block_of(k) != comps.block_of(l):
            assert p is None
        else:
            assert p[0] == k and p[-1] == l and len(set(p)) == len(p)
            assert all(t.as_graph().has_edge(a, b) for a, b in zip(p, p[1:]))


def test_spanning_forest_is_bfs_tree():
    t = spanning_forest(Graph.complete(4))
    assert t.edges == frozenset({(1, 2), (1, 3), (1, 4)})
    assert tree_path(t, 2, 3) == [2, 1, 3]


def test_forest_must_span():
    g = Graph.path(4)
    with pytest.raises(InvalidArgument):
        Forest.from_edges(g, [(1, 2), (2, 3)])
    with pytest.raises(InvalidArgument):
        Forest.from_edges(Graph.complete(3), [(1, 2), (2, 3), (1, 3)])


def test_tree_path_rejects_equal_endpoints():
    with pytest.raises(InvalidArgument):
        tree_path(spanning_forest(Graph.path(3)), 2, 2)


def test_m_connectivity_example():
    g = example_graph()
    assert is_m_connected(g, 5)
    assert not is_m_connected(g, 2)
    assert primality_verdict(g, 5) == Primality.UNKNOWN


def test_primality_verdicts():
    assert primality_verdict(Graph.edgeless(4), 1) == Primality.PRIME
    assert primality_verdict(Graph.path(4), 4) == Primality.PRIME
    assert primality_verdict(Graph.edgeless(4), 4) == Primality.NOT_PRIME
    assert primality_verdict(Graph.complete(4), 2) == Primality.PRIME
    assert primality_verdict(Graph.path(4), 2) == Primality.NOT_PRIME
    assert primality_verdict(Graph.complete(5), 4, characteristic=2) == Primality.UNKNOWN


def test_m_connected_monotone_on_small_graphs():
    # If every m-subset induces a connected graph, so does every larger subset.
    for g in all_graphs(4):
        flags = [is_m_connected(g, m) for m in range(1, 5)]
        assert flags[0]
        for a, b in zip(flags[1:], flags[2:]):
            assert b or not a


def test_parse_text_and_json_agree():
    a = parse_graph("4\n1 2\n# comment\n2 3  # trailing\n")
    b = parse_graph('{"n": 4, "edges": [[1, 2], [2, 3]]}')
    assert a == b == Graph.from_edges(4, [(1, 2), (2, 3)])
    assert parse_graph(json.dumps(a.to_json())) == a


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("3\n1 2\n2 x\n", 3, 3),
        ("3\n1 4\n", 2, 1),
        ("3\n1 2\n1 2\n", 3, 1),
        ("3 4\n", 1, 3),
        ("", 1, 1),
        ('{"n": 3, "edges": [[1, 2]', 1, 26),
    ],
)
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(GraphFormatError) as err:
        parse_graph(text)
    assert (err.value.line, err.value.column) == (line, col)


def test_parse_forest_variants():
    g = Graph.complete(3)
    want = Forest.from_edges(g, [(1, 3), (2, 3)])
    assert parse_forest("[[1, 3], [3, 2]]", g) == want
    assert parse_forest('{"edges": [[1, 3], [2, 3]]}', g) == want
    assert parse_forest("3\n1 3\n2 3\n", g) == want
    with pytest.raises(GraphFormatError):
        parse_forest("[[1, 2]]", g)


def test_random_graphs_are_seeded():
    assert random_graphs(5, 10, seed=7) == random_graphs(5, 10, seed=7)
