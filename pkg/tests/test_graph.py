import math

import pytest
from hypothesis import given, strategies as st

from oracles import bfs_connected, floyd_warshall_diameter, q_direct
from strategies import graphs
from qabench.chimera import ChimeraSpec, build_chimera
from qabench.graph import (Graph, Partition, clustering_coefficient, connected_components,
                           degree_assortativity, diameter, format_edge_list, graph_metrics,
                           is_bipartite, largest_component, modularity, parse_edge_list,
                           triangle_count)


def path(n):
    return Graph.from_edges([(i, i + 1) for i in range(n - 1)], n)


def test_graph_normalizes_edges():
    g = Graph.from_edges([(2, 1), (1, 2), (0, 1)])
    assert g.edges == frozenset({(1, 2), (0, 1)})
    assert g.n == 3 and g.m == 2


@pytest.mark.parametrize("edges,n", [([(0, 0)], 1), ([(0, 3)], 2), ([(-1, 0)], 2)])
def test_graph_rejects_bad_edges(edges, n):
    with pytest.raises(ValueError):
        Graph(n, frozenset(edges))


def test_from_edges_drops_self_loops():
    assert Graph.from_edges([(0, 0), (0, 1)]).m == 1


def test_clustering_examples():
    assert clustering_coefficient(Graph.from_edges([(0, 1), (1, 2), (0, 2)])) == 1.0
    assert clustering_coefficient(path(3)) == 0.0
    assert clustering_coefficient(Graph(4, frozenset())) == 0.0
    for k in (1, 3, 5):
        assert clustering_coefficient(build_chimera(ChimeraSpec.square(k))) == 0.0


def test_diameter_examples(k4):
    assert diameter(path(4)) == 3
    assert diameter(k4) == 1
    assert diameter(Graph.from_edges([(0, 1), (2, 3)], 4)) == 1
    with pytest.raises(ValueError, match="empty graph"):
        diameter(Graph(0, frozenset()))


def test_modularity_examples(triangle_bridge, k4):
    assert modularity(triangle_bridge, Partition((0, 0, 0, 1, 1, 1))) == pytest.approx(5 / 14, abs=1e-15)
    assert modularity(k4, Partition((0, 0, 1, 1))) == pytest.approx(-1 / 6, abs=1e-15)
    assert modularity(k4, Partition((0, 0, 0, 0))) == 0.0
    with pytest.raises(ValueError, match="no edges"):
        modularity(Graph(3, frozenset()), Partition((0, 0, 0)))


def test_metrics_examples():
    cell = graph_metrics(build_chimera(ChimeraSpec.square(1)))
    assert (cell.n, cell.m, cell.avg_degree, cell.clustering_coefficient) == (8, 16, 4.0, 0.0)
    star = Graph.from_edges([(0, i) for i in range(1, 5)])
    assert degree_assortativity(star) == (pytest.approx(-1.0), True)
    empty = graph_metrics(Graph(5, frozenset()))
    assert empty.m == 0 and empty.num_components == 5


def test_assortativity_undefined_when_regular():
    cycle = Graph.from_edges([(i, (i + 1) % 5) for i in range(5)])
    assert degree_assortativity(cycle) == (0.0, False)


def test_partition_requires_contiguous_ids():
    with pytest.raises(ValueError):
        Partition((0, 2))
    assert Partition.from_labels(["b", "a", "b"]).assignment == (0, 1, 0)


def test_largest_component_tie_breaks_to_smallest_id():
    g = Graph.from_edges([(2, 3), (0, 1)], 5)
    assert largest_component(g) == [0, 1]


@given(graphs(max_n=12))
def test_clustering_in_unit_interval(g):
    c = clustering_coefficient(g)
    assert 0.0 <= c <= 1.0
    assert (c == 0.0) == (triangle_count(g) == 0)


@given(graphs(min_n=2, max_n=10, min_m=1))
def test_single_community_has_zero_modularity(g):
    assert modularity(g, Partition((0,) * g.n)) == 0.0


@given(graphs(min_n=2, max_n=9, min_m=1), st.data())
def test_modularity_matches_double_sum_and_relabel_invariant(g, data):
    labels = data.draw(st.lists(st.integers(0, 3), min_size=g.n, max_size=g.n))
    p = Partition.from_labels(labels)
    q = modularity(g, p)
    assert q == pytest.approx(q_direct(g, labels), abs=1e-12)
    perm = {c: (c * 7 + 3) % 11 for c in set(labels)}
    assert modularity(g, Partition.from_labels([perm[c] for c in labels])) == pytest.approx(q, abs=1e-15)


@given(graphs(min_n=1, max_n=14))
def test_diameter_matches_floyd_warshall(g):
    comp = largest_component(g)
    sub, _ = g.induced_subgraph(comp)
    assert bfs_connected(sub)
    assert diameter(g) == floyd_warshall_diameter(sub)


@given(graphs(max_n=12))
def test_edge_list_round_trip(g):
    assert parse_edge_list(format_edge_list(g)) == g


def test_edge_list_comments_and_implicit_count():
    g = parse_edge_list("# hello\n0 1\n\n1 4\n")
    assert g.n == 5 and g.m == 2


@given(graphs(max_n=12))
def test_components_partition_nodes(g):
    comps = connected_components(g)
    assert sorted(v for c in comps for v in c) == list(range(g.n))


def test_bipartite_detection(k4):
    assert is_bipartite(path(5))
    assert not is_bipartite(k4)


def test_metrics_avg_degree_identity():
    g = path(7)
    m = graph_metrics(g)
    assert math.isclose(m.avg_degree, 2 * m.m / m.n)
    assert m.diameter == 6
