from itertools import chain, combinations

import numpy as np
import pytest

from src.utils.enumeration import connected_graphs_up_to
from src.utils.exceptions import ImproperSubgraph, InvalidEdge, InvalidVertices, NotSimple, SizeLimitExceeded
from src.utils.graph_utils import (Graph, SubgraphRef, are_isomorphic, complete_graph, cone, contract, cycle_graph,
                                   delete_vertex, double_banana, find_isomorphism, freedom_number, join_by_two_edges,
                                   path_graph, relabel)


def test_from_edges_sorts_and_canonicalizes():
    G = Graph.from_edges(3, [(2, 0), (1, 0)])
    assert G.edges == ((0, 1), (0, 2))
    assert G.degree(0) == 2
    assert G.has_edge(2, 0)


@pytest.mark.parametrize("edges, error", [
    ([(1, 1)], NotSimple),
    ([(0, 1), (1, 0)], NotSimple),
    ([(0, 5)], InvalidEdge),
])
def test_from_edges_rejects_bad_edges(edges, error):
    with pytest.raises(error):
        Graph.from_edges(3, edges)


def test_graph_needs_a_vertex():
    with pytest.raises(InvalidVertices):
        Graph(0)


def test_freedom_numbers(k2, k3, k4, k4_minus_edge):
    assert [freedom_number(G) for G in (k2, k3, k4, k4_minus_edge)] == [3, 3, 2, 3]


def _subgraphs(G: Graph):
    for size in range(1, G.vertex_count + 1):
        for vertices in combinations(G.vertices, size):
            inside = SubgraphRef.induced(G, vertices).edge_subset
            for edges in chain.from_iterable(combinations(sorted(inside), r) for r in range(len(inside) + 1)):
                yield SubgraphRef(frozenset(vertices), frozenset(edges))


def test_freedom_number_is_modular(k4):
    subgraphs = list(_subgraphs(k4))
    assert len(subgraphs) == 4 + 6 * 2 + 4 * 8 + 64
    for first in subgraphs:
        for second in subgraphs:
            assert freedom_number(first.union(second)) + freedom_number(first.intersection(second)) == \
                freedom_number(first) + freedom_number(second)


def test_subgraph_edges_must_stay_inside():
    with pytest.raises(ImproperSubgraph):
        SubgraphRef(frozenset({0, 1}), frozenset({(1, 2)}))


def test_contract_k4_out_of_two_k4s(two_k4_at_vertex):
    H = SubgraphRef.induced(two_k4_at_vertex, range(4))
    result = contract(two_k4_at_vertex, H)
    assert result.star == 3
    assert result.vertex_map[4] == 0 and result.vertex_map[6] == 2
    assert all(result.vertex_map[v] == 3 for v in range(4))
    assert are_isomorphic(result.graph, complete_graph(4))


def test_contract_rejects_parallel_edges(k4):
    with pytest.raises(NotSimple):
        contract(k4, SubgraphRef.induced(k4, {0, 1}))


def test_contract_rejects_improper_subgraphs(k4):
    with pytest.raises(ImproperSubgraph):
        contract(k4, SubgraphRef.whole(k4))
    with pytest.raises(ImproperSubgraph):
        contract(path_graph(3), SubgraphRef(frozenset({0, 2})))


def test_cone_adds_an_apex(k3):
    assert are_isomorphic(cone(k3), complete_graph(4))
    assert cone(path_graph(3)).edge_count == 5


def test_delete_vertex_compacts_labels():
    G, mapping = delete_vertex(path_graph(3), 1)
    assert G == Graph(2)
    assert mapping == {0: 0, 2: 1}


def test_double_banana_counts():
    G = double_banana()
    assert (G.vertex_count, G.edge_count) == (8, 18)
    assert 3 * G.vertex_count - G.edge_count == 6
    assert G.is_connected()


def test_find_isomorphism_returns_edge_preserving_map():
    G = cycle_graph(5)
    shuffled = relabel(G, {0: 3, 1: 0, 2: 4, 3: 1, 4: 2})
    mapping = find_isomorphism(G, shuffled)
    assert mapping is not None
    assert all(shuffled.has_edge(mapping[u], mapping[v]) for u, v in G.edges)
    assert find_isomorphism(G, path_graph(5)) is None


def test_isomorphism_is_capped():
    with pytest.raises(SizeLimitExceeded):
        are_isomorphic(complete_graph(11), complete_graph(11))


def test_join_by_two_edges_needs_disjoint_edges(k4):
    with pytest.raises(InvalidEdge):
        join_by_two_edges(k4, k4, (0, 0), (0, 1))


def test_join_by_two_edges(two_k4_by_edges):
    assert two_k4_by_edges.vertex_count == 8
    assert two_k4_by_edges.has_edge(0, 4) and two_k4_by_edges.has_edge(1, 5)
    assert freedom_number(two_k4_by_edges) == 2


def test_isomorphism_is_an_equivalence():
    rng = np.random.default_rng(7)
    sample = [G for G in connected_graphs_up_to(6) if G.vertex_count >= 4][::9]
    for G in sample:
        first = relabel(G, dict(enumerate(rng.permutation(G.vertex_count).tolist())))
        second = relabel(first, dict(enumerate(rng.permutation(G.vertex_count).tolist())))
        assert are_isomorphic(G, G)
        assert are_isomorphic(G, first) and are_isomorphic(first, G)
        assert are_isomorphic(first, second) and are_isomorphic(G, second)
    for G, H in combinations(sample, 2):
        assert not are_isomorphic(G, H) and not are_isomorphic(H, G)
