import pytest

from src.utils.enumeration import connected_graphs_up_to
from src.utils.exceptions import NotConeGraph
from src.utils.graph_utils import Graph, cone, double_banana, freedom_number, path_graph
from src.utils.sparsity_utils import (check_point_line, check_point_plane, check_tight_3_6, check_type,
                                      check_type_oracle, is_laman, is_laman_plus_one, maximal_tight_subgraph,
                                      maxwell_subgraph_check)

SMALL_GRAPHS = list(connected_graphs_up_to(6))
GRAPHS_UP_TO_SEVEN = list(connected_graphs_up_to(7))


def test_k4_is_type_two_maximal_but_not_laman(k4):
    assert check_type(k4, 2).maximal
    verdict = check_type(k4, 3)
    assert not verdict.independent
    assert freedom_number(verdict.witness) == 2


def test_laman_examples(k2, k3, k4_minus_edge, k4):
    assert is_laman(k2) and is_laman(k3) and is_laman(k4_minus_edge)
    assert not is_laman(k4)
    assert not is_laman(Graph(1))


def test_independent_but_not_maximal(k3):
    verdict = check_type(k3, 2)
    assert verdict.independent and not verdict.maximal
    assert verdict.witness.vertex_subset == frozenset(k3.vertices)


@pytest.mark.parametrize("k", [2, 3])
def test_pebble_game_agrees_with_oracle(k):
    for G in GRAPHS_UP_TO_SEVEN:
        fast, slow = check_type(G, k), check_type_oracle(G, k)
        assert (fast.independent, fast.maximal) == (slow.independent, slow.maximal), G


@pytest.mark.parametrize("k", [2, 3])
def test_dependence_witness_is_over_counted(k):
    for G in SMALL_GRAPHS:
        verdict = check_type(G, k)
        if verdict.independent:
            continue
        assert freedom_number(verdict.witness) == k - 1, G
        assert verdict.witness.edge_subset <= G.edge_set


def test_unsupported_type(k4):
    with pytest.raises(ValueError):
        check_type(k4, 4)


def test_laman_plus_one(k4, k4_minus_edge, two_k4_at_vertex):
    extra = is_laman_plus_one(k4)
    assert extra is not None and k4.has_edge(*extra)
    assert is_laman_plus_one(k4_minus_edge) is None
    # type-2 maximal without being Laman plus one
    assert check_type(two_k4_at_vertex, 2).maximal
    assert is_laman_plus_one(two_k4_at_vertex) is None


def test_maximal_tight_subgraph(two_k4_at_vertex, k4):
    H = maximal_tight_subgraph(two_k4_at_vertex)
    assert H.vertex_subset == frozenset(range(4))
    assert len(H.edge_subset) == 6
    assert maximal_tight_subgraph(k4) is None


def test_tight_3_6(k3, k4_minus_edge, k4):
    assert check_tight_3_6(cone(k3))
    assert check_tight_3_6(cone(k4_minus_edge))
    assert not check_tight_3_6(cone(k4))
    # flexible in 3-space yet passes the count
    assert check_tight_3_6(double_banana())


def test_point_line(k4, k4_minus_edge):
    assert check_point_line(cone(k4), 4)
    assert not check_point_line(cone(k4_minus_edge), 4)
    with pytest.raises(NotConeGraph):
        check_point_line(path_graph(4), 3)


def test_point_plane(k4, k4_minus_edge):
    assert check_point_plane(cone(k4_minus_edge), 4)
    assert not check_point_plane(cone(k4), 4)


def test_maxwell_subgraph_check(k4, k4_minus_edge):
    assert maxwell_subgraph_check(k4_minus_edge, 3) is None
    violation = maxwell_subgraph_check(k4, 3)
    assert violation is not None and freedom_number(violation) < 3


def test_cone_counts_match_the_base_graph():
    for G in GRAPHS_UP_TO_SEVEN:
        if G.vertex_count < 4:
            continue
        coned = cone(G)
        assert check_tight_3_6(coned) == is_laman(G), G
        assert check_point_line(coned, G.vertex_count) == check_type(G, 2).maximal, G
