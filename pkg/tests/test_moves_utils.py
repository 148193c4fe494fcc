from itertools import combinations

import pytest

from src.utils.enumeration import connected_graphs, connected_graphs_up_to
from src.utils.exceptions import (IllFormedStep, InvalidEdge, InvalidInput, InvalidThirdVertex, InvalidVertices,
                                  NotLaman, NotType2Maximal, WrongDegree)
from src.utils.graph_utils import Graph, are_isomorphic, complete_graph, relabel
from src.utils.moves_utils import (DerivationSequence, Move, MoveKind, derive_laman, derive_laman_labeled,
                                   derive_laman_plus_one, derive_laman_plus_one_labeled, derive_type2, derive_type2_labeled,
                                   extend_subgraph, ghost_pairs, henneberg1, henneberg2, inverse_henneberg2_candidates,
                                   is_derivation_valid, proposition_trichotomy, replay, reverse_henneberg1,
                                   reverse_henneberg2, sequence_from_dict, sequence_to_dict)
from src.utils.sparsity_utils import check_type, is_laman, is_laman_plus_one

SMALL_GRAPHS = list(connected_graphs_up_to(7))


def _replays_exactly(seq: DerivationSequence, labels, G: Graph) -> bool:
    return relabel(replay(seq), dict(enumerate(labels))) == G


def test_henneberg1(k2, k3):
    assert henneberg1(k2, 0, 1) == k3
    with pytest.raises(InvalidVertices):
        henneberg1(k2, 1, 1)


def test_henneberg2(k3, k4_minus_edge):
    G = henneberg2(k3, (1, 0), 2)
    assert G.edges == ((0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
    assert are_isomorphic(G, k4_minus_edge)
    with pytest.raises(InvalidEdge):
        henneberg2(k4_minus_edge, (0, 1), 2)
    with pytest.raises(InvalidThirdVertex):
        henneberg2(k3, (0, 1), 1)


def test_extend_subgraph_replaces_a_vertex(k4):
    G = extend_subgraph(k4, 3, k4, {0: 0, 1: 1, 2: 2})
    assert (G.vertex_count, G.edge_count) == (7, 12)
    assert G.has_edge(0, 3) and G.has_edge(1, 4) and G.has_edge(2, 5)
    assert check_type(G, 2).maximal
    with pytest.raises(InvalidVertices):
        extend_subgraph(k4, 3, k4, {0: 0, 1: 1})


def test_replay_wraps_bad_steps():
    seq = DerivationSequence("K2", (Move.henneberg1(0, 1), Move.henneberg2(0, 1, 7)))
    with pytest.raises(IllFormedStep) as excinfo:
        replay(seq)
    assert excinfo.value.step_index == 1
    assert not is_derivation_valid(seq, complete_graph(4))


def test_unknown_base():
    with pytest.raises(InvalidInput):
        DerivationSequence("K3")


def test_reverse_moves(k3, k4_minus_edge):
    reduced, mapping = reverse_henneberg1(k3, 2)
    assert reduced == complete_graph(2) and mapping == {0: 0, 1: 1}
    with pytest.raises(WrongDegree):
        reverse_henneberg1(k4_minus_edge, 2)
    # vertices 2 and 3 have degree 3; the only ghost pair of 2 is (0, 1)
    assert ghost_pairs(k4_minus_edge, 2) == [(0, 1)]
    reduced, _ = reverse_henneberg2(k4_minus_edge, 2, (0, 1))
    assert reduced == k3
    with pytest.raises(InvalidEdge):
        reverse_henneberg2(k4_minus_edge, 2, (0, 2))
    assert [pair for pair, _ in inverse_henneberg2_candidates(k4_minus_edge, 3, 3)] == [(0, 1)]


def test_every_laman_graph_derives_from_k2():
    for G in filter(is_laman, SMALL_GRAPHS):
        seq, labels = derive_laman_labeled(G)
        assert seq.base == "K2"
        assert all(m.kind in (MoveKind.HENNEBERG1, MoveKind.HENNEBERG2) for m in seq.steps)
        assert len(seq) == G.vertex_count - 2
        assert _replays_exactly(seq, labels, G), G


def test_laman_derivation_rejects_non_laman(k4):
    with pytest.raises(NotLaman):
        derive_laman(k4)


def test_every_laman_plus_one_graph_derives_from_k4():
    graphs = [G for G in SMALL_GRAPHS if is_laman_plus_one(G) is not None]
    assert graphs
    for G in graphs:
        seq, labels = derive_laman_plus_one_labeled(G)
        assert derive_laman_plus_one(G) == seq
        assert seq.base == "K4"
        assert _replays_exactly(seq, labels, G), G


def test_every_type2_graph_derives():
    graphs = [G for G in SMALL_GRAPHS if check_type(G, 2).maximal]
    assert any(G.vertex_count == 1 for G in graphs)
    for G in graphs:
        seq, labels = derive_type2_labeled(G)
        assert seq.base == ("K1" if G.vertex_count == 1 else "K4")
        assert _replays_exactly(seq, labels, G), G


def test_two_k4s_need_an_extension(two_k4_at_vertex, two_k4_by_edges):
    for G in (two_k4_at_vertex, two_k4_by_edges):
        seq, labels = derive_type2_labeled(G)
        assert any(m.kind == MoveKind.SUBGRAPH_EXTENSION for m in seq.steps)
        assert _replays_exactly(seq, labels, G)
        assert is_derivation_valid(seq, G)


def test_type2_derivation_rejects_laman(k3):
    with pytest.raises(NotType2Maximal):
        derive_type2(k3)


def test_sequence_dict_keeps_nested_extensions(two_k4_by_edges):
    seq = derive_type2(two_k4_by_edges)
    data = sequence_to_dict(seq)
    extension = next(step for step in data["steps"] if step["kind"] == "SubgraphExtension")
    assert extension["subgraph"]["base"] == "K4"
    assert sequence_from_dict(data) == seq


def test_sequence_from_dict_rejects_garbage():
    with pytest.raises(InvalidInput):
        sequence_from_dict({"base": "K2", "steps": [{"kind": "Henneberg1"}]})
    with pytest.raises(InvalidInput):
        sequence_from_dict({"steps": []})


def test_trichotomy(k4, k4_minus_edge, two_k4_at_vertex):
    assert proposition_trichotomy(k4).case == "k4-covered"
    assert proposition_trichotomy(two_k4_at_vertex).case == "k4-covered"
    G = henneberg1(k4, 0, 1)
    result = proposition_trichotomy(G)
    assert (result.case, result.vertex) == ("degree-two", 4)
    with pytest.raises(NotType2Maximal):
        proposition_trichotomy(k4_minus_edge)


def test_trichotomy_reducible_case(k4):
    # K4 then a Henneberg 2 split: the new vertex has degree 3 and sits in no K4
    G = henneberg2(k4, (0, 1), 2)
    result = proposition_trichotomy(G)
    assert result.case == "reducible"
    assert check_type(result.reduced, 2).maximal


def _forward_moves(G: Graph):
    for a, b in combinations(G.vertices, 2):
        yield henneberg1(G, a, b)
    for e in G.edges:
        for third in G.vertices:
            if third not in e:
                yield henneberg2(G, e, third)


def _check_moves_keep_type(graphs):
    for k in (2, 3):
        for G in graphs:
            if not check_type(G, k).maximal:
                continue
            for moved in _forward_moves(G):
                assert check_type(moved, k).maximal, (k, G, moved)


def test_moves_keep_maximal_graphs_maximal():
    _check_moves_keep_type(G for G in SMALL_GRAPHS if G.vertex_count <= 6)


@pytest.mark.slow
def test_moves_keep_seven_vertex_graphs_maximal():
    _check_moves_keep_type(connected_graphs(7))


def test_reverse_moves_undo_forward_moves():
    for G in filter(is_laman, SMALL_GRAPHS):
        n = G.vertex_count
        identity = {v: v for v in G.vertices}
        for a, b in combinations(G.vertices, 2):
            assert reverse_henneberg1(henneberg1(G, a, b), n) == (G, identity)
        for a, b in G.edges:
            for third in set(G.vertices) - {a, b}:
                assert reverse_henneberg2(henneberg2(G, (a, b), third), n, (a, b)) == (G, identity)


def _laman_without_degree_two(graphs):
    return [G for G in graphs if G.vertex_count >= 3 and is_laman(G)
            and all(G.degree(v) != 2 for v in G.vertices)]


def test_laman_graphs_without_degree_two_have_six_degree_three_vertices():
    graphs = _laman_without_degree_two(SMALL_GRAPHS)
    # the triangular prism and K3,3 are the first
    assert any(G.vertex_count == 6 for G in graphs)
    for G in graphs:
        assert sum(1 for v in G.vertices if G.degree(v) == 3) >= 6, G


@pytest.mark.slow
def test_eight_vertex_laman_graphs_have_six_degree_three_vertices():
    for G in _laman_without_degree_two(connected_graphs(8, edge_count=13)):
        assert sum(1 for v in G.vertices if G.degree(v) == 3) >= 6, G


@pytest.mark.slow
def test_every_eight_vertex_graph_derives():
    laman = [G for G in connected_graphs(8, edge_count=13) if is_laman(G)]
    type2 = [G for G in connected_graphs(8, edge_count=14) if check_type(G, 2).maximal]
    assert laman and type2
    for G in laman:
        seq, labels = derive_laman_labeled(G)
        assert seq.base == "K2" and _replays_exactly(seq, labels, G), G
    for G in type2:
        seq, labels = derive_type2_labeled(G)
        assert _replays_exactly(seq, labels, G), G
