import pytest

from src.utils.graph_utils import complete_graph, join_at_vertex, join_by_two_edges, remove_edge


@pytest.fixture
def k2():
    return complete_graph(2)


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def k4_minus_edge():
    return remove_edge(complete_graph(4), 0, 1)


@pytest.fixture
def two_k4_at_vertex():
    return join_at_vertex(complete_graph(4), complete_graph(4))


@pytest.fixture
def two_k4_by_edges():
    return join_by_two_edges(complete_graph(4), complete_graph(4))
