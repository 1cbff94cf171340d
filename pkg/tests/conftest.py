import pytest

from septree import Graph, GraphUniverse, complete_graph, cycle_graph, path_graph


@pytest.fixture
def p3():
    return path_graph(3)


@pytest.fixture
def c4():
    return cycle_graph(4)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def two_triangles():
    """Two triangles sharing the middle vertex 2."""
    return Graph(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])


@pytest.fixture
def small_universes():
    gs = [
        Graph(2, []),
        path_graph(3),
        complete_graph(3),
        cycle_graph(4),
        Graph(4, [(0, 1), (2, 3)]),
        complete_graph(4),
    ]
    return [GraphUniverse(g) for g in gs]
