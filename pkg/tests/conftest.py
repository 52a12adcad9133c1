import pytest

from contagion.graph import ModelKind, TriggerModel, WeightedDigraph, chain_star, complete


@pytest.fixture
def chain_star_model() -> TriggerModel:
    """0 -> 1 -> {2, ..., 5}, every weight 1/2."""
    return TriggerModel(chain_star(6), ModelKind.LINEAR_THRESHOLD)


@pytest.fixture
def triangle_model() -> TriggerModel:
    """Directed cycle 0 -> 1 -> 2 -> 0 with weight 0.4."""
    g = WeightedDigraph.from_edges(3, [(0, 1, 0.4), (1, 2, 0.4), (2, 0, 0.4)])
    return TriggerModel(g, ModelKind.LINEAR_THRESHOLD)


@pytest.fixture
def ic_star_model() -> TriggerModel:
    g = WeightedDigraph.from_edges(4, [(0, 1, 0.2), (0, 2, 0.2), (0, 3, 0.2)])
    return TriggerModel(g, ModelKind.INDEPENDENT_CASCADE)


@pytest.fixture
def k3() -> WeightedDigraph:
    """Undirected triangle; slots (0, 1), (0, 2), (1, 2)."""
    return complete(3, directed=False)
