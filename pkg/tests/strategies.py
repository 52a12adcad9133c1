import itertools

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from contagion.graph import EdgeSet, ModelKind, TriggerModel, WeightedDigraph, explicit_model

PROPERTY_SETTINGS = settings(
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)


@st.composite
def edge_pairs(draw, n: int, dag: bool = False) -> list[tuple[int, int]]:
    pairs = [(u, v) for u, v in itertools.permutations(range(n), 2) if not dag or u < v]
    return sorted(draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))))


@st.composite
def lt_models(draw, min_n: int = 2, max_n: int = 5, dag: bool = False) -> TriggerModel:
    """LT models whose in-weights at each vertex sum to at most 1."""
    n = draw(st.integers(min_n, max_n))
    pairs = draw(edge_pairs(n, dag))
    weights = {}
    for v in range(n):
        incoming = [u for u, w in pairs if w == v]
        if not incoming:
            continue
        shares = draw(st.lists(st.floats(0.05, 1.0), min_size=len(incoming), max_size=len(incoming)))
        total = draw(st.floats(0.0, 1.0))
        for u, share in zip(incoming, shares):
            weights[(u, v)] = min(share / sum(shares) * total, 1.0)
    g = WeightedDigraph.from_edges(n, [(u, v, weights[(u, v)]) for u, v in pairs])
    return TriggerModel(g, ModelKind.LINEAR_THRESHOLD)


@st.composite
def ic_models(draw, min_n: int = 2, max_n: int = 4) -> TriggerModel:
    n = draw(st.integers(min_n, max_n))
    pairs = draw(edge_pairs(n))
    probabilities = draw(st.lists(st.floats(0.0, 1.0), min_size=len(pairs), max_size=len(pairs)))
    g = WeightedDigraph.from_edges(n, [(u, v, p) for (u, v), p in zip(pairs, probabilities)])
    return TriggerModel(g, ModelKind.INDEPENDENT_CASCADE)


@st.composite
def seeded(draw, models) -> tuple[TriggerModel, tuple[int, ...]]:
    """A model together with a non-empty seed set."""
    model = draw(models)
    seeds = draw(st.sets(st.integers(0, model.n - 1), min_size=1, max_size=model.n))
    return model, tuple(sorted(seeds))


@st.composite
def open_sets(draw, g: WeightedDigraph) -> EdgeSet:
    mask = draw(st.lists(st.booleans(), min_size=g.num_slots, max_size=g.num_slots))
    return EdgeSet(np.array(mask, dtype=bool))


@st.composite
def distributions(draw, n: int, floor: float = 0.01) -> np.ndarray:
    """Strictly positive probability vectors of length ``n``."""
    raw = np.array(draw(st.lists(st.floats(floor, 1.0), min_size=n, max_size=n)))
    return raw / raw.sum()


@st.composite
def explicit_models(draw, min_n: int = 2, max_n: int = 4) -> TriggerModel:
    """Explicit models with up to three trigger sets per vertex."""
    n = draw(st.integers(min_n, max_n))
    triggers = []
    for v in range(n):
        others = [u for u in range(n) if u != v]
        subsets = draw(st.lists(st.sets(st.sampled_from(others)), min_size=1, max_size=3))
        raw = draw(st.lists(st.floats(0.05, 1.0), min_size=len(subsets), max_size=len(subsets)))
        total = sum(raw)
        triggers.append([(tuple(sorted(s)), w / total) for s, w in zip(subsets, raw)])
    return explicit_model(n, triggers)


@st.composite
def tree_models(draw, max_n: int = 6) -> TriggerModel:
    """LT models on an out-tree rooted at 0: one path from the root to every vertex."""
    n = draw(st.integers(2, max_n))
    edges = []
    for v in range(1, n):
        parent = draw(st.integers(0, v - 1))
        edges.append((parent, v, draw(st.floats(0.01, 1.0))))
    return TriggerModel(WeightedDigraph.from_edges(n, edges), ModelKind.LINEAR_THRESHOLD)
