"""Graphs, triggering models, generators and reachability."""
from contagion.graph.digraph import EdgeSet, SeedSet, WeightedDigraph, check_graph, seed_set
from contagion.graph.generators import (
    chain_star,
    complete,
    erdos_renyi_directed,
    from_networkx,
    grid_2d,
    preferential_attachment,
)
from contagion.graph.io import read_edge_list, read_explicit, write_edge_list, write_explicit
from contagion.graph.models import (
    ModelKind,
    TriggerModel,
    explicit_model,
    lt_weights_gamma,
    uniform_weights,
    validate,
)
from contagion.graph.reach import (
    infected_fraction,
    reach,
    reach_mask,
    reach_matrix,
    singleton_reach_sizes,
)

__all__ = [
    "EdgeSet",
    "ModelKind",
    "SeedSet",
    "TriggerModel",
    "WeightedDigraph",
    "chain_star",
    "check_graph",
    "complete",
    "erdos_renyi_directed",
    "explicit_model",
    "from_networkx",
    "grid_2d",
    "infected_fraction",
    "lt_weights_gamma",
    "preferential_attachment",
    "reach",
    "reach_mask",
    "reach_matrix",
    "read_edge_list",
    "read_explicit",
    "seed_set",
    "singleton_reach_sizes",
    "uniform_weights",
    "validate",
    "write_edge_list",
    "write_explicit",
]
