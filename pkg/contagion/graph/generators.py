"""Graph families used by the simulation study (unit weights, topology only)."""
import networkx as nx

from contagion.core.errors import GraphValidationError
from contagion.graph.digraph import WeightedDigraph


def from_networkx(graph: nx.Graph, weight: str = "weight") -> WeightedDigraph:
    """Convert a networkx graph; nodes are relabelled ``0..n-1`` in sorted order."""
    relabelled = nx.convert_node_labels_to_integers(graph, ordering="sorted")
    edges = [(u, v, data.get(weight, 1.0)) for u, v, data in relabelled.edges(data=True)]
    return WeightedDigraph.from_edges(
        relabelled.number_of_nodes(), edges, directed=relabelled.is_directed()
    )


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise GraphValidationError("generator-parameters", message)


def erdos_renyi_directed(n: int, p: float, seed: int) -> WeightedDigraph:
    """Directed G(n, p): every ordered pair is an edge independently with probability ``p``."""
    _require(n >= 1, f"n must be positive, got {n}")
    _require(0.0 <= p <= 1.0, f"p must lie in [0, 1], got {p}")
    return from_networkx(nx.gnp_random_graph(n, p, seed=seed, directed=True))


def preferential_attachment(n: int, m0: int, m: int, seed: int) -> WeightedDigraph:
    """Undirected preferential attachment grown from a complete graph on ``m0`` vertices.

    Each new vertex attaches to ``m`` distinct existing vertices chosen with
    probability proportional to degree.
    """
    _require(1 <= m <= m0 <= n, f"need 1 <= m <= m0 <= n, got m={m}, m0={m0}, n={n}")
    if m0 == n:
        return complete(n, directed=False)
    graph = nx.barabasi_albert_graph(n, m, seed=seed, initial_graph=nx.complete_graph(m0))
    return from_networkx(graph)


def grid_2d(rows: int, cols: int) -> WeightedDigraph:
    """Undirected ``rows x cols`` lattice; vertex ``r * cols + c`` sits at row ``r``, column ``c``."""
    _require(rows >= 1 and cols >= 1, f"grid sides must be positive, got {rows}x{cols}")
    graph = nx.grid_2d_graph(rows, cols)
    mapping = {(r, c): r * cols + c for r, c in graph.nodes}
    return from_networkx(nx.relabel_nodes(graph, mapping))


def complete(n: int, directed: bool) -> WeightedDigraph:
    """Complete graph ``K_n``, undirected or with both orientations of every pair."""
    _require(n >= 1, f"n must be positive, got {n}")
    return from_networkx(nx.complete_graph(n, create_using=nx.DiGraph if directed else nx.Graph))


def chain_star(n: int, weight: float = 0.5) -> WeightedDigraph:
    """Edge ``0 -> 1`` then ``1 -> j`` for ``j = 2..n-1``, all with ``weight``."""
    _require(n >= 2, f"chain-star needs n >= 2, got {n}")
    edges = [(0, 1, weight)] + [(1, j, weight) for j in range(2, n)]
    return WeightedDigraph.from_edges(n, edges, directed=True)
