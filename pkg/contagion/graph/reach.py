"""Reachability over open edges."""
from typing import Iterable

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from contagion.graph.digraph import EdgeSet, SeedSet, WeightedDigraph


def reach_mask(g: WeightedDigraph, live: np.ndarray, sources: Iterable[int]) -> np.ndarray:
    """Boolean mask of vertices reachable from ``sources`` over live stored edges.

    Args:
        g: Graph.
        live: Boolean mask over stored directed edges.
        sources: Start vertices (always included).
    """
    ptr, dst = g.adjacency_lists
    open_edges = live.tolist()
    seen = [False] * g.n
    stack = []
    for s in sources:
        if not seen[s]:
            seen[s] = True
            stack.append(s)
    while stack:
        u = stack.pop()
        for e in range(ptr[u], ptr[u + 1]):
            if open_edges[e]:
                v = dst[e]
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
    return np.array(seen, dtype=bool)


def reach(g: WeightedDigraph, open_edges: EdgeSet, s: Iterable[int]) -> SeedSet:
    """Vertices reachable from ``s`` by paths of open edges, ``s`` included.

    In undirected graphs an open edge transmits in both directions.
    """
    mask = reach_mask(g, open_edges.edge_mask(g), s)
    return tuple(int(v) for v in np.flatnonzero(mask))


def infected_fraction(g: WeightedDigraph, open_edges: EdgeSet, s: Iterable[int]) -> float:
    """``|reach(g, open, s)| / n``."""
    if g.n == 0:
        return 0.0
    return float(reach_mask(g, open_edges.edge_mask(g), s).sum()) / g.n


def reach_matrix(g: WeightedDigraph, open_edges: EdgeSet) -> np.ndarray:
    """``R[i, j]`` is True when ``j`` is reachable from ``i`` over open edges.

    Undirected graphs use connected components; directed graphs use the
    transitive closure of the open adjacency (repeated boolean squaring).
    """
    live = open_edges.edge_mask(g)
    if not g.directed:
        adjacency = sp.csr_matrix(
            (np.ones(int(live.sum())), (g.src[live], g.dst[live])), shape=(g.n, g.n)
        )
        _, labels = csgraph.connected_components(adjacency, directed=False)
        return labels[:, None] == labels[None, :]
    if g.n > 512:
        return np.stack([reach_mask(g, live, [i]) for i in range(g.n)])
    closure = np.eye(g.n, dtype=np.float64)
    closure[g.src[live], g.dst[live]] = 1.0
    for _ in range(max(1, int(np.ceil(np.log2(max(g.n, 2)))))):
        squared = (closure @ closure > 0).astype(np.float64)
        if np.array_equal(squared, closure):
            break
        closure = squared
    return closure > 0


def singleton_reach_sizes(g: WeightedDigraph, open_edges: EdgeSet) -> np.ndarray:
    """``|reach({i})|`` for every vertex ``i``."""
    if not g.directed:
        live = open_edges.edge_mask(g)
        adjacency = sp.csr_matrix(
            (np.ones(int(live.sum())), (g.src[live], g.dst[live])), shape=(g.n, g.n)
        )
        _, labels = csgraph.connected_components(adjacency, directed=False)
        return np.bincount(labels)[labels].astype(np.int64)
    return reach_matrix(g, open_edges).sum(axis=1).astype(np.int64)
