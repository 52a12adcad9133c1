"""Immutable weighted digraph with compressed in/out adjacency, and edge subsets."""
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from contagion.core.errors import GraphValidationError

SeedSet = tuple[int, ...]

DENSE_LIMIT = 2000


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class WeightedDigraph:
    """Vertices ``0..n-1`` and directed edges ``src[e] -> dst[e]`` with ``weight[e]`` in [0, 1].

    Edges are stored sorted by ``(src, dst)``. An undirected graph is stored as
    the symmetric directed graph with ``directed=False``; its edge *slots* are
    the unordered pairs ``u < v``.
    Build instances with :meth:`from_edges`.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    directed: bool = True

    def __post_init__(self) -> None:
        check_graph(self)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Sequence[float]],
        directed: bool = True,
    ) -> "WeightedDigraph":
        """Build a graph from ``(src, dst)`` or ``(src, dst, weight)`` tuples.

        Missing weights default to 1.0. For undirected graphs each pair may be
        listed in one or both orientations, with equal weights.

        Raises:
            GraphValidationError: On out-of-range ids, self-loops, duplicate
                edges, asymmetric undirected weights or weights outside [0, 1].
        """
        if n < 0:
            raise GraphValidationError("vertex-count", f"vertex count must be >= 0, got {n}")
        stored: dict[tuple[int, int], float] = {}
        for item in edges:
            u, v = int(item[0]), int(item[1])
            w = float(item[2]) if len(item) > 2 else 1.0
            for x in (u, v):
                if not 0 <= x < n:
                    raise GraphValidationError(
                        "vertex-range", f"vertex {x} out of range for n={n}", vertex=x, edge=(u, v)
                    )
            if u == v:
                raise GraphValidationError("self-loop", f"self-loop at vertex {u}", vertex=u, edge=(u, v))
            if directed:
                if (u, v) in stored:
                    raise GraphValidationError(
                        "duplicate-edge", f"edge ({u}, {v}) listed twice", edge=(u, v)
                    )
                stored[(u, v)] = w
            else:
                if (u, v) in stored and stored[(u, v)] != w:
                    raise GraphValidationError(
                        "undirected-symmetry",
                        f"edge ({u}, {v}) listed with weights {stored[(u, v)]} and {w}",
                        edge=(u, v),
                        value=w,
                    )
                stored[(u, v)] = w
                stored[(v, u)] = w
        keys = sorted(stored)
        src = np.fromiter((k[0] for k in keys), dtype=np.int64, count=len(keys))
        dst = np.fromiter((k[1] for k in keys), dtype=np.int64, count=len(keys))
        weight = np.fromiter((stored[k] for k in keys), dtype=np.float64, count=len(keys))
        return cls(n, _frozen(src), _frozen(dst), _frozen(weight), directed)

    @property
    def m(self) -> int:
        """Number of stored directed edges."""
        return int(self.src.shape[0])

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        """Map ``(src, dst)`` to the stored edge id."""
        return {(int(u), int(v)): e for e, (u, v) in enumerate(zip(self.src, self.dst))}

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edge_index

    def weight_of(self, u: int, v: int) -> float:
        """Weight of edge ``(u, v)``, 0.0 when absent."""
        e = self.edge_index.get((u, v))
        return 0.0 if e is None else float(self.weight[e])

    def edges(self) -> Iterator[tuple[int, int, float]]:
        for u, v, w in zip(self.src.tolist(), self.dst.tolist(), self.weight.tolist()):
            yield u, v, w

    @cached_property
    def out_ptr(self) -> np.ndarray:
        """CSR row pointer: out-edges of ``u`` are ids ``out_ptr[u]:out_ptr[u+1]``."""
        counts = np.bincount(self.src, minlength=self.n)
        return _frozen(np.concatenate(([0], np.cumsum(counts))).astype(np.int64))

    @cached_property
    def in_order(self) -> np.ndarray:
        """Edge ids sorted by ``(dst, src)``."""
        return _frozen(np.lexsort((self.src, self.dst)).astype(np.int64))

    @cached_property
    def in_ptr(self) -> np.ndarray:
        """In-edges of ``v`` are ``in_order[in_ptr[v]:in_ptr[v+1]]``."""
        counts = np.bincount(self.dst, minlength=self.n)
        return _frozen(np.concatenate(([0], np.cumsum(counts))).astype(np.int64))

    @cached_property
    def out_degree(self) -> np.ndarray:
        return _frozen(np.diff(self.out_ptr))

    @cached_property
    def in_degree(self) -> np.ndarray:
        return _frozen(np.diff(self.in_ptr))

    def in_edges(self, v: int) -> np.ndarray:
        return self.in_order[self.in_ptr[v]:self.in_ptr[v + 1]]

    def out_edges(self, u: int) -> np.ndarray:
        return np.arange(self.out_ptr[u], self.out_ptr[u + 1])

    @cached_property
    def adjacency_lists(self) -> tuple[list[int], list[int]]:
        """Plain-list copies of ``out_ptr`` and ``dst`` for tight Python loops."""
        return self.out_ptr.tolist(), self.dst.tolist()

    @cached_property
    def slot_pairs(self) -> np.ndarray:
        """``(num_slots, 2)`` array of edge slots: stored edges, or pairs ``u < v`` if undirected."""
        if self.directed:
            pairs = np.stack([self.src, self.dst], axis=1)
        else:
            keep = self.src < self.dst
            pairs = np.stack([self.src[keep], self.dst[keep]], axis=1)
        return _frozen(pairs.astype(np.int64))

    @property
    def num_slots(self) -> int:
        return int(self.slot_pairs.shape[0])

    @cached_property
    def edge_slot(self) -> np.ndarray:
        """Slot id of every stored edge."""
        if self.directed:
            return _frozen(np.arange(self.m, dtype=np.int64))
        lookup = {(int(u), int(v)): s for s, (u, v) in enumerate(self.slot_pairs)}
        slots = [lookup[(min(u, v), max(u, v))] for u, v in zip(self.src.tolist(), self.dst.tolist())]
        return _frozen(np.asarray(slots, dtype=np.int64))

    def slot_of(self, u: int, v: int) -> Optional[int]:
        """Slot id of the edge between ``u`` and ``v`` (either orientation if undirected)."""
        e = self.edge_index.get((u, v))
        if e is None and not self.directed:
            e = self.edge_index.get((v, u))
        return None if e is None else int(self.edge_slot[e])

    def dense_matrix(self) -> np.ndarray:
        """Weighted adjacency ``B`` with ``B[i, j] = b_ij``."""
        matrix = np.zeros((self.n, self.n))
        matrix[self.src, self.dst] = self.weight
        return matrix

    def sparse_matrix(self) -> sp.csr_matrix:
        """Weighted adjacency ``B`` in CSR form (zero weights dropped)."""
        keep = self.weight > 0
        return sp.csr_matrix(
            (self.weight[keep], (self.src[keep], self.dst[keep])), shape=(self.n, self.n)
        )

    @cached_property
    def adjacency(self) -> np.ndarray | sp.csr_matrix:
        """Read-only ``B``: dense up to ``DENSE_LIMIT`` vertices, CSR beyond."""
        if self.n <= DENSE_LIMIT:
            return _frozen(self.dense_matrix())
        return self.sparse_matrix()

    def with_weights(self, weight: np.ndarray) -> "WeightedDigraph":
        """Same topology, new per-edge weights (aligned with stored edge ids)."""
        weight = np.array(weight, dtype=np.float64)
        if weight.shape != self.weight.shape:
            raise GraphValidationError(
                "weight-shape", f"expected {self.m} weights, got {weight.shape[0]}"
            )
        return WeightedDigraph(self.n, self.src, self.dst, _frozen(weight), self.directed)

    def as_directed(self) -> "WeightedDigraph":
        """The same stored edges flagged directed."""
        if self.directed:
            return self
        return WeightedDigraph(self.n, self.src, self.dst, self.weight, True)


def check_graph(g: WeightedDigraph) -> None:
    """Raise GraphValidationError on the first violated WeightedDigraph invariant."""
    if g.src.shape != g.dst.shape or g.src.shape != g.weight.shape:
        raise GraphValidationError("edge-arrays", "src, dst and weight must have equal length")
    for e, (u, v, w) in enumerate(zip(g.src.tolist(), g.dst.tolist(), g.weight.tolist())):
        if not (0 <= u < g.n and 0 <= v < g.n):
            raise GraphValidationError(
                "vertex-range", f"edge ({u}, {v}) has a vertex outside 0..{g.n - 1}", edge=(u, v)
            )
        if u == v:
            raise GraphValidationError("self-loop", f"self-loop at vertex {u}", vertex=u, edge=(u, v))
        if not (math.isfinite(w) and 0.0 <= w <= 1.0):
            raise GraphValidationError(
                "weight-range", f"weight of edge ({u}, {v}) is {w}, outside [0, 1]", edge=(u, v), value=w
            )
    if g.m > 1:
        order = np.lexsort((g.dst, g.src))
        if not np.array_equal(order, np.arange(g.m)):
            raise GraphValidationError("edge-order", "edges must be sorted by (src, dst)")
        same = (g.src[1:] == g.src[:-1]) & (g.dst[1:] == g.dst[:-1])
        if same.any():
            e = int(np.argmax(same))
            pair = (int(g.src[e]), int(g.dst[e]))
            raise GraphValidationError("duplicate-edge", f"edge {pair} stored twice", edge=pair)
    if not g.directed:
        for (u, v), e in g.edge_index.items():
            back = g.edge_index.get((v, u))
            if back is None or g.weight[back] != g.weight[e]:
                raise GraphValidationError(
                    "undirected-symmetry",
                    f"undirected graph lacks a matching reverse edge for ({u}, {v})",
                    edge=(u, v),
                )


def seed_set(vertices: Iterable[int], n: Optional[int] = None) -> SeedSet:
    """Sorted duplicate-free tuple of vertex ids, range-checked when ``n`` is given."""
    result = tuple(sorted({int(v) for v in vertices}))
    if n is not None:
        for v in result:
            if not 0 <= v < n:
                raise GraphValidationError("vertex-range", f"seed vertex {v} out of range for n={n}", vertex=v)
    return result


class EdgeSet:
    """A subset of a graph's edge slots, held as a read-only boolean mask."""

    __slots__ = ("mask",)

    def __init__(self, mask: Sequence[bool] | np.ndarray):
        self.mask = _frozen(np.array(mask, dtype=bool))

    @classmethod
    def empty(cls, g: WeightedDigraph) -> "EdgeSet":
        return cls(np.zeros(g.num_slots, dtype=bool))

    @classmethod
    def full(cls, g: WeightedDigraph) -> "EdgeSet":
        return cls(np.ones(g.num_slots, dtype=bool))

    @classmethod
    def from_pairs(cls, g: WeightedDigraph, pairs: Iterable[tuple[int, int]]) -> "EdgeSet":
        """Edge set from ``(u, v)`` pairs; orientation is ignored for undirected graphs."""
        mask = np.zeros(g.num_slots, dtype=bool)
        for u, v in pairs:
            slot = g.slot_of(int(u), int(v))
            if slot is None:
                raise GraphValidationError("edge-subset", f"({u}, {v}) is not an edge", edge=(u, v))
            mask[slot] = True
        return cls(mask)

    def pairs(self, g: WeightedDigraph) -> list[tuple[int, int]]:
        """Open slots as ``(u, v)`` pairs in slot order."""
        return [(int(u), int(v)) for u, v in g.slot_pairs[self.mask]]

    def edge_mask(self, g: WeightedDigraph) -> np.ndarray:
        """Mask over stored directed edges (an open undirected slot opens both directions)."""
        if self.mask.shape[0] != g.num_slots:
            raise GraphValidationError(
                "edge-subset", f"edge set has {self.mask.shape[0]} slots, graph has {g.num_slots}"
            )
        return self.mask[g.edge_slot]

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EdgeSet):
            return NotImplemented
        return np.array_equal(self.mask, other.mask)

    def __hash__(self) -> int:
        return hash(np.packbits(self.mask).tobytes())

    def __repr__(self) -> str:
        return f"EdgeSet({len(self)} of {self.mask.shape[0]} open)"
