"""Types of the online influence game: configuration, feedback and episode logs."""
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

import numpy as np

from contagion.core.errors import ConfigError
from contagion.graph.digraph import EdgeSet, WeightedDigraph
from contagion.graph.reach import reach_matrix, singleton_reach_sizes


@dataclass(frozen=True, eq=False)
class GameConfig:
    """Topology (every edge playable), horizon ``T`` and sources per round ``k``."""

    graph: WeightedDigraph
    horizon: int
    k: int = 1

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ConfigError(f"horizon must be >= 1, got {self.horizon}")
        if not 1 <= self.k <= self.graph.n:
            raise ConfigError(f"k must lie in [1, {self.graph.n}], got {self.k}")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def directed(self) -> bool:
        return self.graph.directed


def revealed_slots(g: WeightedDigraph, infected: np.ndarray) -> np.ndarray:
    """Slots whose status the player sees once ``infected`` is known.

    Undirected: edges with at least one endpoint infected. Directed: edges
    whose tail is infected.
    """
    tails = infected[g.slot_pairs[:, 0]]
    if g.directed:
        return tails
    return tails | infected[g.slot_pairs[:, 1]]


@dataclass(frozen=True, eq=False)
class Feedback:
    """Revealed edge statuses: slot ids in ascending order and whether each is open."""

    slots: np.ndarray
    status: np.ndarray

    @classmethod
    def from_masks(cls, revealed: np.ndarray, open_mask: np.ndarray) -> "Feedback":
        slots = np.flatnonzero(revealed)
        return cls(slots, open_mask[slots].astype(bool))

    @classmethod
    def of_round(cls, g: WeightedDigraph, open_edges: EdgeSet, infected: np.ndarray) -> "Feedback":
        """Feedback for a round whose infected set is ``infected``."""
        return cls.from_masks(revealed_slots(g, infected), open_edges.mask)

    def pairs(self, g: WeightedDigraph) -> list[tuple[tuple[int, int], bool]]:
        return [((int(g.slot_pairs[s, 0]), int(g.slot_pairs[s, 1])), bool(o))
                for s, o in zip(self.slots, self.status)]

    def __len__(self) -> int:
        return int(self.slots.shape[0])


@dataclass(frozen=True, eq=False)
class RoundRecord:
    """Ground truth and outcome of one round."""

    t: int
    edge_set: EdgeSet
    sources: tuple[int, ...]
    reward: float
    feedback: Feedback


def _pair_text(g: WeightedDigraph, slots: np.ndarray) -> list[str]:
    return [f"{g.slot_pairs[s, 0]}-{g.slot_pairs[s, 1]}" for s in slots]


@dataclass(eq=False)
class EpisodeLog:
    """Per-round records of one episode."""

    config: GameConfig
    records: list[RoundRecord] = field(default_factory=list)

    @property
    def rewards(self) -> np.ndarray:
        return np.array([r.reward for r in self.records])

    @property
    def edge_sets(self) -> list[EdgeSet]:
        return [r.edge_set for r in self.records]

    @cached_property
    def singleton_rewards(self) -> np.ndarray:
        """``X[t, i] = f(A_t, {i})``."""
        g = self.config.graph
        return np.stack([singleton_reach_sizes(g, a) for a in self.edge_sets]) / g.n

    @cached_property
    def reach_tensor(self) -> np.ndarray:
        """``R[t, i, j]``: ``j`` reachable from ``i`` in round ``t``."""
        g = self.config.graph
        return np.stack([reach_matrix(g, a) for a in self.edge_sets])

    def lines(self) -> Iterator[str]:
        """``t, adversary edges, sources, reward, feedback`` tab-separated, ``t`` from 1."""
        g = self.config.graph
        for r in self.records:
            adversary = ",".join(_pair_text(g, np.flatnonzero(r.edge_set.mask)))
            sources = ",".join(str(v) for v in r.sources)
            feedback = ",".join(
                f"{text}:{int(o)}" for text, o in zip(_pair_text(g, r.feedback.slots), r.feedback.status)
            )
            yield f"{r.t}\t{adversary}\t{sources}\t{r.reward:.17g}\t{feedback}"

    def write(self, path: str) -> None:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for line in self.lines():
                f.write(line + "\n")
