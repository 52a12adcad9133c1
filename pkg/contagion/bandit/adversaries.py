"""Oblivious adversaries: each draws its whole edge-set sequence from its own generator."""
import math
from abc import ABC, abstractmethod
from typing import Optional, Sequence

import numpy as np

from contagion.bandit.game import GameConfig
from contagion.core.errors import ConfigError
from contagion.graph.digraph import EdgeSet, WeightedDigraph
from contagion.graph.reach import singleton_reach_sizes


def _require_complete(g: WeightedDigraph, directed: bool, name: str) -> None:
    if g.directed != directed or g.m != g.n * (g.n - 1):
        kind = "directed" if directed else "undirected"
        raise ConfigError(f"{name} adversary needs the {kind} complete graph on {g.n} vertices")


def _incidence(g: WeightedDigraph, both_ends: bool) -> np.ndarray:
    """Slot-by-vertex matrix with a 1 at each slot's tail (and head when ``both_ends``)."""
    rows = np.arange(g.num_slots)
    incidence = np.zeros((g.num_slots, g.n))
    incidence[rows, g.slot_pairs[:, 0]] = 1.0
    if both_ends:
        incidence[rows, g.slot_pairs[:, 1]] += 1.0
    return incidence


class Adversary(ABC):
    """An oblivious strategy over edge sets.

    Implementations see the game configuration and a generator; they never
    see the player.
    """

    label = "adversary"

    def check(self, config: GameConfig) -> None:
        """Raise ConfigError if the strategy cannot play on ``config``."""

    @abstractmethod
    def sample(self, g: WeightedDigraph, rng: np.random.Generator, rounds: int) -> np.ndarray:
        """``(rounds, num_slots)`` open-slot masks, one row per round."""

    def edge_sets(self, config: GameConfig, rng: np.random.Generator) -> list[EdgeSet]:
        self.check(config)
        return [EdgeSet(row) for row in self.sample(config.graph, rng, config.horizon)]

    def singleton_rewards(self, g: WeightedDigraph, masks: np.ndarray) -> np.ndarray:
        """``X[t, i] = f(A_t, {i})`` for a block of sampled rounds."""
        return np.stack([singleton_reach_sizes(g, EdgeSet(row)) for row in masks]) / g.n


class IIDBernoulliAdversary(Adversary):
    """Every slot open independently with probability ``p`` in every round."""

    def __init__(self, p: float, label: str = "iid_bernoulli"):
        if not 0.0 <= p <= 1.0:
            raise ConfigError(f"edge probability must lie in [0, 1], got {p}")
        self.p = p
        self.label = label

    def sample(self, g: WeightedDigraph, rng: np.random.Generator, rounds: int) -> np.ndarray:
        return rng.random((rounds, g.num_slots)) < self.p


class FixedSequenceAdversary(Adversary):
    """Replays a given sequence of edge sets; consumes no randomness."""

    label = "fixed_sequence"

    def __init__(self, sequence: Sequence[EdgeSet]):
        self.sequence = list(sequence)

    def check(self, config: GameConfig) -> None:
        if len(self.sequence) != config.horizon:
            raise ConfigError(
                f"fixed sequence has {len(self.sequence)} rounds, horizon is {config.horizon}"
            )
        slots = config.graph.num_slots
        for t, edge_set in enumerate(self.sequence, start=1):
            if edge_set.mask.shape[0] != slots:
                raise ConfigError(f"round {t} edge set has {edge_set.mask.shape[0]} slots, graph has {slots}")

    def sample(self, g: WeightedDigraph, rng: np.random.Generator, rounds: int) -> np.ndarray:
        if rounds > len(self.sequence):
            raise ConfigError(f"fixed sequence has {len(self.sequence)} rounds, asked for {rounds}")
        return np.stack([e.mask for e in self.sequence[:rounds]]) if rounds else np.zeros((0, g.num_slots), bool)

    def edge_sets(self, config: GameConfig, rng: np.random.Generator) -> list[EdgeSet]:
        self.check(config)
        return list(self.sequence)


class CliqueAdversary(Adversary):
    """Random vertex subset per round; every edge inside it is open.

    Each vertex joins with probability ``c/n * (1 - delta)``; the
    ``distinguished`` vertex, if any, joins with probability ``c/n``.
    """

    label = "clique"

    def __init__(self, n: int, c: float, delta: float, distinguished: Optional[int] = None):
        problems = []
        if not 0.0 < c <= n:
            problems.append(f"clique size c must lie in (0, {n}], got {c}")
        if not 0.0 <= delta < 0.5:
            problems.append(f"delta must lie in [0, 1/2), got {delta}")
        if distinguished is not None and not 0 <= distinguished < n:
            problems.append(f"distinguished vertex {distinguished} out of range for n={n}")
        if problems:
            raise ConfigError(problems)
        self.n = n
        self.c = c
        self.delta = delta
        self.distinguished = distinguished

    @property
    def inclusion(self) -> np.ndarray:
        q = np.full(self.n, self.c / self.n * (1.0 - self.delta))
        if self.distinguished is not None:
            q[self.distinguished] = self.c / self.n
        return q

    def check(self, config: GameConfig) -> None:
        if config.n != self.n:
            raise ConfigError(f"adversary built for n={self.n}, game has n={config.n}")
        _require_complete(config.graph, directed=False, name="clique")

    def sample(self, g: WeightedDigraph, rng: np.random.Generator, rounds: int) -> np.ndarray:
        chosen = rng.random((rounds, self.n)) < self.inclusion
        pairs = g.slot_pairs
        return chosen[:, pairs[:, 0]] & chosen[:, pairs[:, 1]]

    def singleton_rewards(self, g: WeightedDigraph, masks: np.ndarray) -> np.ndarray:
        # the open edges form one clique, so a vertex's component is itself plus its open neighbours
        return (1.0 + masks.astype(np.float64) @ _incidence(g, both_ends=True)) / g.n


class SourceSinkAdversary(Adversary):
    """Directed ensemble: vertices are labelled source, sink or neither; all source-to-sink edges open.

    One uniform draw per vertex and round is split into ``[0, p_src)`` for
    source, ``[p_src, p_src + d/n)`` for sink, and the rest for neither.
    """

    label = "source_sink"

    def __init__(self, n: int, c: float, d: float, delta: float, distinguished: Optional[int] = None):
        problems = []
        if not 0.0 < c <= n:
            problems.append(f"source rate c must lie in (0, {n}], got {c}")
        if not 0.0 <= d < n:
            problems.append(f"sink rate d must lie in [0, {n}), got {d}")
        if c + d > n:
            problems.append(f"c + d must not exceed n, got {c} + {d} > {n}")
        if not 0.0 <= delta < 1.0:
            problems.append(f"delta must lie in [0, 1), got {delta}")
        if distinguished is not None and not 0 <= distinguished < n:
            problems.append(f"distinguished vertex {distinguished} out of range for n={n}")
        if problems:
            raise ConfigError(problems)
        self.n = n
        self.c = c
        self.d = d
        self.delta = delta
        self.distinguished = distinguished

    @property
    def source_probability(self) -> np.ndarray:
        p = np.full(self.n, self.c / self.n * (1.0 - self.delta))
        if self.distinguished is not None:
            p[self.distinguished] = self.c / self.n
        return p

    def check(self, config: GameConfig) -> None:
        if config.n != self.n:
            raise ConfigError(f"adversary built for n={self.n}, game has n={config.n}")
        _require_complete(config.graph, directed=True, name="source/sink")

    def sample(self, g: WeightedDigraph, rng: np.random.Generator, rounds: int) -> np.ndarray:
        u = rng.random((rounds, self.n))
        p_src = self.source_probability
        source = u < p_src
        sink = (u >= p_src) & (u < p_src + self.d / self.n)
        pairs = g.slot_pairs
        return source[:, pairs[:, 0]] & sink[:, pairs[:, 1]]

    def singleton_rewards(self, g: WeightedDigraph, masks: np.ndarray) -> np.ndarray:
        # sinks have no open out-edges, so reach is one hop
        return (1.0 + masks.astype(np.float64) @ _incidence(g, both_ends=False)) / g.n


def empty_adversary() -> Adversary:
    """Opens nothing, ever."""
    return IIDBernoulliAdversary(0.0, label="empty")


def clique_delta(n: int, c: float, horizon: int) -> float:
    """Perturbation size for the clique ensemble at horizon ``T``."""
    return (n - 1) / (2 * n) * math.sqrt(2 * n / horizon) * math.sqrt((n - c) / (c * (c + 1)))


def source_sink_delta(n: int, c: float, d: float, horizon: int) -> float:
    """Perturbation size for the source/sink ensemble at horizon ``T``."""
    return 0.5 * (n - 1) / n * math.sqrt(2 * n / horizon) * math.sqrt(n * (n - c - d) / (c * (n - d)))


def clique_gap(n: int, c: float, delta: float) -> float:
    """``E[X_i - X_j]`` per round when ``i`` is the distinguished vertex."""
    return (n - 2) * c**2 * (1 - delta) * delta / n**3


def source_sink_gap(n: int, c: float, d: float, delta: float) -> float:
    """``E[X_i - X_j]`` per round when ``i`` is the distinguished vertex."""
    return (n - 1) * c * d * delta / n**3
