"""Triggering models (LT, IC, explicit trigger distributions) and their validation."""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from contagion.core.errors import GraphValidationError, ModelValidationError
from contagion.graph.digraph import WeightedDigraph, check_graph

LT_COLUMN_TOLERANCE = 1e-12
EXPLICIT_TOLERANCE = 1e-9

TriggerDistribution = tuple[tuple[tuple[int, ...], float], ...]


class ModelKind(str, Enum):
    """Contagion model families."""

    LINEAR_THRESHOLD = "lt"
    INDEPENDENT_CASCADE = "ic"
    EXPLICIT = "explicit"


@dataclass(frozen=True, eq=False)
class TriggerModel:
    """A weighted digraph plus the rule each vertex uses to pick its triggers.

    ``graph`` holds the marginal live-edge probabilities ``b_ji``; for explicit
    models ``triggers[i]`` lists ``(sorted in-neighbour subset, probability)``.
    Undirected topologies are stored directed, since LT weights differ by
    direction. Construction does not validate; call :func:`validate`.
    """

    graph: WeightedDigraph
    kind: ModelKind
    triggers: Optional[tuple[TriggerDistribution, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ModelKind(self.kind))
        if not self.graph.directed:
            object.__setattr__(self, "graph", self.graph.as_directed())

    @property
    def n(self) -> int:
        return self.graph.n

    def column_sums(self) -> np.ndarray:
        """``Σ_j b_ji`` for every vertex ``i``."""
        g = self.graph
        return np.bincount(g.dst, weights=g.weight, minlength=g.n)


def validate(model: TriggerModel) -> None:
    """Check every graph and model invariant.

    Raises:
        GraphValidationError: On a graph invariant.
        ModelValidationError: On the first violated model invariant, naming
            the offending vertex or edge.
    """
    g = model.graph
    check_graph(g)
    if model.kind is ModelKind.LINEAR_THRESHOLD:
        sums = model.column_sums()
        over = np.flatnonzero(sums > 1.0 + LT_COLUMN_TOLERANCE)
        if over.size:
            v = int(over[0])
            raise ModelValidationError(
                "lt-column-sum",
                f"incoming weights of vertex {v} sum to {sums[v]:.17g} > 1",
                vertex=v,
                value=float(sums[v]),
            )
    elif model.kind is ModelKind.EXPLICIT:
        _validate_triggers(model)


def _validate_triggers(model: TriggerModel) -> None:
    g = model.graph
    if model.triggers is None or len(model.triggers) != g.n:
        raise ModelValidationError(
            "explicit-distribution", "explicit models need one trigger distribution per vertex"
        )
    for v, distribution in enumerate(model.triggers):
        in_neighbours = {int(g.src[e]) for e in g.in_edges(v)}
        total = 0.0
        marginal = {j: 0.0 for j in in_neighbours}
        for subset, p in distribution:
            if not (math.isfinite(p) and 0.0 <= p <= 1.0):
                raise ModelValidationError(
                    "explicit-probability", f"trigger probability {p} of vertex {v} outside [0, 1]",
                    vertex=v, value=p,
                )
            total += p
            for j in subset:
                if j not in in_neighbours:
                    raise ModelValidationError(
                        "explicit-subset",
                        f"trigger set of vertex {v} contains {j}, which is not an in-neighbour",
                        vertex=v, edge=(j, v),
                    )
                marginal[j] += p
        if abs(total - 1.0) > EXPLICIT_TOLERANCE:
            raise ModelValidationError(
                "explicit-normalization",
                f"trigger probabilities of vertex {v} sum to {total:.17g}, not 1",
                vertex=v, value=total,
            )
        for j, p in sorted(marginal.items()):
            b = g.weight_of(j, v)
            if abs(p - b) > EXPLICIT_TOLERANCE:
                raise ModelValidationError(
                    "explicit-marginal",
                    f"marginal live probability of edge ({j}, {v}) is {p:.17g}, stored weight {b:.17g}",
                    vertex=v, edge=(j, v), value=p,
                )


def lt_weights_gamma(
    g: WeightedDigraph,
    gamma_min: float,
    gamma_max: float,
    seed: int | np.random.SeedSequence,
) -> TriggerModel:
    """LT model with ``b_ji = (1 - γ(i)) / d(i)``, ``γ(i) ~ Uniform[gamma_min, gamma_max]``.

    ``d(i)`` is the in-degree of ``i`` (the degree for undirected topologies).
    One γ is drawn per vertex in id order, isolated vertices included, so the
    weights depend only on ``(g, gamma_min, gamma_max, seed)``.
    """
    if not 0.0 <= gamma_min <= gamma_max <= 1.0:
        raise GraphValidationError(
            "gamma-range", f"need 0 <= gamma_min <= gamma_max <= 1, got [{gamma_min}, {gamma_max}]"
        )
    rng = np.random.default_rng(seed)
    gamma = rng.uniform(gamma_min, gamma_max, size=g.n)
    directed = g.as_directed()
    degree = directed.in_degree[directed.dst].astype(np.float64)
    weight = (1.0 - gamma[directed.dst]) / degree
    return TriggerModel(directed.with_weights(weight), ModelKind.LINEAR_THRESHOLD)


def uniform_weights(
    g: WeightedDigraph,
    probability: float,
    kind: ModelKind = ModelKind.INDEPENDENT_CASCADE,
) -> TriggerModel:
    """Model with every edge weight set to ``probability``."""
    directed = g.as_directed()
    return TriggerModel(directed.with_weights(np.full(directed.m, float(probability))), kind)


def explicit_model(n: int, triggers: Sequence[Sequence[tuple[Sequence[int], float]]]) -> TriggerModel:
    """Explicit triggering model whose graph carries the induced marginals.

    Args:
        n: Vertex count.
        triggers: Per vertex, ``(in-neighbour subset, probability)`` pairs.
            Vertices past the end of the list never trigger.
    """
    normalized: list[TriggerDistribution] = []
    marginals: dict[tuple[int, int], float] = {}
    for v in range(n):
        distribution = triggers[v] if v < len(triggers) else ()
        entries = []
        for subset, p in distribution:
            members = tuple(sorted({int(j) for j in subset}))
            entries.append((members, float(p)))
            for j in members:
                marginals[(j, v)] = marginals.get((j, v), 0.0) + float(p)
        if not entries:
            entries.append(((), 1.0))
        normalized.append(tuple(entries))
    edges = [(j, v, min(p, 1.0)) for (j, v), p in sorted(marginals.items())]
    graph = WeightedDigraph.from_edges(n, edges, directed=True)
    return TriggerModel(graph, ModelKind.EXPLICIT, tuple(normalized))
