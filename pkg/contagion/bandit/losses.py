"""Loss estimators built from edge semi-bandit feedback.

Every estimator is marginal: a pick made after other sources in the same
round is charged only for the vertices it infects beyond the ``prior`` set
those earlier sources already reached. With an empty prior this is the
single-source game.
"""
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from contagion.graph.digraph import EdgeSet, WeightedDigraph
from contagion.graph.reach import reach_mask

PROBABILITY_FLOOR = 1e-300


def infected_from_feedback(
    g: WeightedDigraph, sources: Iterable[int], revealed: np.ndarray, status: np.ndarray
) -> np.ndarray:
    """Infected mask recomputed from revealed slots alone."""
    known_open = np.asarray(revealed, dtype=bool) & np.asarray(status, dtype=bool)
    return reach_mask(g, known_open[g.edge_slot], sources)


@dataclass(frozen=True, eq=False)
class RoundObservation:
    """What one pick taught the player.

    ``prior`` is the infected mask before the pick and ``infected`` the mask
    after it.
    """

    source: int
    prior: np.ndarray
    infected: np.ndarray

    @property
    def n(self) -> int:
        return int(self.infected.shape[0])

    @property
    def newly_infected(self) -> np.ndarray:
        return self.infected & ~self.prior

    @property
    def gain(self) -> float:
        """Marginal reward of the pick."""
        return float(self.newly_infected.sum()) / self.n

    @property
    def source_was_infected(self) -> bool:
        return bool(self.prior[self.source])


def node_loss_estimate(obs: RoundObservation, p: np.ndarray) -> np.ndarray:
    """Importance-weighted loss on the drawn vertex only."""
    estimate = np.zeros(obs.n)
    estimate[obs.source] = (1.0 - obs.gain) / max(p[obs.source], PROBABILITY_FLOOR)
    return estimate


def symmetric_loss_estimate(obs: RoundObservation, p: np.ndarray) -> np.ndarray:
    """Closed form of the pair-sum estimator for undirected games.

    With ``s`` the drawn vertex and ``C`` its component:

    * ``s`` not yet infected: ``0`` on ``C - {s}``, ``(1/n) / (p_i + p_s)``
      outside ``C``, and ``(1/n) * sum_{j not in C} 1 / (p_s + p_j)`` at ``s``;
    * ``s`` already infected: ``(1/n) / (p_i + p_s)`` for ``i != s`` and
      ``(1/n) * (sum_{j != s} 1 / (p_s + p_j) + 1 / p_s)`` at ``s``.
    """
    n = obs.n
    s = obs.source
    p = np.asarray(p, dtype=np.float64)
    inverse = 1.0 / np.maximum(p + p[s], PROBABILITY_FLOOR)
    estimate = inverse / n
    if obs.source_was_infected:
        others = np.arange(n) != s
        estimate[s] = (inverse[others].sum() + 1.0 / max(p[s], PROBABILITY_FLOOR)) / n
        return estimate
    component = obs.newly_infected
    estimate[component] = 0.0
    estimate[s] = inverse[~component].sum() / n
    return estimate


def loss_estimate(kind: str, obs: RoundObservation, p: np.ndarray) -> np.ndarray:
    if kind == "node":
        return node_loss_estimate(obs, p)
    if kind == "symmetric":
        return symmetric_loss_estimate(obs, p)
    raise ValueError(f"unknown loss kind {kind!r}")


def pair_losses(g: WeightedDigraph, open_edges: EdgeSet, prior: np.ndarray) -> np.ndarray:
    """``L[i, j]`` of the symmetric loss, read off the full open set.

    Off the diagonal ``L[i, j] = 1`` when ``i`` is already infected or ``i``
    and ``j`` lie in different components; ``L[i, i] = 1`` iff ``i`` is
    already infected.
    """
    live = open_edges.edge_mask(g)
    component = np.stack([reach_mask(g, live, [i]) for i in range(g.n)])
    losses = (~component).astype(np.float64)
    losses[prior, :] = 1.0
    np.fill_diagonal(losses, prior.astype(np.float64))
    return losses


def symmetric_loss_definitional(
    g: WeightedDigraph, open_edges: EdgeSet, prior: np.ndarray, p: np.ndarray, source: int
) -> np.ndarray:
    """The symmetric estimator as its pair sum, using the hidden open set.

    ``l_i = (1/n) * (sum_{j != i} L_ij 1{s in {i, j}} / (p_i + p_j) + L_ii 1{s = i} / p_i)``.
    """
    n = g.n
    losses = pair_losses(g, open_edges, prior)
    p = np.asarray(p, dtype=np.float64)
    estimate = np.zeros(n)
    for i in range(n):
        total = 0.0
        for j in range(n):
            if j == i:
                if source == i:
                    total += losses[i, i] / p[i]
            elif source in (i, j):
                total += losses[i, j] / (p[i] + p[j])
        estimate[i] = total / n
    return estimate


def true_losses(g: WeightedDigraph, open_edges: EdgeSet, prior: np.ndarray) -> np.ndarray:
    """``l_i = 1 - |reach(P + {i}) - P| / n`` for every vertex ``i``."""
    live = open_edges.edge_mask(g)
    prior_sources = np.flatnonzero(prior).tolist()
    result = np.empty(g.n)
    for i in range(g.n):
        infected = reach_mask(g, live, prior_sources + [i])
        result[i] = 1.0 - float((infected & ~prior).sum()) / g.n
    return result
