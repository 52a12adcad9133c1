"""Exact and Monte Carlo influence via the live-edge interpretation."""
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from contagion.core.errors import InstanceTooLargeError
from contagion.core.rng import make_rng
from contagion.core.run_manager import ManagedRun
from contagion.graph.digraph import EdgeSet, seed_set
from contagion.graph.models import ModelKind, TriggerModel
from contagion.graph.reach import reach_mask

logger = logging.getLogger(__name__)

EXACT_LIMIT = 10**7
_CHUNK = 1 << 15


@dataclass(frozen=True)
class InfluenceEstimate:
    """Monte Carlo estimate of the influence ``I(A)``."""

    mean: float
    stderr: float
    replications: int


class LiveEdgeSampler:
    """Draws live-edge samples for one model; precomputes the per-kind tables once.

    Every draw consumes a fixed number of uniforms (``n`` for LT and explicit
    models, ``m`` for IC), so streams stay aligned across models of one graph.
    """

    def __init__(self, model: TriggerModel):
        self.model = model
        g = model.graph
        self._n = g.n
        self._m = g.m
        if model.kind is ModelKind.LINEAR_THRESHOLD:
            order = g.in_order
            cumulative = np.cumsum(g.weight[order])
            base = np.concatenate(([0.0], cumulative))[g.in_ptr[:-1]]
            dst = g.dst[order]
            within = np.minimum(cumulative - base[dst], 1.0)
            self._order = order
            self._keys = dst.astype(np.float64) + within
            self._start = g.in_ptr[:-1]
            self._end = g.in_ptr[1:]
        elif model.kind is ModelKind.EXPLICIT:
            self._cumulative = []
            self._subset_edges = []
            for v, distribution in enumerate(model.triggers or ()):
                probs = np.array([p for _, p in distribution])
                self._cumulative.append(np.cumsum(probs))
                self._subset_edges.append(
                    [np.array([g.edge_index[(j, v)] for j in subset], dtype=np.int64)
                     for subset, _ in distribution]
                )

    def sample_mask(self, rng: np.random.Generator) -> np.ndarray:
        """Boolean mask over stored edges marking the live ones."""
        kind = self.model.kind
        if kind is ModelKind.INDEPENDENT_CASCADE:
            return rng.random(self._m) < self.model.graph.weight
        live = np.zeros(self._m, dtype=bool)
        u = rng.random(self._n)
        if kind is ModelKind.LINEAR_THRESHOLD:
            pos = np.searchsorted(self._keys, np.arange(self._n) + u, side="right")
            chosen = (pos >= self._start) & (pos < self._end)
            live[self._order[pos[chosen]]] = True
            return live
        for v in range(self._n):
            cumulative = self._cumulative[v]
            pick = min(int(np.searchsorted(cumulative, u[v], side="right")), len(cumulative) - 1)
            live[self._subset_edges[v][pick]] = True
        return live


def sample_live_edges(model: TriggerModel, rng: np.random.Generator) -> EdgeSet:
    """One live-edge sample (LT: at most one live in-edge per vertex; IC: independent edges)."""
    return EdgeSet(LiveEdgeSampler(model).sample_mask(rng))


def estimate_influence(
    model: TriggerModel,
    seeds: Iterable[int],
    replications: int,
    seed: int,
    run: Optional[ManagedRun] = None,
) -> InfluenceEstimate:
    """Mean reach of ``seeds`` over i.i.d. live-edge samples.

    Replication ``r`` draws from stream ``(seed, "influence", r)``, so the
    result does not depend on how ``run`` schedules the replications.

    Args:
        model: Validated triggering model.
        seeds: Seed set A.
        replications: Number of samples (>= 1).
        seed: Master seed.
        run: Optional pool for the replications.
    """
    if replications < 1:
        raise ValueError(f"replications must be >= 1, got {replications}")
    g = model.graph
    sources = seed_set(seeds, g.n)
    sampler = LiveEdgeSampler(model)

    def one(r: int) -> int:
        live = sampler.sample_mask(make_rng(seed, "influence", r))
        return int(reach_mask(g, live, sources).sum())

    items = range(replications)
    sizes = run.map(one, items, label="influence replications") if run else [one(r) for r in items]
    values = np.asarray(sizes, dtype=np.float64)
    stderr = float(values.std(ddof=1) / math.sqrt(replications)) if replications > 1 else 0.0
    return InfluenceEstimate(float(values.mean()), stderr, replications)


def _choice_groups(model: TriggerModel, sources: tuple[int, ...]) -> list[list[tuple[float, tuple[int, ...]]]]:
    """Independent random choices that can change the reach of ``sources``.

    Each group lists ``(probability, live edge ids)`` options. Only vertices
    reachable from the sources in the positive-weight graph matter; choices of
    edges whose tail is unreachable fold into the "no live edge" option.
    """
    g = model.graph
    relevant = reach_mask(g, g.weight > 0, sources)
    relevant_src = relevant[g.src]
    in_seed = np.zeros(g.n, dtype=bool)
    in_seed[list(sources)] = True
    groups: list[list[tuple[float, tuple[int, ...]]]] = []

    if model.kind is ModelKind.INDEPENDENT_CASCADE:
        for e in range(g.m):
            b = float(g.weight[e])
            if b > 0 and relevant_src[e] and not in_seed[g.dst[e]]:
                options = [(b, (e,))]
                if b < 1.0:
                    options.append((1.0 - b, ()))
                groups.append(options)
        return groups

    for v in np.flatnonzero(relevant & ~in_seed):
        if model.kind is ModelKind.LINEAR_THRESHOLD:
            options = [(float(g.weight[e]), (int(e),)) for e in g.in_edges(v)
                       if g.weight[e] > 0 and relevant_src[e]]
            rest = 1.0 - sum(p for p, _ in options)
            if rest > 0:
                options.append((rest, ()))
        else:
            merged: dict[tuple[int, ...], float] = {}
            for subset, p in model.triggers[v]:
                if p <= 0:
                    continue
                edges = tuple(g.edge_index[(j, int(v))] for j in subset if relevant[j])
                merged[edges] = merged.get(edges, 0.0) + p
            options = [(p, edges) for edges, p in merged.items()]
        if len(options) > 1 or (options and options[0][1]):
            groups.append(options)
    return groups


def exact_influence(model: TriggerModel, seeds: Iterable[int], limit: int = EXACT_LIMIT) -> float:
    """``Σ_config P(config) · |reach(config, A)|`` by full enumeration.

    LT and explicit models enumerate one choice per vertex, IC models one
    coin per relevant edge.

    Raises:
        InstanceTooLargeError: If the configuration count exceeds ``limit``.
    """
    g = model.graph
    sources = seed_set(seeds, g.n)
    groups = _choice_groups(model, sources)
    count = math.prod(len(group) for group in groups)
    if count > limit:
        raise InstanceTooLargeError(count, limit)

    edges = sorted({e for group in groups for _, option in group for e in option})
    local = {e: i for i, e in enumerate(edges)}
    edge_src = [int(g.src[e]) for e in edges]
    edge_dst = [int(g.dst[e]) for e in edges]
    radices = [len(group) for group in groups]
    probs = [np.array([p for p, _ in group]) for group in groups]

    total = 0.0
    for start in range(0, count, _CHUNK):
        stop = min(start + _CHUNK, count)
        rest = np.arange(start, stop, dtype=np.int64)
        weight = np.ones(stop - start)
        live = np.zeros((len(edges), stop - start), dtype=bool)
        for group, radix, p in zip(groups, radices, probs):
            digit = rest % radix
            rest //= radix
            weight *= p[digit]
            for j, (_, option) in enumerate(group):
                if option:
                    hit = digit == j
                    for e in option:
                        live[local[e]] |= hit
        infected = np.zeros((g.n, stop - start), dtype=bool)
        infected[list(sources)] = True
        changed = True
        while changed:
            changed = False
            for i, (u, v) in enumerate(zip(edge_src, edge_dst)):
                spread = infected[u] & live[i] & ~infected[v]
                if spread.any():
                    infected[v] |= spread
                    changed = True
        total += float(weight @ infected.sum(axis=0))
    logger.debug("exact influence over %d configurations: %.12g", count, total)
    return total


def run_threshold_process(model: TriggerModel, seeds: Iterable[int], rng: np.random.Generator) -> np.ndarray:
    """LT threshold dynamics: draw ``θ_i ~ U[0, 1)`` and infect ``i`` once ``Σ_{infected j} b_ji > θ_i``.

    Independent of the live-edge sampler; used as an oracle for it.
    """
    g = model.graph
    theta = rng.random(g.n)
    infected = np.zeros(g.n, dtype=bool)
    infected[list(seed_set(seeds, g.n))] = True
    for _ in range(g.n):
        incoming = np.bincount(g.dst, weights=g.weight * infected[g.src], minlength=g.n)
        newly = ~infected & (incoming > theta)
        if not newly.any():
            break
        infected |= newly
    return infected


def run_cascade_process(model: TriggerModel, seeds: Iterable[int], rng: np.random.Generator) -> np.ndarray:
    """IC dynamics: each newly infected vertex gets one chance per out-edge to infect."""
    g = model.graph
    infected = np.zeros(g.n, dtype=bool)
    frontier = np.zeros(g.n, dtype=bool)
    start = list(seed_set(seeds, g.n))
    infected[start] = True
    frontier[start] = True
    while frontier.any():
        attempts = np.flatnonzero(frontier[g.src] & ~infected[g.dst])
        success = attempts[rng.random(attempts.size) < g.weight[attempts]]
        frontier = np.zeros(g.n, dtype=bool)
        frontier[g.dst[success]] = True
        frontier &= ~infected
        infected |= frontier
    return infected
