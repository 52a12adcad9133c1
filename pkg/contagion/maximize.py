"""Greedy maximization of set objectives under a cardinality constraint."""
import heapq
import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import pandas as pd

from contagion import bounds
from contagion.core.errors import SearchSpaceTooLargeError
from contagion.core.rng import derive_seed
from contagion.core.run_manager import ManagedRun
from contagion.graph.digraph import SeedSet, seed_set
from contagion.graph.models import TriggerModel
from contagion.simulate import estimate_influence

logger = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 10**6
LAZY_TIE_SLACK = 1e-9
TRACE_COLUMNS = ["step", "vertex", "objective_value", "marginal_gain", "millis"]


@dataclass(frozen=True)
class Objective:
    """A set function ``f(S)``; ``step`` lets Monte Carlo objectives reseed per greedy step.

    ``guaranteed`` marks objectives known to be monotone and submodular.
    """

    label: str
    evaluate: Callable[[SeedSet, int], float]
    guaranteed: bool = True

    def __call__(self, seeds: Iterable[int], step: int = 0) -> float:
        return float(self.evaluate(seed_set(seeds), step))


def lb_objective(model: TriggerModel, m: int) -> Objective:
    return Objective(f"lb{m}", lambda s, _: bounds.lb_m(model, s, m))


def lb_trig_objective(model: TriggerModel) -> Objective:
    return Objective("lb_trig", lambda s, _: bounds.lb_trig(model, s))


def ub_trunc_objective(model: TriggerModel) -> Objective:
    """Truncated upper bound; greedy on it carries no approximation guarantee."""
    return Objective("ub_trunc", lambda s, _: bounds.ub_truncated(model, s), guaranteed=False)


def mc_objective(
    model: TriggerModel,
    replications: int,
    seed: int,
    run: Optional[ManagedRun] = None,
) -> Objective:
    """Estimated influence; all candidates of one greedy step share the step's samples."""

    def evaluate(s: SeedSet, step: int) -> float:
        return estimate_influence(model, s, replications, derive_seed(seed, "greedy-step", step), run).mean

    return Objective(f"mc_influence({replications})", evaluate, guaranteed=False)


def make_objective(
    name: str,
    model: TriggerModel,
    replications: int = 20,
    seed: int = 0,
    run: Optional[ManagedRun] = None,
) -> Objective:
    """Objective by configuration name: lb1, lb2, lb3, lb_trig, ub_trunc or mc."""
    if name in ("lb1", "lb2", "lb3"):
        return lb_objective(model, int(name[-1]))
    if name == "lb_trig":
        return lb_trig_objective(model)
    if name == "ub_trunc":
        return ub_trunc_objective(model)
    if name == "mc":
        return mc_objective(model, replications, seed, run)
    raise ValueError(f"unknown objective {name!r}")


@dataclass
class GreedyTrace:
    """Selected vertices in order, with the objective value and gain after each step."""

    label: str
    initial_value: float
    selected: list[int] = field(default_factory=list)
    values: list[float] = field(default_factory=list)
    gains: list[float] = field(default_factory=list)
    millis: list[float] = field(default_factory=list)
    evaluations: int = 0

    @property
    def final_value(self) -> float:
        return self.values[-1] if self.values else self.initial_value

    @property
    def seeds(self) -> SeedSet:
        return seed_set(self.selected)

    def gains_nonincreasing(self, tol: float = 1e-12) -> bool:
        return all(b <= a + tol for a, b in zip(self.gains, self.gains[1:]))

    def add(self, vertex: int, value: float, gain: float, millis: float) -> None:
        self.selected.append(vertex)
        self.values.append(value)
        self.gains.append(gain)
        self.millis.append(millis)

    def to_frame(self, record_timing: bool = True) -> pd.DataFrame:
        """Rows ``step, vertex, objective_value, marginal_gain, millis`` (steps from 1)."""
        millis = self.millis if record_timing else [0.0] * len(self.millis)
        return pd.DataFrame(
            {
                "step": range(1, len(self.selected) + 1),
                "vertex": self.selected,
                "objective_value": self.values,
                "marginal_gain": self.gains,
                "millis": millis,
            },
            columns=TRACE_COLUMNS,
        )


def _universe(universe: Iterable[int], k: int) -> list[int]:
    items = sorted({int(x) for x in universe})
    if not 0 <= k <= len(items):
        raise ValueError(f"k must lie in [0, {len(items)}], got {k}")
    return items


def _evaluate_all(
    obj: Objective,
    chosen: Sequence[int],
    candidates: Sequence[int],
    step: int,
    run: Optional[ManagedRun],
) -> list[float]:
    def one(x: int) -> float:
        return obj((*chosen, x), step)

    if run is None:
        return [one(x) for x in candidates]
    return run.map(one, candidates, label=f"{obj.label} step {step + 1}")


def greedy_maximize(
    obj: Objective,
    k: int,
    universe: Iterable[int],
    run: Optional[ManagedRun] = None,
) -> GreedyTrace:
    """Add the vertex with the largest marginal gain ``k`` times; ties go to the smallest id.

    Args:
        obj: Objective to maximize.
        k: Number of vertices to select.
        universe: Candidate vertices.
        run: Optional pool for the candidate evaluations of each step.
    """
    items = _universe(universe, k)
    trace = GreedyTrace(obj.label, obj((), 0), evaluations=1)
    chosen: list[int] = []
    current = trace.initial_value
    for step in range(k):
        started = time.perf_counter()
        candidates = [x for x in items if x not in chosen]
        values = _evaluate_all(obj, chosen, candidates, step, run)
        trace.evaluations += len(candidates)
        best = 0
        for i in range(1, len(candidates)):
            if values[i] - current > values[best] - current:
                best = i
        vertex, value = candidates[best], values[best]
        chosen.append(vertex)
        trace.add(vertex, value, value - current, (time.perf_counter() - started) * 1000.0)
        current = value
    logger.debug("[%s] greedy picked %s (%d evaluations)", obj.label, trace.selected, trace.evaluations)
    return trace


def lazy_greedy_maximize(obj: Objective, k: int, universe: Iterable[int]) -> GreedyTrace:
    """Greedy with stale marginal gains kept in a max-heap.

    For submodular objectives a stale gain bounds the fresh one, so only
    candidates reaching the top of the heap are re-evaluated. Selections,
    values and tie-breaking match :func:`greedy_maximize`.
    """
    items = _universe(universe, k)
    trace = GreedyTrace(obj.label, obj((), 0), evaluations=1)
    if k == 0:
        return trace
    current = trace.initial_value
    chosen: list[int] = []
    fresh: dict[int, float] = {}
    heap: list[tuple[float, int, int]] = []
    started = time.perf_counter()
    for x in items:
        value = obj((x,), 0)
        fresh[x] = value
        heap.append((-(value - current), x, 0))
    trace.evaluations += len(items)
    heapq.heapify(heap)
    for step in range(k):
        # every entry within the slack of the best fresh gain is refreshed, so
        # rounding noise in stale gains cannot change the pick
        ready: list[tuple[float, int]] = []
        while heap:
            neg_gain, x, stamp = heap[0]
            if ready and -neg_gain < ready[0][0] - LAZY_TIE_SLACK * max(1.0, abs(ready[0][0])):
                break
            heapq.heappop(heap)
            if stamp == step:
                ready.append((-neg_gain, x))
                ready.sort(key=lambda c: (-c[0], c[1]))
                continue
            value = obj((*chosen, x), step)
            trace.evaluations += 1
            fresh[x] = value
            heapq.heappush(heap, (-(value - current), x, step))
        _, x = ready[0]
        for gain, other in ready[1:]:
            heapq.heappush(heap, (-gain, other, step))
        value = fresh[x]
        chosen.append(x)
        trace.add(x, value, value - current, (time.perf_counter() - started) * 1000.0)
        current = value
        started = time.perf_counter()
    return trace


def exhaustive_maximize(
    obj: Objective,
    k: int,
    universe: Iterable[int],
    limit: int = EXHAUSTIVE_LIMIT,
) -> tuple[SeedSet, float]:
    """Best ``k``-subset by enumeration; the lexicographically first maximizer wins ties.

    Raises:
        SearchSpaceTooLargeError: If ``C(n, k)`` exceeds ``limit``.
    """
    items = _universe(universe, k)
    count = math.comb(len(items), k)
    if count > limit:
        raise SearchSpaceTooLargeError(count, limit)
    best_set: SeedSet = ()
    best_value = -math.inf
    for subset in itertools.combinations(items, k):
        value = obj(subset)
        if value > best_value:
            best_set, best_value = subset, value
    return best_set, best_value


def perturbed_greedy(
    obj: Objective,
    k: int,
    universe: Iterable[int],
    errors: Sequence[float],
) -> GreedyTrace:
    """Greedy that at step ``i`` takes the worst candidate within ``errors[i]`` of the best gain.

    Models a greedy whose choices are only ``ε_i``-optimal; the loss against
    ``(1 - 1/e)`` of the optimum is at most ``Σ ε_i`` for submodular objectives.
    """
    items = _universe(universe, k)
    if len(errors) < k:
        raise ValueError(f"need {k} step errors, got {len(errors)}")
    trace = GreedyTrace(f"{obj.label}+errors", obj(()), evaluations=1)
    chosen: list[int] = []
    current = trace.initial_value
    for step in range(k):
        candidates = [x for x in items if x not in chosen]
        values = [obj((*chosen, x)) for x in candidates]
        trace.evaluations += len(candidates)
        top = max(values)
        admissible = [i for i, v in enumerate(values) if v >= top - errors[step]]
        pick = min(admissible, key=lambda i: (values[i], candidates[i]))
        chosen.append(candidates[pick])
        trace.add(candidates[pick], values[pick], values[pick] - current, 0.0)
        current = values[pick]
    return trace
