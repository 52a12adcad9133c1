"""Brute-force equivalence suites run by ``oracle-check``.

Each suite draws small random instances from its own stream, compares the
fast computation with an enumeration and records every mismatch. Instances
are validated as they are built, so a broken generator (or the ``perturb``
switch) surfaces as a validation error rather than a failed comparison.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from contagion import bounds
from contagion.bandit.adversaries import FixedSequenceAdversary
from contagion.bandit.game import GameConfig, revealed_slots
from contagion.bandit.harness import play_episode
from contagion.bandit.losses import (
    RoundObservation,
    infected_from_feedback,
    symmetric_loss_definitional,
    symmetric_loss_estimate,
    true_losses,
)
from contagion.bandit.players import player_fixed
from contagion.bandit.regret import offline_objective
from contagion.core.errors import InstanceTooLargeError
from contagion.core.rng import derive_seed, make_rng
from contagion.core.run_manager import ManagedRun
from contagion.graph.digraph import EdgeSet, WeightedDigraph
from contagion.graph.generators import chain_star, complete
from contagion.graph.models import ModelKind, TriggerModel, validate
from contagion.graph.reach import infected_fraction, reach_mask
from contagion.maximize import (
    exhaustive_maximize,
    greedy_maximize,
    lazy_greedy_maximize,
    lb_objective,
    lb_trig_objective,
    perturbed_greedy,
)
from contagion.simulate import (
    LiveEdgeSampler,
    exact_influence,
    run_cascade_process,
    run_threshold_process,
)

logger = logging.getLogger(__name__)

BOUND_TOLERANCE = 1e-10
RATIO_TOLERANCE = 1e-9
LOSS_TOLERANCE = 1e-12
PERTURBED_COLUMN_SUM = 1.5


@dataclass(frozen=True)
class OracleSettings:
    max_n: int = 6
    instances: int = 100
    perturb: bool = False
    process_runs: int = 100_000
    process_tolerance: float = 0.02


@dataclass
class SuiteResult:
    """Outcome of one suite: comparisons made, instances skipped as too large, mismatches."""

    name: str
    checked: int = 0
    skipped: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, message: Callable[[], str]) -> None:
        self.checked += 1
        if not ok:
            self.failures.append(message())

    def to_row(self) -> dict:
        return {
            "suite": self.name,
            "checked": self.checked,
            "skipped": self.skipped,
            "failed": len(self.failures),
            "passed": self.passed,
        }


def _close(a: float, b: float, tol: float = BOUND_TOLERANCE) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _leq(a: float, b: float, tol: float = BOUND_TOLERANCE) -> bool:
    return a <= b + tol * max(1.0, abs(a), abs(b))


def random_digraph(rng: np.random.Generator, n: int, density: float, dag: bool = False) -> list[tuple[int, int]]:
    """Ordered pairs kept independently with probability ``density``; ``u < v`` only when ``dag``."""
    return [
        (u, v)
        for u, v in itertools.permutations(range(n), 2)
        if (not dag or u < v) and rng.random() < density
    ]


def random_lt_model(
    rng: np.random.Generator,
    n: int,
    density: float = 0.5,
    dag: bool = False,
    max_column_sum: float = 1.0,
) -> TriggerModel:
    """LT model whose in-weights at each vertex sum to a uniform draw from ``[0, max_column_sum]``."""
    pairs = random_digraph(rng, n, density, dag)
    weights: dict[tuple[int, int], float] = {}
    for v in range(n):
        incoming = [u for u, w in pairs if w == v]
        if not incoming:
            continue
        raw = rng.random(len(incoming)) + 1e-3
        total = rng.uniform(0.0, max_column_sum)
        for u, share in zip(incoming, raw / raw.sum()):
            weights[(u, v)] = min(float(share * total), 1.0)
    g = WeightedDigraph.from_edges(n, [(u, v, weights[(u, v)]) for u, v in pairs])
    return TriggerModel(g, ModelKind.LINEAR_THRESHOLD)


def random_ic_model(rng: np.random.Generator, n: int, density: float = 0.5) -> TriggerModel:
    pairs = random_digraph(rng, n, density)
    g = WeightedDigraph.from_edges(n, [(u, v, float(rng.random())) for u, v in pairs])
    return TriggerModel(g, ModelKind.INDEPENDENT_CASCADE)


def perturb_columns(model: TriggerModel) -> TriggerModel:
    """Raise the in-weights of the vertex with most in-edges to sum past 1.

    A single in-edge ends up above 1, which the graph itself rejects.
    """
    g = model.graph
    if g.m == 0:
        return model
    target = int(np.argmax(g.in_degree))
    column = g.dst == target
    weight = g.weight.copy()
    weight[column] = PERTURBED_COLUMN_SUM / column.sum()
    return TriggerModel(g.with_weights(weight), model.kind)


def _random_seeds(rng: np.random.Generator, n: int) -> tuple[int, ...]:
    size = int(rng.integers(1, n)) if n > 1 else 1
    return tuple(sorted(int(v) for v in rng.choice(n, size=size, replace=False)))


def _instance(settings: OracleSettings, model: TriggerModel) -> TriggerModel:
    if settings.perturb:
        model = perturb_columns(model)
    validate(model)
    return model


def suite_sandwich(rng: np.random.Generator, settings: OracleSettings) -> SuiteResult:
    """``lb1 <= lb2 <= lb3 <= exact <= ub_trunc <= ub_neumann``, ``lb_trig <= exact``, path sum ``= exact``."""
    result = SuiteResult("sandwich")
    for index in range(settings.instances):
        n = int(rng.integers(2, settings.max_n + 1))
        model = _instance(settings, random_lt_model(rng, n, float(rng.uniform(0.2, 0.8))))
        seeds = _random_seeds(rng, n)
        try:
            exact = exact_influence(model, seeds)
        except InstanceTooLargeError:
            result.skipped += 1
            continue
        chain = [bounds.lb_m(model, seeds, m) for m in (1, 2, 3)] + [exact, bounds.ub_truncated(model, seeds)]
        neumann = bounds.ub_neumann(model, seeds)
        if neumann is not None:
            chain.append(neumann)
        result.check(
            all(_leq(a, b) for a, b in zip(chain, chain[1:])),
            lambda: f"instance {index}: bound chain out of order {chain}",
        )
        trig = bounds.lb_trig(model, seeds)
        result.check(_leq(trig, exact), lambda: f"instance {index}: lb_trig {trig} > exact {exact}")
        paths = bounds.path_sum_influence(model, seeds)
        result.check(_close(paths, exact), lambda: f"instance {index}: path sum {paths} != exact {exact}")
    return result


def suite_dag(rng: np.random.Generator, settings: OracleSettings) -> SuiteResult:
    """The truncated upper bound is the influence on acyclic graphs."""
    result = SuiteResult("dag_exactness")
    for index in range(settings.instances):
        n = int(rng.integers(2, settings.max_n + 1))
        model = _instance(settings, random_lt_model(rng, n, float(rng.uniform(0.2, 0.9)), dag=True))
        seeds = _random_seeds(rng, n)
        try:
            exact = exact_influence(model, seeds)
        except InstanceTooLargeError:
            result.skipped += 1
            continue
        upper = bounds.ub_truncated(model, seeds)
        result.check(_close(upper, exact), lambda: f"instance {index}: ub_trunc {upper} != exact {exact}")
    return result


def suite_chain_star(rng: np.random.Generator, settings: OracleSettings) -> SuiteResult:
    """``lb1 = 1.5`` and ``I({0}) = (n + 4) / 4`` on the chain-star graph."""
    result = SuiteResult("chain_star")
    for n in range(3, max(settings.max_n, 10) + 1):
        model = _instance(settings, TriggerModel(chain_star(n), ModelKind.LINEAR_THRESHOLD))
        exact = exact_influence(model, [0])
        lb1 = bounds.lb_m(model, [0], 1)
        result.check(_close(lb1, 1.5), lambda: f"n={n}: lb1 {lb1} != 1.5")
        result.check(_close(exact, (n + 4) / 4), lambda: f"n={n}: exact {exact} != {(n + 4) / 4}")
    return result


def suite_ratio(rng: np.random.Generator, settings: OracleSettings) -> SuiteResult:
    """``ub_neumann / lb1 <= 1/(1-λ)`` and ``ub_neumann / lb2 <= 1/(1-λ²)`` whenever ``λ < 1``."""
    result = SuiteResult("ratio")
    for index in range(settings.instances):
        n = int(rng.integers(2, settings.max_n + 1))
        model = _instance(settings, random_lt_model(rng, n, float(rng.uniform(0.2, 0.8)), max_column_sum=0.6))
        seeds = _random_seeds(rng, n)
        ratio = bounds.ratio_guarantees(model, seeds)
        upper = bounds.ub_neumann(model, seeds)
        if ratio.r1 is None or upper is None:
            result.skipped += 1
            continue
        lb1, lb2 = bounds.lb_m(model, seeds, 1), bounds.lb_m(model, seeds, 2)
        result.check(
            upper / lb1 <= ratio.r1 + RATIO_TOLERANCE,
            lambda: f"instance {index}: UB/LB1 {upper / lb1} > {ratio.r1} (λ={ratio.lambda_bar_inf})",
        )
        result.check(
            upper / lb2 <= ratio.r2 + RATIO_TOLERANCE,
            lambda: f"instance {index}: UB/LB2 {upper / lb2} > {ratio.r2} (λ={ratio.lambda_bar_inf})",
        )
    return result


def _check_submodular(result: SuiteResult, label: str, n: int, f: Callable[[tuple[int, ...]], float]) -> None:
    """Monotonicity and diminishing returns over every pair ``S ⊆ T`` and ``x ∉ T``."""
    values = [f(tuple(v for v in range(n) if mask >> v & 1)) for mask in range(1 << n)]
    full = (1 << n) - 1
    for big in range(1 << n):
        small = big
        while True:
            for x in range(n):
                bit = 1 << x
                if big & bit:
                    continue
                gain_small = values[small | bit] - values[small]
                gain_big = values[big | bit] - values[big]
                result.check(
                    _leq(gain_big, gain_small) and _leq(0.0, gain_big),
                    lambda: f"{label}: gains {gain_small} (S={small:b}) vs {gain_big} (T={big:b}) adding {x}",
                )
            if small == 0:
                break
            small = (small - 1) & big
        if big == full:
            break


def suite_submodularity(rng: np.random.Generator, settings: OracleSettings) -> SuiteResult:
    """Exhaustive discrete-derivative checks for the lower bounds, ``f_t`` and ``F*``."""
    result = SuiteResult("submodularity")
    rounds = max(1, settings.instances // 10)
    for index in range(rounds):
        n = int(rng.integers(2, settings.max_n + 1))
        model = _instance(settings, random_lt_model(rng, n, float(rng.uniform(0.2, 0.8))))
        for obj in (lb_objective(model, 1), lb_objective(model, 2), lb_objective(model, 3), lb_trig_objective(model)):
            _check_submodular(result, f"instance {index} {obj.label}", n, obj)

        g = complete(n, directed=bool(rng.integers(2)))
        open_edges = EdgeSet(rng.random(g.num_slots) < 0.4)
        _check_submodular(
            result, f"instance {index} f_t", n, lambda s: infected_fraction(g, open_edges, s)
        )

        undirected = complete(n, directed=False)
        horizon = 4
        sequence = [EdgeSet(rng.random(undirected.num_slots) < 0.4) for _ in range(horizon)]
        log = play_episode(
            GameConfig(undirected, horizon),
            FixedSequenceAdversary(sequence),
            player_fixed(0),
            derive_seed(0, "oracle", index),
        )
        _check_submodular(result, f"instance {index} F*", n, offline_objective([log]))
    return result


def suite_greedy(rng: np.random.Generator, settings: OracleSettings) -> SuiteResult:
    """Greedy reaches ``1 - 1/e`` of the optimum; lazy and eager greedy agree; step errors add up."""
    result = SuiteResult("greedy")
    factor = 1.0 - 1.0 / math.e
    for index in range(settings.instances):
        n = int(rng.integers(2, settings.max_n + 1))
        k = int(rng.integers(1, min(3, n) + 1))
        model = _instance(settings, random_lt_model(rng, n, float(rng.uniform(0.2, 0.8))))
        for m in (1, 2):
            obj = lb_objective(model, m)
            eager = greedy_maximize(obj, k, range(n))
            lazy = lazy_greedy_maximize(obj, k, range(n))
            _, best = exhaustive_maximize(obj, k, range(n))
            result.check(
                eager.final_value >= factor * best - RATIO_TOLERANCE,
                lambda: f"instance {index} lb{m}: greedy {eager.final_value} < (1-1/e) * {best}",
            )
            result.check(
                eager.selected == lazy.selected and all(_close(a, b) for a, b in zip(eager.values, lazy.values)),
                lambda: f"instance {index} lb{m}: lazy {lazy.selected} != eager {eager.selected}",
            )
            errors = rng.uniform(0.0, 0.2, size=k)
            rough = perturbed_greedy(obj, k, range(n), errors)
            result.check(
                rough.final_value >= factor * best - float(errors.sum()) - RATIO_TOLERANCE,
                lambda: f"instance {index} lb{m}: perturbed greedy {rough.final_value} below guarantee",
            )
    return result


def _component_prior(g: WeightedDigraph, live: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """An infected set closed under reach, possibly empty."""
    starters = [v for v in range(g.n) if rng.random() < 0.25]
    return reach_mask(g, live, starters)


def suite_losses(rng: np.random.Generator, settings: OracleSettings) -> SuiteResult:
    """Symmetric loss: feedback sufficiency, unbiasedness and the second-moment bound by enumeration."""
    result = SuiteResult("symmetric_loss")
    draws = max(1, settings.instances // 2)
    for n in range(3, min(5, settings.max_n) + 1):
        g = complete(n, directed=False)
        for draw in range(draws):
            open_edges = EdgeSet(rng.random(g.num_slots) < rng.uniform(0.1, 0.7))
            live = open_edges.edge_mask(g)
            prior = _component_prior(g, live, rng) if draw % 2 else np.zeros(n, dtype=bool)
            p = rng.dirichlet(np.ones(n))
            truth = true_losses(g, open_edges, prior)
            prior_sources = np.flatnonzero(prior).tolist()
            estimates = []
            for s in range(n):
                infected = reach_mask(g, live, prior_sources + [s])
                revealed = revealed_slots(g, infected)
                seen = infected_from_feedback(g, prior_sources + [s], revealed, open_edges.mask & revealed)
                estimate = symmetric_loss_estimate(RoundObservation(s, prior, seen), p)
                hidden = symmetric_loss_definitional(g, open_edges, prior, p, s)
                result.check(
                    np.allclose(estimate, hidden, rtol=LOSS_TOLERANCE, atol=LOSS_TOLERANCE),
                    lambda: f"n={n} draw {draw} source {s}: feedback estimate {estimate} != {hidden}",
                )
                result.check(
                    abs(float(p @ estimate) - truth[s]) <= LOSS_TOLERANCE,
                    lambda: f"n={n} draw {draw} source {s}: E_I[l_I] {p @ estimate} != l_s {truth[s]}",
                )
                estimates.append(estimate)
            table = np.stack(estimates)
            mean = p @ table
            result.check(
                np.allclose(mean, truth, rtol=0.0, atol=LOSS_TOLERANCE),
                lambda: f"n={n} draw {draw}: E[l_hat] {mean} != {truth}",
            )
            if not prior.any():
                second = float(p @ (table**2 @ p))
                result.check(
                    second <= (n + 1) / 2 + LOSS_TOLERANCE,
                    lambda: f"n={n} draw {draw}: second moment {second} > {(n + 1) / 2}",
                )
            a = rng.uniform(0.01, 1.0, size=n)
            double_sum = float((a[:, None] / (a[:, None] + a[None, :])).sum())
            result.check(
                _close(double_sum, n * n / 2, LOSS_TOLERANCE),
                lambda: f"n={n} draw {draw}: double sum {double_sum} != {n * n / 2}",
            )
    return result


def _outcome_frequencies(samples: list[np.ndarray]) -> dict[bytes, float]:
    counts: dict[bytes, float] = {}
    for mask in samples:
        key = np.packbits(mask).tobytes()
        counts[key] = counts.get(key, 0.0) + 1.0
    return {key: value / len(samples) for key, value in counts.items()}


def _total_variation(a: dict[bytes, float], b: dict[bytes, float]) -> float:
    return 0.5 * sum(abs(a.get(key, 0.0) - b.get(key, 0.0)) for key in set(a) | set(b))


def suite_processes(rng: np.random.Generator, settings: OracleSettings) -> SuiteResult:
    """Threshold and cascade dynamics give the same final-set law as live-edge sampling."""
    result = SuiteResult("process_equivalence")
    n = min(4, settings.max_n)
    runs = settings.process_runs
    models = [
        _instance(settings, random_lt_model(rng, n, 0.7)),
        random_ic_model(rng, n, 0.7),
    ]
    validate(models[1])
    for model in models:
        sampler = LiveEdgeSampler(model)
        process = run_threshold_process if model.kind is ModelKind.LINEAR_THRESHOLD else run_cascade_process
        live = [reach_mask(model.graph, sampler.sample_mask(rng), [0]) for _ in range(runs)]
        dynamic = [process(model, [0], rng) for _ in range(runs)]
        distance = _total_variation(_outcome_frequencies(live), _outcome_frequencies(dynamic))
        result.check(
            distance < settings.process_tolerance,
            lambda: f"{model.kind.value}: total variation {distance:.4f} >= {settings.process_tolerance}",
        )
    return result


SUITES: dict[str, Callable[[np.random.Generator, OracleSettings], SuiteResult]] = {
    "sandwich": suite_sandwich,
    "dag_exactness": suite_dag,
    "chain_star": suite_chain_star,
    "ratio": suite_ratio,
    "submodularity": suite_submodularity,
    "greedy": suite_greedy,
    "symmetric_loss": suite_losses,
    "process_equivalence": suite_processes,
}


def run_suites(
    settings: OracleSettings,
    seed: int,
    names: Optional[list[str]] = None,
    run: Optional[ManagedRun] = None,
) -> list[SuiteResult]:
    """Run the named suites (all by default), each on its own stream derived from ``seed``."""
    chosen = list(SUITES) if names is None else names

    def one(name: str) -> SuiteResult:
        outcome = SUITES[name](make_rng(seed, "oracle", name), settings)
        logger.debug("[%s] %d checks, %d skipped, %d failed", name, outcome.checked, outcome.skipped,
                     len(outcome.failures))
        return outcome

    if run is None:
        return [one(name) for name in chosen]
    return run.map(one, chosen, label="oracle suites")
