"""Regret accounting over recorded episodes."""
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np
import pandas as pd

from contagion.bandit.adversaries import Adversary
from contagion.bandit.game import EpisodeLog
from contagion.bandit.players import Player
from contagion.core.rng import make_rng
from contagion.graph.digraph import SeedSet, WeightedDigraph, seed_set
from contagion.maximize import Objective, greedy_maximize

GREEDY_ALPHA = 1.0 - 1.0 / math.e
REPORT_KEYS = (
    "realized",
    "best_fixed",
    "regret",
    "pseudo_regret_mean",
    "pseudo_regret_stderr",
    "alpha",
    "scaled_regret",
)
CURVE_COLUMNS = [
    "t",
    "realized",
    "comparator",
    "pseudo_regret",
    "pseudo_regret_stderr",
    "scaled_pseudo_regret",
    "theoretical_bound",
]


def round_rewards(log: EpisodeLog, seeds: Sequence[int]) -> np.ndarray:
    """``f(A_t, S)`` for every recorded round."""
    seeds = list(seed_set(seeds))
    if not seeds:
        return np.zeros(len(log.records))
    reached = log.reach_tensor[:, seeds, :].any(axis=1)
    return reached.sum(axis=1) / log.config.n


def cumulative_reward(log: EpisodeLog, seeds: Sequence[int]) -> float:
    """``F*(S) = sum_t f(A_t, S)`` over the recorded sequence."""
    return float(round_rewards(log, seeds).sum())


def offline_objective(logs: Sequence[EpisodeLog]) -> Objective:
    """Mean of ``F*`` over ``logs``; monotone and submodular in ``S``."""
    return Objective(
        "offline_reward",
        lambda s, _: float(np.mean([cumulative_reward(log, s) for log in logs])),
    )


def policy_bound(policy: str, loss_kind: str, n: int, horizon: int) -> Optional[float]:
    """Pseudo-regret guarantee of a tuned single-source policy."""
    if policy == "exp3":
        if loss_kind == "symmetric":
            return math.sqrt(horizon * (n + 1) * math.log(n))
        return math.sqrt(2 * horizon * n * math.log(n))
    if policy == "osmd":
        if loss_kind == "symmetric":
            return 2 ** 0.25 * math.sqrt(horizon * n)
        return 2 ** 1.5 * math.sqrt(horizon * n)
    return None


def theoretical_bound(player: Player, n: int, horizon: int, k: int = 1) -> Optional[float]:
    """Regret guarantee for ``player``; online greedy gets ``k`` times its policy's (scaled regret)."""
    if player.spec is None:
        return None
    bound = policy_bound(player.spec.policy, player.spec.loss_kind, n, horizon)
    if bound is None:
        return None
    return k * bound if player.kind == "online_greedy" else bound


@dataclass
class RegretReport:
    """Realized, best-fixed and pseudo regret of one or more episodes.

    ``best_fixed`` and ``realized`` are means over episodes; the pseudo
    regret compares every episode against the single set ``best_set`` that
    is best on average.
    """

    realized: float
    best_fixed: float
    regret: float
    pseudo_regret_mean: float
    pseudo_regret_stderr: float
    alpha: float
    scaled_regret: float
    scaled_pseudo_regret: float
    oracle: str
    best_set: SeedSet
    replications: int
    horizon: int
    extra: dict[str, Any] = field(default_factory=dict)

    def to_json_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {key: float(getattr(self, key)) for key in REPORT_KEYS}
        data.update(
            scaled_pseudo_regret=float(self.scaled_pseudo_regret),
            oracle=self.oracle,
            best_set=list(self.best_set),
            replications=self.replications,
            horizon=self.horizon,
        )
        data.update(self.extra)
        return data


def _check_logs(logs: Sequence[EpisodeLog]) -> None:
    if not logs:
        raise ValueError("regret needs at least one episode log")
    first = logs[0].config
    for log in logs[1:]:
        c = log.config
        if c is not first and (c.n, c.k, c.horizon, c.directed) != (first.n, first.k, first.horizon, first.directed):
            raise ValueError("episode logs come from different games")


def _stderr(values: np.ndarray) -> float:
    if values.shape[0] < 2:
        return 0.0
    return float(values.std(ddof=1) / math.sqrt(values.shape[0]))


def regret_report(logs: Sequence[EpisodeLog], alpha: Optional[float] = None) -> RegretReport:
    """Regret of the recorded play against the best fixed source set.

    ``k = 1`` scans all singletons exactly. For ``k > 1`` the comparator is
    the greedy set on the recorded sequences (``oracle="greedy"``); ``alpha``
    then defaults to ``1 - 1/e``.
    """
    _check_logs(logs)
    config = logs[0].config
    k, n = config.k, config.n
    if alpha is None:
        alpha = 1.0 if k == 1 else GREEDY_ALPHA
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    realized = np.array([log.rewards.sum() for log in logs])
    if k == 1:
        totals = np.stack([log.singleton_rewards.sum(axis=0) for log in logs])
        best_per_log = totals.max(axis=1)
        best = int(np.argmax(totals.mean(axis=0)))
        best_set: SeedSet = (best,)
        comparator = totals[:, best]
        oracle = "exact"
    else:
        best_per_log = np.array(
            [greedy_maximize(offline_objective([log]), k, range(n)).final_value for log in logs]
        )
        best_set = greedy_maximize(offline_objective(logs), k, range(n)).seeds
        comparator = np.array([cumulative_reward(log, best_set) for log in logs])
        oracle = "greedy"
    best_fixed = float(best_per_log.mean())
    realized_mean = float(realized.mean())
    pseudo = comparator - realized
    return RegretReport(
        realized=realized_mean,
        best_fixed=best_fixed,
        regret=best_fixed - realized_mean,
        pseudo_regret_mean=float(pseudo.mean()),
        pseudo_regret_stderr=_stderr(pseudo),
        alpha=float(alpha),
        scaled_regret=alpha * best_fixed - realized_mean,
        scaled_pseudo_regret=float((alpha * comparator - realized).mean()),
        oracle=oracle,
        best_set=best_set,
        replications=len(logs),
        horizon=config.horizon,
    )


def regret_curve(
    logs: Sequence[EpisodeLog],
    report: RegretReport,
    player: Optional[Player] = None,
) -> pd.DataFrame:
    """Per-round cumulative realized reward, comparator reward and pseudo regret.

    ``theoretical_bound`` holds the guarantee for horizon ``t`` when
    ``player`` has one, else it is empty.
    """
    _check_logs(logs)
    config = logs[0].config
    realized = np.stack([np.cumsum(log.rewards) for log in logs])
    comparator = np.stack([np.cumsum(round_rewards(log, report.best_set)) for log in logs])
    diff = comparator - realized
    rounds = np.arange(1, config.horizon + 1)
    if diff.shape[0] > 1:
        stderr = diff.std(axis=0, ddof=1) / math.sqrt(diff.shape[0])
    else:
        stderr = np.zeros(config.horizon)
    bounds: list[Optional[float]] = [None] * config.horizon
    if player is not None:
        bounds = [theoretical_bound(player, config.n, int(t), config.k) for t in rounds]
    return pd.DataFrame(
        {
            "t": rounds,
            "realized": realized.mean(axis=0),
            "comparator": comparator.mean(axis=0),
            "pseudo_regret": diff.mean(axis=0),
            "pseudo_regret_stderr": stderr,
            "scaled_pseudo_regret": (report.alpha * comparator - realized).mean(axis=0),
            "theoretical_bound": pd.array(bounds, dtype="Float64"),
        },
        columns=CURVE_COLUMNS,
    )


def gap_estimate(
    adversary: Adversary,
    g: WeightedDigraph,
    i: int,
    j: int,
    rounds: int,
    seed: int,
    chunk: int = 100_000,
) -> tuple[float, float]:
    """Monte Carlo mean and standard error of ``X_i - X_j`` per round."""
    rng = make_rng(seed, "gap", adversary.label)
    total = 0.0
    squares = 0.0
    done = 0
    while done < rounds:
        size = min(chunk, rounds - done)
        x = adversary.singleton_rewards(g, adversary.sample(g, rng, size))
        d = x[:, i] - x[:, j]
        total += float(d.sum())
        squares += float((d * d).sum())
        done += size
    mean = total / rounds
    if rounds < 2:
        return mean, 0.0
    variance = max(squares - rounds * mean * mean, 0.0) / (rounds - 1)
    return mean, math.sqrt(variance / rounds)
