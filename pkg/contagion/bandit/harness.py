"""Episode loop: an adversary and a player meet through the game environment."""
import logging
from typing import Callable, Optional

import numpy as np

from contagion.bandit.adversaries import Adversary
from contagion.bandit.env import InfluenceGameEnv
from contagion.bandit.game import EpisodeLog, GameConfig
from contagion.bandit.losses import RoundObservation, infected_from_feedback
from contagion.bandit.players import Player
from contagion.core.errors import ProtocolError
from contagion.core.rng import derive_seed, make_rng
from contagion.core.run_manager import ManagedRun

logger = logging.getLogger(__name__)


class RoundProbe:
    """The player's handle on one round: ``k`` picks, each answered with feedback."""

    def __init__(self, env: InfluenceGameEnv):
        self._env = env
        self._graph = env.config.graph
        self._k = env.config.k
        self._sources: list[int] = []
        self._infected = np.zeros(env.config.n, dtype=bool)
        self.complete = False

    @property
    def picks(self) -> int:
        return len(self._sources)

    def pick(self, vertex: int) -> RoundObservation:
        if len(self._sources) >= self._k:
            raise ProtocolError(f"player picked more than k={self._k} sources in round {self._env.round_index + 1}")
        observation, _, _, _, info = self._env.step(int(vertex))
        self._sources.append(int(vertex))
        infected = infected_from_feedback(
            self._graph, self._sources, observation["revealed"], observation["open"]
        )
        obs = RoundObservation(int(vertex), self._infected, infected)
        self._infected = infected
        self.complete = info["round_complete"]
        return obs


def play_episode(
    config: GameConfig,
    adversary: Adversary,
    player: Player,
    seed: int,
) -> EpisodeLog:
    """Play ``T`` rounds and record them.

    The adversary and the player draw from independent streams derived from
    ``seed``, so one adversary seed yields the same edge sets whoever plays.

    Raises:
        ProtocolError: If the player makes other than ``k`` picks in a round.
    """
    env = InfluenceGameEnv(config, adversary)
    env.reset(seed=derive_seed(seed, "adversary"))
    player.reset(config, make_rng(seed, "player"))
    log = EpisodeLog(config)
    for t in range(config.horizon):
        probe = RoundProbe(env)
        player.play_round(probe)
        if not probe.complete:
            raise ProtocolError(f"player picked {probe.picks} of k={config.k} sources in round {t + 1}")
        log.records.append(env.last_round)
    logger.debug("[%s vs %s] %d rounds, mean reward %.4f", player.label, adversary.label,
                 config.horizon, float(log.rewards.mean()))
    return log


def play_replications(
    config: GameConfig,
    adversary: Adversary,
    player_factory: Callable[[], Player],
    seed: int,
    replications: int,
    run: Optional[ManagedRun] = None,
) -> list[EpisodeLog]:
    """``replications`` episodes with seeds derived from ``seed``; a fresh player each time."""

    def one(r: int) -> EpisodeLog:
        return play_episode(config, adversary, player_factory(), derive_seed(seed, "episode", r))

    if run is None:
        return [one(r) for r in range(replications)]
    return run.map(one, range(replications), label=f"{adversary.label} episodes")
