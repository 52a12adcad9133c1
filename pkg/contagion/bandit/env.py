"""The online influence game as a gymnasium environment.

One environment step is one source pick. A round completes after ``k``
picks; the episode terminates after ``T`` rounds. The adversary commits to
its whole edge-set sequence in :meth:`InfluenceGameEnv.reset`, drawing only
from the configuration and the environment's own generator.
"""
from typing import TYPE_CHECKING, Any, Optional

import gymnasium as gym
import numpy as np
from gymnasium import spaces

from contagion.bandit.game import Feedback, GameConfig, RoundRecord, revealed_slots
from contagion.graph.digraph import EdgeSet
from contagion.graph.reach import reach_mask

if TYPE_CHECKING:
    from contagion.bandit.adversaries import Adversary


class InfluenceGameEnv(gym.Env):
    """Edge semi-bandit influence game.

    Observation: ``revealed`` and ``open`` masks over edge slots; ``open`` is
    zero wherever ``revealed`` is. Action: a vertex. Reward: the fraction of
    vertices newly infected by the pick.
    """

    metadata = {"render_modes": []}

    def __init__(self, config: GameConfig, adversary: "Adversary"):
        super().__init__()
        self.config = config
        self.adversary = adversary
        slots = config.graph.num_slots
        self.observation_space = spaces.Dict(
            {"revealed": spaces.MultiBinary(slots), "open": spaces.MultiBinary(slots)}
        )
        self.action_space = spaces.Discrete(config.n)
        self._edge_sets: list[EdgeSet] = []
        self._t = 0
        self._picks: list[int] = []
        self._infected = np.zeros(config.n, dtype=bool)
        self._live = np.zeros(config.graph.m, dtype=bool)
        self.last_round: Optional[RoundRecord] = None

    @property
    def round_index(self) -> int:
        """Zero-based index of the round in progress."""
        return self._t

    @property
    def current_edge_set(self) -> EdgeSet:
        """The hidden open set of the round in progress (harness use only)."""
        return self._edge_sets[self._t]

    def _observation(self) -> dict[str, np.ndarray]:
        revealed = revealed_slots(self.config.graph, self._infected)
        status = self._edge_sets[self._t].mask & revealed
        return {"revealed": revealed.astype(np.int8), "open": status.astype(np.int8)}

    def _start_round(self) -> None:
        self._picks = []
        self._infected = np.zeros(self.config.n, dtype=bool)
        if self._t < self.config.horizon:
            self._live = self._edge_sets[self._t].edge_mask(self.config.graph)

    def reset(
        self, *, seed: Optional[int] = None, options: Optional[dict[str, Any]] = None
    ) -> tuple[dict[str, np.ndarray], dict[str, Any]]:
        super().reset(seed=seed)
        self._edge_sets = self.adversary.edge_sets(self.config, self.np_random)
        self._t = 0
        self.last_round = None
        self._start_round()
        return self._observation(), {"round": 0, "picks": 0}

    def step(self, action: int) -> tuple[dict[str, np.ndarray], float, bool, bool, dict[str, Any]]:
        if self._t >= self.config.horizon:
            raise RuntimeError("episode is over; call reset()")
        v = int(action)
        if not self.action_space.contains(v):
            raise ValueError(f"vertex {v} out of range for n={self.config.n}")
        g = self.config.graph
        self._picks.append(v)
        before = int(self._infected.sum())
        self._infected = reach_mask(g, self._live, self._picks)
        reward = (int(self._infected.sum()) - before) / g.n
        observation = self._observation()
        info = {"round": self._t, "picks": len(self._picks), "round_complete": False}
        if len(self._picks) == self.config.k:
            edge_set = self._edge_sets[self._t]
            self.last_round = RoundRecord(
                t=self._t + 1,
                edge_set=edge_set,
                sources=tuple(self._picks),
                reward=float(self._infected.sum()) / g.n,
                feedback=Feedback.of_round(g, edge_set, self._infected),
            )
            info["round_complete"] = True
            self._t += 1
            self._start_round()
        terminated = self._t >= self.config.horizon
        return observation, reward, terminated, False, info
