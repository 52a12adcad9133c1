"""Players of the online influence game.

Single-source policies (Exp3, OSMD) keep a distribution over vertices and
learn from one pick's feedback. Players drive one or more policies through
a round of the game.
"""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Optional

import numpy as np
from scipy import optimize, special

from contagion.bandit.game import GameConfig
from contagion.bandit.losses import RoundObservation, loss_estimate
from contagion.core.errors import ConfigError, NormalizationError

if TYPE_CHECKING:
    from contagion.bandit.harness import RoundProbe

logger = logging.getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-12
NORMALIZATION_MAX_ITER = 200
LOSS_KINDS = ("node", "symmetric")


def default_eta(policy: str, loss_kind: str, n: int, horizon: int) -> float:
    """Learning rate tuned for a known horizon."""
    log_n = math.log(max(n, 2))
    if policy == "exp3":
        if loss_kind == "symmetric":
            return math.sqrt(4 * log_n / (horizon * (n + 1)))
        return math.sqrt(2 * log_n / (n * horizon))
    if policy == "osmd":
        if loss_kind == "symmetric":
            return 2 ** 0.75 / math.sqrt(horizon)
        return math.sqrt(2 / horizon)
    raise ValueError(f"unknown policy {policy!r}")


@dataclass
class PolicyState:
    """Distribution ``p``, cumulative loss estimates and step count of a single-source policy."""

    label: str
    p: np.ndarray
    cumulative_loss: np.ndarray
    eta: float
    t: int = 0

    def is_valid(self, tol: float = NORMALIZATION_TOLERANCE) -> bool:
        return bool(
            np.all(self.p > 0)
            and abs(self.p.sum() - 1.0) <= tol
            and np.all(np.isfinite(self.cumulative_loss))
        )


class SingleSourcePolicy(ABC):
    """Draws one vertex per round and learns from the estimated losses."""

    name = "policy"

    def __init__(self, n: int, loss_kind: str, eta: float):
        if loss_kind not in LOSS_KINDS:
            raise ConfigError(f"unknown loss kind {loss_kind!r}")
        if not eta > 0:
            raise ConfigError(f"learning rate must be positive, got {eta}")
        self.loss_kind = loss_kind
        self.state = PolicyState(
            f"{self.name}-{loss_kind}", np.full(n, 1.0 / n), np.zeros(n), float(eta)
        )

    @property
    def p(self) -> np.ndarray:
        return self.state.p

    def next(self, rng: np.random.Generator) -> int:
        return int(rng.choice(self.p.shape[0], p=self.p))

    def update(self, obs: RoundObservation) -> np.ndarray:
        """Charge the estimated losses of ``obs``; returns the estimate."""
        estimate = loss_estimate(self.loss_kind, obs, self.p)
        self.state.cumulative_loss += estimate
        self.state.p = self._step(estimate)
        self.state.t += 1
        return estimate

    @abstractmethod
    def _step(self, estimate: np.ndarray) -> np.ndarray:
        """Next distribution."""


class Exp3Policy(SingleSourcePolicy):
    """Exponential weights on cumulative loss estimates, computed in log space."""

    name = "exp3"

    def _step(self, estimate: np.ndarray) -> np.ndarray:
        return special.softmax(-self.state.eta * self.state.cumulative_loss)


def solve_normalizer(
    x: np.ndarray,
    tol: float = NORMALIZATION_TOLERANCE,
    max_iter: int = NORMALIZATION_MAX_ITER,
) -> float:
    """``lambda`` with ``sum((x + lambda) ** -2) == 1`` for ``x >= 1``.

    The sum is decreasing and convex in ``lambda``; the root lies in
    ``[1 - min(x), 0]``. Newton runs from the left end, where it converges
    monotonically; Brent's method on the bracket is the fallback.

    Raises:
        NormalizationError: If neither solve meets ``tol``.
    """

    def residual(lam: float) -> float:
        return float(np.sum((x + lam) ** -2.0) - 1.0)

    def slope(lam: float) -> float:
        return float(-2.0 * np.sum((x + lam) ** -3.0))

    if abs(residual(0.0)) <= tol:
        return 0.0
    low = 1.0 - float(x.min())
    candidates = []
    try:
        result = optimize.root_scalar(
            residual, fprime=slope, x0=low, method="newton", xtol=1e-15, maxiter=max_iter
        )
        if result.converged and low <= result.root <= 0.0:
            candidates.append(result.root)
    except (RuntimeError, ZeroDivisionError, OverflowError):
        pass
    if not candidates or abs(residual(candidates[0])) > tol:
        logger.debug("Newton normalization missed tolerance; bracketing on [%g, 0]", low)
        if residual(low) * residual(0.0) <= 0.0:
            candidates.insert(0, optimize.brentq(residual, low, 0.0, xtol=1e-15, maxiter=max_iter))
    if not candidates:
        raise NormalizationError(abs(residual(0.0)))
    best = min(candidates, key=lambda lam: abs(residual(lam)))
    if abs(residual(best)) > tol:
        raise NormalizationError(abs(residual(best)))
    return float(best)


def osmd_step(p: np.ndarray, scaled_loss: np.ndarray) -> np.ndarray:
    """``p_i <- (p_i ** -1/2 + eta * l_i + lambda) ** -2`` projected onto the simplex."""
    x = p ** -0.5 + scaled_loss
    lam = solve_normalizer(x)
    updated = (x + lam) ** -2.0
    return updated / updated.sum()


class OSMDPolicy(SingleSourcePolicy):
    """Mirror descent with the potential ``F(x) = -2 * sum(sqrt(x_i))``."""

    name = "osmd"

    def _step(self, estimate: np.ndarray) -> np.ndarray:
        return osmd_step(self.state.p, self.state.eta * estimate)


POLICY_CLASSES = {"exp3": Exp3Policy, "osmd": OSMDPolicy}


@dataclass(frozen=True)
class PolicySpec:
    """Builds a fresh single-source policy for a game; ``eta=None`` selects the tuned default."""

    policy: str
    loss_kind: str
    eta: Optional[float] = None

    def __post_init__(self) -> None:
        if self.policy not in POLICY_CLASSES:
            raise ConfigError(f"unknown single-source policy {self.policy!r}")
        if self.loss_kind not in LOSS_KINDS:
            raise ConfigError(f"unknown loss kind {self.loss_kind!r}")

    @property
    def label(self) -> str:
        return f"{self.policy}-{self.loss_kind}"

    def __call__(self, config: GameConfig) -> SingleSourcePolicy:
        if self.loss_kind == "symmetric" and config.directed:
            raise ConfigError("the symmetric loss needs an undirected game")
        eta = self.eta
        if eta is None:
            eta = default_eta(self.policy, self.loss_kind, config.n, config.horizon)
        return POLICY_CLASSES[self.policy](config.n, self.loss_kind, eta)


class Player(ABC):
    """Plays one round at a time through a :class:`RoundProbe`.

    ``kind`` names the strategy family; ``spec`` is the single-source policy
    behind policy-driven players.
    """

    label = "player"
    kind = "player"
    spec: Optional[PolicySpec] = None

    def reset(self, config: GameConfig, rng: np.random.Generator) -> None:
        self.config = config
        self.rng = rng

    @abstractmethod
    def play_round(self, probe: "RoundProbe") -> None:
        """Make exactly ``k`` picks."""


class PolicyPlayer(Player):
    """``k`` independent single-source policies, the ``i``-th fed marginal feedback.

    With ``k = 1`` this is the policy itself.
    """

    def __init__(self, spec: PolicySpec, online_greedy: bool = False, k: Optional[int] = None):
        self.spec = spec
        self.online_greedy = online_greedy
        self.k = k
        self.kind = "online_greedy" if online_greedy else spec.policy
        self.label = f"online_greedy({spec.label})" if online_greedy else spec.label
        self.policies: list[SingleSourcePolicy] = []

    def reset(self, config: GameConfig, rng: np.random.Generator) -> None:
        if not self.online_greedy and config.k != 1:
            raise ConfigError(f"{self.label} plays a single source; use online_greedy for k={config.k}")
        if self.k is not None and self.k != config.k:
            raise ConfigError(f"{self.label} was built for k={self.k}, game has k={config.k}")
        super().reset(config, rng)
        self.policies = [self.spec(config) for _ in range(config.k)]

    def play_round(self, probe: "RoundProbe") -> None:
        for policy in self.policies:
            obs = probe.pick(policy.next(self.rng))
            policy.update(obs)


class FixedPlayer(Player):
    """Plays the same sources every round."""

    label = "fixed"
    kind = "fixed"

    def __init__(self, vertices: Iterable[int] | int):
        self.vertices = [int(vertices)] if isinstance(vertices, (int, np.integer)) else [int(v) for v in vertices]

    def play_round(self, probe: "RoundProbe") -> None:
        for v in self.vertices:
            probe.pick(v)


class UniformPlayer(Player):
    """``k`` distinct vertices uniformly at random every round."""

    label = "uniform"
    kind = "uniform"

    def play_round(self, probe: "RoundProbe") -> None:
        for v in self.rng.choice(self.config.n, size=self.config.k, replace=False):
            probe.pick(int(v))


def player_exp3(loss_kind: str = "symmetric", eta: Optional[float] = None) -> Player:
    return PolicyPlayer(PolicySpec("exp3", loss_kind, eta))


def player_osmd(loss_kind: str = "symmetric", eta: Optional[float] = None) -> Player:
    return PolicyPlayer(PolicySpec("osmd", loss_kind, eta))


def player_online_greedy(spec: PolicySpec, k: Optional[int] = None) -> Player:
    """Online greedy over ``k`` copies of ``spec`` (``k`` defaults to the game's)."""
    return PolicyPlayer(spec, online_greedy=True, k=k)


def player_fixed(vertices: Iterable[int] | int) -> Player:
    return FixedPlayer(vertices)


def player_uniform_random() -> Player:
    return UniformPlayer()
