"""Adversarial online influence maximization with edge semi-bandit feedback."""
from contagion.bandit.adversaries import (
    Adversary,
    CliqueAdversary,
    FixedSequenceAdversary,
    IIDBernoulliAdversary,
    SourceSinkAdversary,
    clique_delta,
    clique_gap,
    empty_adversary,
    source_sink_delta,
    source_sink_gap,
)
from contagion.bandit.env import InfluenceGameEnv
from contagion.bandit.game import EpisodeLog, Feedback, GameConfig, RoundRecord, revealed_slots
from contagion.bandit.harness import RoundProbe, play_episode, play_replications
from contagion.bandit.losses import (
    RoundObservation,
    node_loss_estimate,
    symmetric_loss_definitional,
    symmetric_loss_estimate,
    true_losses,
)
from contagion.bandit.players import (
    Exp3Policy,
    OSMDPolicy,
    Player,
    PolicySpec,
    PolicyState,
    osmd_step,
    player_exp3,
    player_fixed,
    player_online_greedy,
    player_osmd,
    player_uniform_random,
    solve_normalizer,
)
from contagion.bandit.regret import (
    RegretReport,
    cumulative_reward,
    gap_estimate,
    offline_objective,
    regret_curve,
    regret_report,
    theoretical_bound,
)

__all__ = [
    "Adversary",
    "CliqueAdversary",
    "EpisodeLog",
    "Exp3Policy",
    "Feedback",
    "FixedSequenceAdversary",
    "GameConfig",
    "IIDBernoulliAdversary",
    "InfluenceGameEnv",
    "OSMDPolicy",
    "Player",
    "PolicySpec",
    "PolicyState",
    "RegretReport",
    "RoundObservation",
    "RoundProbe",
    "RoundRecord",
    "SourceSinkAdversary",
    "clique_delta",
    "clique_gap",
    "cumulative_reward",
    "empty_adversary",
    "gap_estimate",
    "node_loss_estimate",
    "offline_objective",
    "osmd_step",
    "play_episode",
    "play_replications",
    "player_exp3",
    "player_fixed",
    "player_online_greedy",
    "player_osmd",
    "player_uniform_random",
    "regret_curve",
    "regret_report",
    "revealed_slots",
    "solve_normalizer",
    "source_sink_delta",
    "source_sink_gap",
    "symmetric_loss_definitional",
    "symmetric_loss_estimate",
    "theoretical_bound",
    "true_losses",
]
