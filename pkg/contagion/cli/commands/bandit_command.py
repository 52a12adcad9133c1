"""Regret experiment: replicated episodes of one player against one adversary."""
import argparse
import math
import os
from typing import Any, Optional

import numpy as np

from contagion.bandit.adversaries import (
    Adversary,
    CliqueAdversary,
    SourceSinkAdversary,
    clique_gap,
    source_sink_gap,
)
from contagion.bandit.game import EpisodeLog
from contagion.bandit.harness import play_replications
from contagion.bandit.regret import regret_curve, regret_report, theoretical_bound
from contagion.cli.commands.base_command import BaseCommand
from contagion.cli.instances import build_adversary, build_game, build_player

REPORT_FILE = "regret_report.json"
EPISODE_DIR = "episodes"


def gap_summary(adversary: Adversary, logs: list[EpisodeLog]) -> dict[str, Optional[float]]:
    """Closed-form and measured per-round reward gap of the distinguished vertex over its successor."""
    if not isinstance(adversary, (CliqueAdversary, SourceSinkAdversary)) or adversary.distinguished is None:
        return {}
    i = adversary.distinguished
    j = (i + 1) % adversary.n
    if isinstance(adversary, CliqueAdversary):
        closed = clique_gap(adversary.n, adversary.c, adversary.delta)
    else:
        closed = source_sink_gap(adversary.n, adversary.c, adversary.d, adversary.delta)
    diffs = np.concatenate([log.singleton_rewards[:, i] - log.singleton_rewards[:, j] for log in logs])
    stderr = float(diffs.std(ddof=1) / math.sqrt(diffs.size)) if diffs.size > 1 else 0.0
    return {
        "delta": float(adversary.delta),
        "gap_closed_form": float(closed),
        "gap_measured": float(diffs.mean()),
        "gap_stderr": stderr,
    }


class BanditCommand(BaseCommand):
    """Plays the configured game and reports regret against the best fixed source set."""

    COMMAND_NAME = "bandit"
    LOG_NAME = "Bandit"
    HELP = "regret of an online player against an oblivious adversary"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--replications", type=int, help="episodes overriding bandit.replications")
        parser.add_argument("--write-logs", action="store_true", help="write one episode log per replication")

    def run(self, args: argparse.Namespace) -> int:
        game = build_game(self.config)
        adversary = build_adversary(self.config)
        adversary.check(game)
        player = build_player(self.config)
        replications = args.replications or self.config.get("bandit.replications")
        self.log(
            "Started: %s vs %s, n=%d, k=%d, T=%d, %d replication(s)",
            player.label, adversary.label, game.n, game.k, game.horizon, replications,
        )

        logs = play_replications(
            game,
            adversary,
            lambda: build_player(self.config),
            self.seed,
            replications,
            self.create_run("episodes"),
        )
        report = regret_report(logs, self.config.get("bandit.alpha"))
        extra: dict[str, Any] = {
            "player": player.label,
            "adversary": adversary.label,
            "n": game.n,
            "k": game.k,
            "theoretical_bound": theoretical_bound(player, game.n, game.horizon, game.k),
        }
        extra.update(gap_summary(adversary, logs))
        report.extra.update(extra)

        self.write_json(report.to_json_dict(), REPORT_FILE)
        self.write_table(regret_curve(logs, report, player), "regret_curve")
        if args.write_logs or self.config.get("bandit.write_logs"):
            for r, log in enumerate(logs):
                log.write(os.path.join(self.out_dir, EPISODE_DIR, f"episode_{r:04d}.tsv"))
            self.log("Wrote %d episode log(s) to %s", len(logs), os.path.join(self.out_dir, EPISODE_DIR))
        self.log_success(
            "Finished: pseudo-regret %.3f ± %.3f, best fixed %s",
            report.pseudo_regret_mean, report.pseudo_regret_stderr, list(report.best_set),
        )
        return 0
