"""Seed selection study: greedy per objective, simulated influence of each pick, runtime table."""
import argparse
import time
from dataclasses import dataclass

import pandas as pd

from contagion.cli.commands.base_command import BaseCommand
from contagion.cli.instances import build_graph, build_model, graph_from_file
from contagion.core.errors import ConfigError
from contagion.core.rng import derive_seed, make_rng
from contagion.maximize import greedy_maximize, lazy_greedy_maximize, make_objective
from contagion.simulate import estimate_influence

RANDOM_BASELINE = "random"
RUNTIME_REFERENCE = "lb1"
RUNTIME_COLUMNS = ["objective", "greedy", "evaluations", "millis", "scaled"]


class MaximizeCommand(BaseCommand):
    """Greedy seed selection for every configured objective."""

    COMMAND_NAME = "maximize"
    LOG_NAME = "Maximize"
    HELP = "greedy seed selection per objective with influence comparison"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--k", type=int, help="seed set size overriding maximize.k")

    def run(self, args: argparse.Namespace) -> int:
        k = self.config.get("maximize.k") if args.k is None else args.k
        objectives = list(self.config.get("maximize.objectives"))
        lazy = self.config.get("maximize.lazy")
        record_timing = self.config.get("output.record_timing")
        evaluations = self.config.get("maximize.evaluation_replications")
        run = self.create_run("evaluate")
        self.log("Started: k=%d, objectives %s", k, ", ".join(objectives))

        comparison = []
        timings = {name: RuntimeEntry(name) for name in objectives}
        for index in range(self.config.get("maximize.instances")):
            g = build_graph(self.config, index)
            model = build_model(self.config, g, index, from_file=graph_from_file(self.config))
            if k > model.n:
                raise ConfigError(f"maximize.k={k} exceeds the {model.n} vertices of instance {index}")
            evaluation_seed = derive_seed(self.seed, "evaluate", index)

            for name in objectives:
                obj = make_objective(
                    name,
                    model,
                    self.config.get("maximize.mc_replications"),
                    derive_seed(self.seed, "greedy-mc", index),
                )
                use_lazy = lazy and obj.guaranteed
                started = time.perf_counter()
                if use_lazy:
                    trace = lazy_greedy_maximize(obj, k, range(model.n))
                else:
                    trace = greedy_maximize(obj, k, range(model.n))
                timings[name].add((time.perf_counter() - started) * 1000.0, trace.evaluations, use_lazy)
                self.write_table(trace.to_frame(record_timing), f"trace_{name}_{index}")
                estimate = estimate_influence(model, trace.seeds, evaluations, evaluation_seed, run)
                comparison.append(
                    {
                        "instance": index,
                        "objective": name,
                        "seeds": " ".join(str(v) for v in trace.selected),
                        "objective_value": trace.final_value,
                        "evaluations": trace.evaluations,
                        "influence_mean": estimate.mean,
                        "influence_stderr": estimate.stderr,
                    }
                )
                self.log("%s on instance %d: influence %.3f", obj.label, index, estimate.mean)

            rng = make_rng(self.seed, "random-set", index)
            chosen = sorted(int(v) for v in rng.choice(model.n, size=k, replace=False))
            estimate = estimate_influence(model, chosen, evaluations, evaluation_seed, run)
            comparison.append(
                {
                    "instance": index,
                    "objective": RANDOM_BASELINE,
                    "seeds": " ".join(str(v) for v in chosen),
                    "objective_value": None,
                    "evaluations": 0,
                    "influence_mean": estimate.mean,
                    "influence_stderr": estimate.stderr,
                }
            )

        self.write_table(pd.DataFrame(comparison), "comparison")
        self.write_table(runtime_table(list(timings.values()), record_timing), "runtime")
        self.log_success("Finished: %d greedy run(s)", len(objectives) * self.config.get("maximize.instances"))
        return 0


@dataclass
class RuntimeEntry:
    """Greedy wall time and objective evaluations of one objective, summed over instances."""

    objective: str
    millis: float = 0.0
    evaluations: int = 0
    lazy: bool = False

    def add(self, millis: float, evaluations: int, lazy: bool) -> None:
        self.millis += millis
        self.evaluations += evaluations
        self.lazy = lazy

    @property
    def greedy(self) -> str:
        return "lazy" if self.lazy else "eager"


def runtime_table(entries: list[RuntimeEntry], record_timing: bool = True) -> pd.DataFrame:
    """Total greedy wall time per objective, scaled by the ``lb1`` row when present.

    The ``greedy`` and ``evaluations`` columns say how each time was obtained;
    lazy and eager times are only comparable through the evaluation counts.
    """
    reference = next((e.millis for e in entries if e.objective == RUNTIME_REFERENCE), None)
    rows = []
    for entry in entries:
        millis = entry.millis if record_timing else 0.0
        scaled = entry.millis / reference if record_timing and reference else None
        rows.append(
            {
                "objective": entry.objective,
                "greedy": entry.greedy,
                "evaluations": entry.evaluations,
                "millis": millis,
                "scaled": scaled,
            }
        )
    return pd.DataFrame(rows, columns=RUNTIME_COLUMNS)
