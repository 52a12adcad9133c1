"""Write generated instances to disk."""
import argparse
import os

from contagion.cli.commands.base_command import BaseCommand
from contagion.cli.instances import build_graph, build_model, graph_from_file
from contagion.graph.io import write_edge_list, write_explicit
from contagion.graph.models import ModelKind


class GenerateCommand(BaseCommand):
    """Builds the configured graph and model and saves them as edge-list (and trigger) files."""

    COMMAND_NAME = "generate"
    LOG_NAME = "Generate"
    HELP = "write the configured graph (with model weights) as an edge-list file"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--instance", type=int, default=0, help="instance index (selects the random streams)")
        parser.add_argument("--name", default="graph", help="output file stem")
        parser.add_argument("--topology-only", action="store_true", help="write unit weights, skip the model")

    def run(self, args: argparse.Namespace) -> int:
        g = build_graph(self.config, args.instance)
        if args.topology_only:
            path = os.path.join(self.out_dir, f"{args.name}.tsv")
            write_edge_list(g, path)
            self.log_success("Wrote %s (n=%d, %d stored edges)", path, g.n, g.m)
            return 0

        model = build_model(self.config, g, args.instance, from_file=graph_from_file(self.config))
        path = os.path.join(self.out_dir, f"{args.name}.tsv")
        write_edge_list(model.graph, path)
        self.log("Wrote %s", path)
        if model.kind is ModelKind.EXPLICIT:
            triggers = os.path.join(self.out_dir, f"{args.name}.triggers")
            write_explicit(model, triggers)
            self.log("Wrote %s", triggers)
        self.log_success("Generated %s model: n=%d, %d edges", model.kind.value, model.n, model.graph.m)
        return 0
