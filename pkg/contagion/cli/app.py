"""Command-line application: configuration, logging and subcommand dispatch."""
import argparse
import logging
import os
from typing import Optional, Sequence

from contagion.cli.commands.bandit_command import BanditCommand
from contagion.cli.commands.base_command import BaseCommand
from contagion.cli.commands.bound_command import BoundCommand
from contagion.cli.commands.generate_command import GenerateCommand
from contagion.cli.commands.maximize_command import MaximizeCommand
from contagion.cli.commands.oracle_command import OracleCommand
from contagion.cli.presets import PRESETS, preset
from contagion.core.config_manager import ConfigManager
from contagion.core.errors import ContagionError
from contagion.core.log_panel import LogPanel, setup_logging
from contagion.core.run_manager import RunManager
from contagion.version import __version__

logger = logging.getLogger("contagion.cli")

RUN_LOG = "run.log"
EFFECTIVE_CONFIG = "effective_config.yaml"


class CommandApp:
    """Owns the configuration and run managers and dispatches to one subcommand."""

    COMMANDS: dict[str, type[BaseCommand]] = {
        BoundCommand.COMMAND_NAME: BoundCommand,
        MaximizeCommand.COMMAND_NAME: MaximizeCommand,
        BanditCommand.COMMAND_NAME: BanditCommand,
        OracleCommand.COMMAND_NAME: OracleCommand,
        GenerateCommand.COMMAND_NAME: GenerateCommand,
    }

    def __init__(self, config_path: Optional[str] = None):
        """Initialize the application.

        Args:
            config_path: Defaults file; the packaged ``config.yaml`` when None.
        """
        self.config_path = config_path
        self.config_manager: Optional[ConfigManager] = None
        self.run_manager: Optional[RunManager] = None
        self.panel: Optional[LogPanel] = None

    def build_parser(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--config", help="YAML file merged over the defaults")
        common.add_argument("--preset", choices=sorted(PRESETS), help="named parameter set")
        common.add_argument(
            "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
            help="override one configuration key (repeatable)",
        )
        common.add_argument("--seed", type=int, help="master seed (run.seed)")
        common.add_argument("--out", help="output directory (output.dir)")
        common.add_argument("--threads", type=int, help="worker threads (run.threads)")
        common.add_argument("--format", choices=["csv", "json"], help="table format (output.format)")
        verbosity = common.add_mutually_exclusive_group()
        verbosity.add_argument("-v", "--verbose", action="store_true", help="debug output")
        verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")

        parser = argparse.ArgumentParser(
            prog="contagion",
            description="Influence bounds, seed selection and online influence maximization experiments.",
        )
        parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
        subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
        for name, command in self.COMMANDS.items():
            sub = subparsers.add_parser(name, parents=[common], help=command.HELP)
            command.add_arguments(sub)
        return parser

    def configure(self, args: argparse.Namespace) -> ConfigManager:
        """Defaults, then ``--config``, ``--preset``, ``--set`` and the shortcut flags; validated."""
        config = ConfigManager(self.config_path) if self.config_path else ConfigManager()
        if args.config:
            config.merge_file(args.config)
        if args.preset:
            for key, value in preset(args.preset).items():
                config.set(key, value)
        config.apply_overrides(args.overrides)
        shortcuts = {
            "run.seed": args.seed,
            "output.dir": args.out,
            "run.threads": args.threads,
            "output.format": args.format,
        }
        for key, value in shortcuts.items():
            if value is not None:
                config.set(key, value)
        config.require_valid()
        return config

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        """Parse ``argv``, run the command and return the process exit code."""
        args = self.build_parser().parse_args(argv)
        self.panel = setup_logging(-1 if args.quiet else (1 if args.verbose else 0))
        try:
            self.config_manager = self.configure(args)
            self.run_manager = RunManager(self.config_manager.get("run.threads"))
            command = self.COMMANDS[args.command](self.config_manager, self.run_manager)
            code = command.run(args)
        except ContagionError as e:
            logger.error("%s: %s", type(e).__name__, e)
            code = e.exit_code
        except KeyboardInterrupt:
            logger.warning("Interrupted; cancelling running work")
            if self.run_manager is not None:
                self.run_manager.cancel_all()
            code = 2
        self._write_run_summary()
        return code

    def _write_run_summary(self) -> None:
        if self.config_manager is None or self.panel is None:
            return
        out_dir = self.config_manager.get("output.dir")
        try:
            os.makedirs(out_dir, exist_ok=True)
            self.config_manager.save(os.path.join(out_dir, EFFECTIVE_CONFIG))
            with open(os.path.join(out_dir, RUN_LOG), "w", encoding="utf-8", newline="\n") as f:
                f.writelines(line + "\n" for line in self.panel.lines)
        except OSError as e:
            logger.warning("Could not write the run summary to %s: %s", out_dir, e)


def main(argv: Optional[Sequence[str]] = None) -> int:
    return CommandApp().run(argv)
