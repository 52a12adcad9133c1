"""Subcommands of the experiment runner."""
from contagion.cli.commands.bandit_command import BanditCommand
from contagion.cli.commands.base_command import BaseCommand
from contagion.cli.commands.bound_command import BoundCommand
from contagion.cli.commands.generate_command import GenerateCommand
from contagion.cli.commands.maximize_command import MaximizeCommand
from contagion.cli.commands.oracle_command import OracleCommand

__all__ = [
    "BanditCommand",
    "BaseCommand",
    "BoundCommand",
    "GenerateCommand",
    "MaximizeCommand",
    "OracleCommand",
]
