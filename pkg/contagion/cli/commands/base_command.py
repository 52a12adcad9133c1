"""Base class for all subcommands."""
import argparse
import logging
import os
from typing import TYPE_CHECKING, Any

import pandas as pd

from contagion.cli.writers import write_json, write_table
from contagion.core.log_panel import log_success

if TYPE_CHECKING:
    from contagion.core.config_manager import ConfigManager
    from contagion.core.run_manager import ManagedRun, RunManager

logger = logging.getLogger("contagion.cli")


class BaseCommand:
    """Base class for subcommands.

    Subclasses set the metadata, declare their own flags in
    :meth:`add_arguments` and do their work in :meth:`run`.
    """

    # Command metadata (override in subclasses)
    COMMAND_NAME = "base"
    LOG_NAME = "Base"
    HELP = ""

    def __init__(self, config_manager: "ConfigManager", run_manager: "RunManager"):
        """Initialize the command.

        Args:
            config_manager: Validated configuration.
            run_manager: Run manager providing the worker pools.
        """
        self.config = config_manager
        self.runs = run_manager

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        """Add command-specific flags. Override in subclasses."""

    def run(self, args: argparse.Namespace) -> int:
        """Execute the command and return its exit code. Override in subclasses."""
        raise NotImplementedError

    @property
    def out_dir(self) -> str:
        return self.config.get("output.dir")

    @property
    def output_format(self) -> str:
        return self.config.get("output.format")

    @property
    def seed(self) -> int:
        return self.config.get("run.seed")

    def create_run(self, suffix: str = "") -> "ManagedRun":
        name = f"{self.COMMAND_NAME}-{suffix}" if suffix else self.COMMAND_NAME
        return self.runs.create_run(name)

    def log(self, message: str, *args: Any) -> None:
        """Log an info message with the command prefix."""
        logger.info(f"[{self.LOG_NAME}] {message}", *args)

    def log_success(self, message: str, *args: Any) -> None:
        log_success(logger, f"[{self.LOG_NAME}] {message}", *args)

    def log_error(self, message: str, *args: Any) -> None:
        logger.error(f"[{self.LOG_NAME}] {message}", *args)

    def write_table(self, frame: pd.DataFrame, stem: str) -> str:
        """Write ``frame`` in the configured format and log the path."""
        path = write_table(frame, self.out_dir, stem, self.output_format)
        self.log("Wrote %s", path)
        return path

    def write_json(self, data: Any, name: str) -> str:
        path = write_json(data, os.path.join(self.out_dir, name))
        self.log("Wrote %s", path)
        return path
