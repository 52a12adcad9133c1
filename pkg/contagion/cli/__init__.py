"""Experiment runner: subcommands writing CSV and JSON results."""
from contagion.cli.app import CommandApp, main

__all__ = ["CommandApp", "main"]
