"""Influence bounds, greedy seeding and online influence games for triggering models."""
from contagion.version import __version__

__all__ = ["__version__"]
