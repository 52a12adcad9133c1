"""Central version definition for the contagion toolkit."""

__version__ = "0.1.0"
