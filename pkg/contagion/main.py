#!/usr/bin/env python3
"""Main entry point for the contagion experiment runner."""
import os
import sys

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from contagion.cli.app import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
