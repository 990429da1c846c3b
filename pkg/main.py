"""
Main entry point for sybilgraph.

Run with: uv run python main.py pipeline --config configs/synth.yaml
"""

import sys

from sybilgraph.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
