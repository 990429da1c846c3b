"""
CLI module.

Subcommand entry point that runs the pipeline stages over a shared output
directory.

Classes
-------
PipelineConfig
    Paths, stage configs, and seed of a run.
PathsConfig
    Input files and output directory.
"""

from sybilgraph.cli.config import PathsConfig, PipelineConfig
from sybilgraph.cli.main import build_parser, main
from sybilgraph.cli.stages import PIPELINE_ORDER, STAGES, run_subcommand

__all__ = [
    "PipelineConfig",
    "PathsConfig",
    "STAGES",
    "PIPELINE_ORDER",
    "run_subcommand",
    "build_parser",
    "main",
]
