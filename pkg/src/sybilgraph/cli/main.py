"""Command-line entry point: one subcommand per pipeline stage."""

import argparse
import os
from collections.abc import Sequence

from dotenv import load_dotenv

from sybilgraph.cli.config import PipelineConfig
from sybilgraph.cli.stages import run_subcommand
from sybilgraph.errors import ConfigError, SybilGraphError
from sybilgraph.log import setup_logging

CONFIG_ENV = "SYBILGRAPH_CONFIG"
LOG_LEVEL_ENV = "SYBILGRAPH_LOG_LEVEL"

DESCRIPTIONS = {
    "ingest": "Parse, filter, and window votes, then build the voting graph",
    "stats": "Sociometric summary of the voting graph",
    "train": "Train the graph embedder",
    "embed": "Embed every node with the trained model",
    "cluster": "Cluster Unknown voters into sybil candidates and label them",
    "reduce": "Merge every sybil cluster into one node",
    "report": "Summarize the original, similarity, and clustered graphs",
    "synth": "Generate a synthetic dataset with planted sybil entities",
    "eval": "Score recovered clusters against the synthetic ground truth",
    "pipeline": "Run ingest, stats, train, embed, cluster, reduce, and report",
}


def _common_options() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", help=f"YAML config file (default: ${CONFIG_ENV})")
    parser.add_argument("--seed", type=int, help="Run seed; overrides the config file")
    parser.add_argument("--out", help="Output directory for every artifact")
    parser.add_argument("--log-level", help=f"Logging level (default: ${LOG_LEVEL_ENV} or INFO)")
    return parser


def _add_ingest_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--votes", help="Vote records, CSV or JSON lines")
    parser.add_argument("--proposals", help="Proposal records, CSV or JSON lines")
    parser.add_argument("--registry", help="address,name registry CSV")
    parser.add_argument("--min-duration", type=int, help="Shortest accepted proposal, seconds")
    parser.add_argument("--max-duration", type=float, help="Longest accepted proposal, seconds")


def _add_train_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--epochs", type=int, help="Maximum training epochs")
    parser.add_argument("--grid", action="store_true", help="Grid-search hyperparameters first")


def _add_cluster_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=int, help="k-means cluster count")


def _register(
    subparsers: argparse._SubParsersAction,
    name: str,
    common: argparse.ArgumentParser,
) -> argparse.ArgumentParser:
    parser = subparsers.add_parser(name, help=DESCRIPTIONS[name], parents=[common])
    parser.set_defaults(command=name)
    return parser


def build_parser() -> argparse.ArgumentParser:
    """Construct the argument parser with one subparser per stage."""
    parser = argparse.ArgumentParser(
        prog="sybilgraph",
        description="Detect and merge sybil voter clusters in DAO voting graphs",
    )
    common = _common_options()
    subparsers = parser.add_subparsers(dest="command", metavar="command")

    for name in DESCRIPTIONS:
        sub = _register(subparsers, name, common)
        if name in ("ingest", "pipeline"):
            _add_ingest_options(sub)
        if name in ("train", "pipeline"):
            _add_train_options(sub)
        if name in ("cluster", "pipeline"):
            _add_cluster_options(sub)
        if name == "eval":
            sub.add_argument("--truth", help="Ground-truth CSV (default: <out>/synth/truth.csv)")

    return parser


def load_config(args: argparse.Namespace) -> PipelineConfig:
    """
    Resolve the run config: flags over the config file over defaults.

    Raises
    ------
    ConfigError
        If the config file is missing or invalid.
    """
    path = args.config or os.environ.get(CONFIG_ENV)
    config = PipelineConfig.from_file(path) if path else PipelineConfig()
    return config.with_overrides(
        seed=args.seed,
        out=args.out,
        votes=getattr(args, "votes", None),
        proposals=getattr(args, "proposals", None),
        registry=getattr(args, "registry", None),
        truth=getattr(args, "truth", None),
        k=getattr(args, "k", None),
        epochs=getattr(args, "epochs", None),
        min_duration=getattr(args, "min_duration", None),
        max_duration=getattr(args, "max_duration", None),
        grid=getattr(args, "grid", False),
    )


def main(argv: Sequence[str] | None = None) -> int:
    """
    Run one subcommand.

    Returns
    -------
    int
        0 on success, otherwise the exit code of the error category.
    """
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return ConfigError.exit_code

    setup_logging(args.log_level or os.environ.get(LOG_LEVEL_ENV, "INFO"))
    try:
        run_subcommand(args.command, load_config(args))
    except SybilGraphError as e:
        print(f"error [{e.category}]: {e.message}")
        return e.exit_code
    return 0
