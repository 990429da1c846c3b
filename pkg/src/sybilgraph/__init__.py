"""
sybilgraph - sybil voter detection and graph reduction for DAO voting data.

This package turns raw vote records into a bipartite voting graph, learns
node embeddings with a self-supervised graph model, clusters anonymous voters
into sybil candidates, and merges each cluster into a single node.

Modules
-------
ingest
    Vote, proposal, and registry parsing, filtering, and windowing.
votegraph
    Voting multigraph construction and sociometric statistics.
numcore
    Reverse-mode differentiation over numpy arrays and the Adam optimizer.
embedder
    Feature engineering, the four-layer embedder, and training.
sybil
    Exact k-NN search, k-means, cluster filtering, labeling, and reduction.
synth
    Synthetic datasets with planted sybils and recovery scoring.
cli
    Subcommand entry point over a shared output directory.
"""

from sybilgraph.cli.config import PipelineConfig
from sybilgraph.cli.stages import run_subcommand
from sybilgraph.embedder import TrainConfig, embed_all, engineer_features, train
from sybilgraph.errors import SybilGraphError
from sybilgraph.ingest import IngestConfig, filter_proposals, parse_votes, window_and_sort
from sybilgraph.sybil import (
    ClusterConfig,
    ClusterFilterPolicy,
    build_index,
    kmeans_cluster,
    knn_search,
    normalize_clusters,
    propagate_labels,
    reduce_graph,
    sociometric_report,
)
from sybilgraph.synth import SynthConfig, evaluate_recovery, generate_dataset
from sybilgraph.votegraph import VotingGraph, build_voting_graph, sociometrics

__all__ = [
    "PipelineConfig",
    "run_subcommand",
    "SybilGraphError",
    "IngestConfig",
    "parse_votes",
    "filter_proposals",
    "window_and_sort",
    "VotingGraph",
    "build_voting_graph",
    "sociometrics",
    "TrainConfig",
    "engineer_features",
    "train",
    "embed_all",
    "ClusterConfig",
    "ClusterFilterPolicy",
    "build_index",
    "knn_search",
    "kmeans_cluster",
    "normalize_clusters",
    "propagate_labels",
    "reduce_graph",
    "sociometric_report",
    "SynthConfig",
    "generate_dataset",
    "evaluate_recovery",
]
