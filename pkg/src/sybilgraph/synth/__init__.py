"""
Synth module.

Generates synthetic voting networks with planted sybil entities and scores
recovered clusters against the ground truth.

Classes
-------
SynthConfig
    Dataset shape, noise, and seed.
GroundTruth
    Wallet to entity mapping and entity kinds.
RecoveryScores
    Pairwise precision, recall, F1, and adjusted Rand index.
"""

from sybilgraph.synth.config import SynthConfig
from sybilgraph.synth.enums import EntityType
from sybilgraph.synth.evaluation import (
    RecoveryScores,
    evaluate_recovery,
    evaluate_wallet_clusters,
    random_baseline_ari,
)
from sybilgraph.synth.generator import (
    DatasetPaths,
    GroundTruth,
    SynthDataset,
    generate_dataset,
    read_truth,
    write_dataset,
)

__all__ = [
    "SynthConfig",
    "EntityType",
    "GroundTruth",
    "SynthDataset",
    "DatasetPaths",
    "generate_dataset",
    "write_dataset",
    "read_truth",
    "RecoveryScores",
    "evaluate_recovery",
    "evaluate_wallet_clusters",
    "random_baseline_ari",
]
