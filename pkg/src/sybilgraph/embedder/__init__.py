"""
Embedder module.

Engineers node features from the voting graph and trains the four-layer
graph convolutional network that produces node embeddings.

Classes
-------
TrainConfig
    Layer widths, optimizer settings, split, and grid-search axes.
FeatureSet
    Node features, edge arrays, temporal sequences, and split masks.
ModelParams
    Named parameter blocks of the four layers and the decoder.
EmbeddingMatrix
    Zero-centered node embeddings with per-dimension statistics.
"""

from sybilgraph.embedder.checkpoint import (
    load_checkpoint,
    load_embeddings,
    save_checkpoint,
    save_embeddings,
    write_grid_table,
    write_loss_curve,
)
from sybilgraph.embedder.config import GridSpec, TrainConfig
from sybilgraph.embedder.features import FEATURE_NAMES, FeatureSet, engineer_features, split_masks, zscore
from sybilgraph.embedder.model import (
    ForwardOutput,
    GraphOperators,
    ModelParams,
    forward,
    init_params,
    zero_params,
)
from sybilgraph.embedder.training import (
    EmbeddingMatrix,
    GridRow,
    GridSearchResult,
    LossPoint,
    TrainResult,
    embed_all,
    grid_search,
    masked_mse,
    reconstruction_loss,
    train,
)

__all__ = [
    "TrainConfig",
    "GridSpec",
    "FEATURE_NAMES",
    "FeatureSet",
    "engineer_features",
    "split_masks",
    "zscore",
    "ModelParams",
    "GraphOperators",
    "ForwardOutput",
    "init_params",
    "zero_params",
    "forward",
    "LossPoint",
    "TrainResult",
    "GridRow",
    "GridSearchResult",
    "EmbeddingMatrix",
    "masked_mse",
    "reconstruction_loss",
    "train",
    "grid_search",
    "embed_all",
    "save_checkpoint",
    "load_checkpoint",
    "save_embeddings",
    "load_embeddings",
    "write_loss_curve",
    "write_grid_table",
]
