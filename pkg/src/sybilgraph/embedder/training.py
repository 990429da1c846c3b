"""
Training, grid search, and embedding extraction.

Training minimizes the reconstruction MSE over train-mask voters with Adam,
records train and validation MSE every epoch, and keeps the parameters that
scored the lowest validation MSE.
"""

import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np

from sybilgraph.embedder.config import TrainConfig
from sybilgraph.embedder.features import FeatureSet, engineer_features
from sybilgraph.embedder.model import GraphOperators, ModelParams, forward, init_params
from sybilgraph.errors import (
    ConfigError,
    DegenerateEmbeddingError,
    NonFiniteError,
    TrainingDivergedError,
)
from sybilgraph.log import get_logger
from sybilgraph.numcore import Tape, Tensor, adam_step, backward, constant, matmul, mse_loss, no_tape
from sybilgraph.numcore.optim import AdamState
from sybilgraph.votegraph.models import VotingGraph

logger = get_logger(__name__)


@dataclass(frozen=True)
class LossPoint:
    """Train and validation MSE measured at one epoch."""

    epoch: int
    train_mse: float
    val_mse: float


@dataclass
class TrainResult:
    """
    Output of :func:`train`.

    Parameters
    ----------
    params : ModelParams
        Parameters from the epoch with the lowest validation MSE.
    loss_curve : list[LossPoint]
        One point per completed epoch.
    best_epoch : int
        Epoch the parameters were taken from.
    test_mse : float
        Reconstruction MSE of ``params`` on test-mask voters (NaN if empty).
    """

    params: ModelParams
    loss_curve: list[LossPoint]
    best_epoch: int
    test_mse: float = math.nan

    @property
    def best_val_mse(self) -> float:
        return min((p.val_mse for p in self.loss_curve), default=math.inf)


@dataclass(frozen=True)
class GridRow:
    """One trained grid point and its best validation MSE (inf if diverged)."""

    embedding_dim: int
    learning_rate: float
    heads: int
    val_mse: float

    def key(self) -> tuple[int, float, int]:
        return (self.embedding_dim, self.learning_rate, self.heads)


@dataclass
class GridSearchResult:
    """
    Output of :func:`grid_search`.

    Parameters
    ----------
    best_config : TrainConfig
        Config of the winning grid point, including its ``init_seed``; training
        it again reproduces the validation MSE in the table.
    table : list[GridRow]
        One row per grid point in cartesian-product order.
    """

    best_config: TrainConfig
    table: list[GridRow] = field(default_factory=list)


@dataclass
class EmbeddingMatrix:
    """
    Zero-centered node embeddings.

    Parameters
    ----------
    vectors : ndarray
        n x d centered embeddings; row i belongs to node id i.
    mean : ndarray
        Column means removed by centering.
    std : ndarray
        Column standard deviations.
    dead_dimensions : tuple[int, ...]
        Columns whose standard deviation is below the variability floor.
    """

    vectors: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    dead_dimensions: tuple[int, ...] = ()

    @property
    def shape(self) -> tuple[int, int]:
        return self.vectors.shape


def _selector(mask: np.ndarray) -> np.ndarray:
    rows = np.flatnonzero(mask)
    selector = np.zeros((len(rows), mask.shape[0]))
    selector[np.arange(len(rows)), rows] = 1.0
    return selector


def masked_mse(reconstruction: np.ndarray, target: np.ndarray, mask: np.ndarray) -> float:
    """Plain-numpy reconstruction MSE over the rows in ``mask`` (NaN if empty)."""
    if not mask.any():
        return math.nan
    diff = reconstruction[mask] - target[mask]
    return float(np.mean(diff * diff))


def reconstruction_loss(output_reconstruction: Tensor, features: FeatureSet, mask: np.ndarray) -> Tensor:
    """Recorded MSE between reconstruction and target over the rows in ``mask``."""
    selector = constant(_selector(mask))
    return mse_loss(matmul(selector, output_reconstruction), constant(features.target[mask]))


def train(
    graph: VotingGraph,
    config: TrainConfig,
    features: FeatureSet | None = None,
) -> TrainResult:
    """
    Train the embedder on one graph.

    Parameters
    ----------
    graph : VotingGraph
        Non-empty voting graph.
    config : TrainConfig
        Hyperparameters; ``seed`` drives the split, ``init_seed`` (or ``seed``)
        the initialization.
    features : FeatureSet | None, optional
        Precomputed features (reused across grid points).

    Returns
    -------
    TrainResult
        Best parameters and the loss curve.

    Raises
    ------
    TrainingDivergedError
        If the loss, a gradient, or a parameter becomes non-finite.
    """
    config.validate()
    features = features or engineer_features(graph, config)
    operators = GraphOperators.build(features)
    params = init_params(config, features.feature_count)
    state = AdamState(learning_rate=config.learning_rate)

    train_mask = features.train_mask if features.train_mask.any() else features.val_mask
    val_mask = features.val_mask if features.val_mask.any() else train_mask
    if not train_mask.any():
        raise ConfigError("train: graph has no voter nodes to train on")

    curve: list[LossPoint] = []
    best_params, best_epoch, best_val = params, 0, math.inf
    stale = 0

    for epoch in range(1, config.epochs + 1):
        try:
            with Tape() as tape:
                output = forward(params, features, operators)
                loss = reconstruction_loss(output.reconstruction, features, train_mask)
            train_mse = loss.item()
            val_mse = masked_mse(output.reconstruction.data, features.target, val_mask)
            if not (math.isfinite(train_mse) and math.isfinite(val_mse)):
                raise NonFiniteError("loss is not finite")

            curve.append(LossPoint(epoch=epoch, train_mse=train_mse, val_mse=val_mse))
            logger.debug("epoch %d train_mse %.6g val_mse %.6g", epoch, train_mse, val_mse)
            if val_mse < best_val:
                best_params, best_epoch, best_val = params, epoch, val_mse
                stale = 0
            else:
                stale += 1

            grads = backward(tape, loss, params=list(output.parameters.values()))
            arrays, state = adam_step(
                state,
                params.arrays(),
                [grads[output.parameters[name]] for name in params.names()],
            )
            params = params.with_arrays(arrays)
        except NonFiniteError as e:
            raise TrainingDivergedError(epoch, e.message) from e

        if config.patience is not None and stale >= config.patience:
            logger.info("Stopping early at epoch %d (best epoch %d)", epoch, best_epoch)
            break

    with no_tape():
        final = forward(best_params, features, operators)
    test_mse = masked_mse(final.reconstruction.data, features.target, features.test_mask)

    logger.info(
        "Trained %d epochs: best epoch %d, val_mse %.6g, test_mse %.6g",
        len(curve),
        best_epoch,
        best_val,
        test_mse,
    )
    return TrainResult(params=best_params, loss_curve=curve, best_epoch=best_epoch, test_mse=test_mse)


def grid_search(graph: VotingGraph, config: TrainConfig) -> GridSearchResult:
    """
    Train every point of the cartesian product of ``config.grid``.

    Each grid point uses the base features and split, and an initialization
    seed of ``config.seed ^ index``. Diverged runs score ``inf``.

    Parameters
    ----------
    graph : VotingGraph
        Non-empty voting graph.
    config : TrainConfig
        Base config and grid axes.

    Returns
    -------
    GridSearchResult
        The argmin of validation MSE (ties broken by the smallest
        (embedding_dim, learning_rate, heads) tuple) and the full table.
    """
    config.validate()
    features = engineer_features(graph, config)
    axes = config.grid.axes()
    table: list[GridRow] = []
    candidates: list[TrainConfig] = []

    for index, (dim, rate, heads) in enumerate(
        itertools.product(axes["embedding_dim"], axes["learning_rate"], axes["heads"])
    ):
        candidate = replace(
            config, embedding_dim=dim, learning_rate=rate, heads=heads, init_seed=config.seed ^ index
        )
        try:
            val = train(graph, candidate, features=features).best_val_mse
        except TrainingDivergedError as e:
            logger.warning("Grid point d=%d lr=%g heads=%d diverged: %s", dim, rate, heads, e.message)
            val = math.inf
        table.append(GridRow(embedding_dim=dim, learning_rate=rate, heads=heads, val_mse=val))
        candidates.append(candidate)

    winner = min(range(len(table)), key=lambda i: (table[i].val_mse, table[i].key()))
    best = table[winner]
    logger.info(
        "Grid search best: d=%d lr=%g heads=%d val_mse %.6g",
        best.embedding_dim,
        best.learning_rate,
        best.heads,
        best.val_mse,
    )
    return GridSearchResult(best_config=candidates[winner], table=table)


def embed_all(
    params: ModelParams,
    features: FeatureSet,
    variability_floor: float = 1e-6,
) -> EmbeddingMatrix:
    """
    Embed every node and center the embedding columns.

    Parameters
    ----------
    params : ModelParams
        Trained parameters.
    features : FeatureSet
        Features of the graph to embed.
    variability_floor : float, optional
        Columns with standard deviation at or below this are reported dead.

    Returns
    -------
    EmbeddingMatrix
        Zero-centered embeddings for all nodes, singletons included.

    Raises
    ------
    DegenerateEmbeddingError
        If every column is dead.
    """
    with no_tape():
        raw = forward(params, features).embeddings.numpy()

    mean = raw.mean(axis=0)
    centered = raw - mean
    std = centered.std(axis=0)
    dead = tuple(int(i) for i in np.flatnonzero(std <= variability_floor))

    if len(dead) == centered.shape[1]:
        raise DegenerateEmbeddingError(
            f"all {centered.shape[1]} embedding dimensions have std <= {variability_floor}"
        )
    if dead:
        logger.warning("Dead embedding dimensions (std <= %g): %s", variability_floor, list(dead))
    return EmbeddingMatrix(vectors=centered, mean=mean, std=std, dead_dimensions=dead)
