"""
Model checkpoints, embeddings, and training curves on disk.

Checkpoints and embeddings are ``.npz`` archives holding plain arrays plus a
JSON ``header`` string; nothing is pickled.
"""

import json
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np

from sybilgraph.artifacts import ARTIFACT_FORMAT_VERSION, write_csv
from sybilgraph.embedder.config import TrainConfig
from sybilgraph.embedder.model import ModelParams
from sybilgraph.embedder.training import EmbeddingMatrix, GridRow, LossPoint
from sybilgraph.errors import ArtifactMismatchError, StageDependencyError

PARAM_PREFIX = "param_"


def _read_npz(path: Path) -> tuple[dict[str, Any], dict[str, np.ndarray]]:
    if not path.exists():
        raise StageDependencyError(path)
    with np.load(path, allow_pickle=False) as archive:
        arrays = {name: archive[name] for name in archive.files}
    header = json.loads(str(arrays.pop("header")))
    version = header.get("format_version")
    if version != ARTIFACT_FORMAT_VERSION:
        raise ArtifactMismatchError(
            f"{path} has format_version {version}, expected {ARTIFACT_FORMAT_VERSION}"
        )
    return header, arrays


def _write_npz(path: Path, header: dict[str, Any], arrays: dict[str, np.ndarray]) -> Path:
    with path.open("wb") as handle:
        np.savez(handle, header=np.array(json.dumps(header, sort_keys=True)), **arrays)
    return path


def save_checkpoint(
    path: str | Path,
    params: ModelParams,
    config: TrainConfig,
    meta: dict[str, Any] | None = None,
) -> Path:
    """
    Write every parameter block with the training config.

    Parameters
    ----------
    path : str | Path
        Destination ``.npz`` file.
    params : ModelParams
        Trained parameters.
    config : TrainConfig
        Config the parameters were trained with.
    meta : dict | None, optional
        Artifact metadata.

    Returns
    -------
    Path
        Path to the written checkpoint.
    """
    header = {
        "format_version": ARTIFACT_FORMAT_VERSION,
        "names": params.names(),
        "heads": params.heads,
        "config": config.to_dict(),
        "meta": meta or {},
    }
    arrays = {f"{PARAM_PREFIX}{name}": array for name, array in params.blocks.items()}
    return _write_npz(Path(path), header, arrays)


def load_checkpoint(path: str | Path) -> tuple[ModelParams, TrainConfig, dict[str, Any]]:
    """
    Read a checkpoint written by :func:`save_checkpoint`.

    Returns
    -------
    tuple[ModelParams, TrainConfig, dict]
        Parameters in their saved order, the training config, and the meta.

    Raises
    ------
    StageDependencyError
        If the file does not exist.
    ArtifactMismatchError
        If the container version is unsupported or a block is missing.
    """
    path = Path(path)
    header, arrays = _read_npz(path)
    blocks = {}
    for name in header["names"]:
        key = f"{PARAM_PREFIX}{name}"
        if key not in arrays:
            raise ArtifactMismatchError(f"{path} is missing parameter block {name}")
        blocks[name] = arrays[key]
    params = ModelParams(blocks=blocks, heads=int(header["heads"]))
    return params, TrainConfig.from_dict(header["config"]), header.get("meta", {})


def save_embeddings(
    path: str | Path, embeddings: EmbeddingMatrix, meta: dict[str, Any] | None = None
) -> Path:
    header = {
        "format_version": ARTIFACT_FORMAT_VERSION,
        "dead_dimensions": list(embeddings.dead_dimensions),
        "meta": meta or {},
    }
    arrays = {"vectors": embeddings.vectors, "mean": embeddings.mean, "std": embeddings.std}
    return _write_npz(Path(path), header, arrays)


def load_embeddings(path: str | Path) -> tuple[EmbeddingMatrix, dict[str, Any]]:
    """
    Raises
    ------
    StageDependencyError
        If the file does not exist.
    """
    header, arrays = _read_npz(Path(path))
    matrix = EmbeddingMatrix(
        vectors=arrays["vectors"],
        mean=arrays["mean"],
        std=arrays["std"],
        dead_dimensions=tuple(int(i) for i in header["dead_dimensions"]),
    )
    return matrix, header.get("meta", {})


def write_loss_curve(
    path: str | Path, curve: Sequence[LossPoint], meta: dict[str, Any] | None = None
) -> Path:
    """Write ``epoch,train_mse,val_mse`` rows for external plotting."""
    rows = ((p.epoch, repr(p.train_mse), repr(p.val_mse)) for p in curve)
    return write_csv(path, ("epoch", "train_mse", "val_mse"), rows, meta)


def write_grid_table(
    path: str | Path, table: Sequence[GridRow], meta: dict[str, Any] | None = None
) -> Path:
    rows = ((r.embedding_dim, repr(r.learning_rate), r.heads, repr(r.val_mse)) for r in table)
    return write_csv(path, ("embedding_dim", "learning_rate", "heads", "val_mse"), rows, meta)
