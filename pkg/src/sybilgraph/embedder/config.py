"""
Configuration dataclasses for training the graph embedder.
"""

import math
from dataclasses import asdict, dataclass, field, fields
from typing import Any

from sybilgraph.errors import ConfigError


@dataclass
class GridSpec:
    """
    Axes of the hyperparameter grid search.

    Parameters
    ----------
    embedding_dim : tuple[int, ...], optional
        Candidate embedding sizes. Default is (16, 32).
    learning_rate : tuple[float, ...], optional
        Candidate Adam learning rates. Default is (1e-2, 1e-3).
    heads : tuple[int, ...], optional
        Candidate attention head counts. Default is (2, 4).
    """

    embedding_dim: tuple[int, ...] = (16, 32)
    learning_rate: tuple[float, ...] = (1e-2, 1e-3)
    heads: tuple[int, ...] = (2, 4)

    def axes(self) -> dict[str, tuple]:
        return {f.name: tuple(getattr(self, f.name)) for f in fields(self)}


@dataclass
class TrainConfig:
    """
    Hyperparameters of the four-layer embedder.

    Parameters
    ----------
    embedding_dim : int, optional
        Output embedding width d. Default is 32.
    hidden_dim : int, optional
        Width of the fully connected, MLP, and LSTM layers. Default is 64.
    sequence_length : int, optional
        Number of most recent events per node fed to the LSTM. Default is 32.
    heads : int, optional
        Attention head count. Default is 4.
    head_dim : int, optional
        Projection width of each attention head. Default is 8.
    learning_rate : float, optional
        Adam step size. Default is 1e-3.
    epochs : int, optional
        Maximum training epochs. Default is 100.
    split : tuple[float, float, float], optional
        Train/validation/test fractions over voter nodes. Default is (0.7, 0.15, 0.15).
    seed : int, optional
        Seed for the split and parameter initialization. Default is 0.
    init_seed : int | None, optional
        Seed for parameter initialization only; falls back to ``seed``.
        Grid search sets it to ``seed ^ index`` for each grid point.
    patience : int | None, optional
        Stop after this many epochs without validation improvement. None
        trains for all epochs.
    variability_floor : float, optional
        Minimum per-dimension standard deviation of a live embedding
        dimension. Default is 1e-6.
    grid : GridSpec, optional
        Axes used by grid search.
    """

    embedding_dim: int = 32
    hidden_dim: int = 64
    sequence_length: int = 32
    heads: int = 4
    head_dim: int = 8
    learning_rate: float = 1e-3
    epochs: int = 100
    split: tuple[float, float, float] = (0.7, 0.15, 0.15)
    seed: int = 0
    init_seed: int | None = None
    patience: int | None = None
    variability_floor: float = 1e-6
    grid: GridSpec = field(default_factory=GridSpec)

    def validate(self) -> None:
        """
        Raises
        ------
        ConfigError
            If a dimension is below 1, the split does not sum to 1, or a grid
            axis is empty.
        """
        for name in ("embedding_dim", "hidden_dim", "sequence_length", "heads", "head_dim", "epochs"):
            if getattr(self, name) < 1:
                raise ConfigError(f"train: {name} must be >= 1")
        if len(self.split) != 3 or any(f < 0 for f in self.split):
            raise ConfigError(f"train: split must be three non-negative fractions, got {self.split}")
        if not math.isclose(sum(self.split), 1.0, abs_tol=1e-9):
            raise ConfigError(f"train: split fractions must sum to 1, got {sum(self.split)}")
        if self.learning_rate <= 0:
            raise ConfigError("train: learning_rate must be positive")
        if self.patience is not None and self.patience < 1:
            raise ConfigError("train: patience must be >= 1")
        for axis, values in self.grid.axes().items():
            if not values:
                raise ConfigError(f"train: grid axis {axis} is empty")

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["split"] = list(self.split)
        data["grid"] = {k: list(v) for k, v in self.grid.axes().items()}
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TrainConfig":
        """
        Raises
        ------
        ConfigError
            If ``data`` has keys that are not TrainConfig fields.
        """
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"train: unknown keys {sorted(unknown)}")
        values = dict(data)
        if "split" in values:
            values["split"] = tuple(float(v) for v in values["split"])
        if "grid" in values:
            grid = values["grid"] or {}
            grid_known = {f.name for f in fields(GridSpec)}
            if set(grid) - grid_known:
                raise ConfigError(f"train.grid: unknown keys {sorted(set(grid) - grid_known)}")
            values["grid"] = GridSpec(**{k: tuple(v) for k, v in grid.items()})
        return cls(**values)
