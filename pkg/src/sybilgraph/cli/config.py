"""
Configuration of a pipeline run.

A run is configured from one YAML document whose top-level sections mirror
the stage config dataclasses. CLI flags override file values, which override
the dataclass defaults.
"""

import hashlib
import json
import typing
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import yaml

from sybilgraph.artifacts import make_meta
from sybilgraph.embedder.config import TrainConfig
from sybilgraph.errors import ConfigError
from sybilgraph.ingest.config import IngestConfig
from sybilgraph.sybil.config import ClusterConfig, ClusterFilterPolicy
from sybilgraph.synth.config import SynthConfig

TOP_LEVEL_KEYS = ("paths", "ingest", "train", "cluster", "filter", "synth", "seed", "grid_search")


@dataclass
class PathsConfig:
    """
    Input files and the output directory.

    Parameters
    ----------
    votes : Path | None, optional
        Vote records (CSV or JSON lines). Required by ``ingest``.
    proposals : Path | None, optional
        Proposal records. Required by ``ingest``.
    registry : Path | None, optional
        ``address,name`` registry. Without one every voter is Unknown.
    truth : Path | None, optional
        Ground-truth file of a synthetic dataset. ``eval`` falls back to
        ``<out>/synth/truth.csv``.
    out : Path, optional
        Directory every stage reads from and writes to. Default is ``out``.
    """

    votes: Path | None = None
    proposals: Path | None = None
    registry: Path | None = None
    truth: Path | None = None
    out: Path = Path("out")

    def require(self, name: str) -> Path:
        """
        Return an input path that must exist.

        Raises
        ------
        ConfigError
            If the path is unset or does not exist.
        """
        path = getattr(self, name)
        if path is None:
            raise ConfigError(f"paths.{name} is required for this stage")
        if not path.exists():
            raise ConfigError(f"paths.{name}: {path} does not exist")
        return path


def _check_keys(section: str, data: Any, cls: type) -> dict[str, Any]:
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{section}: expected a mapping, got {type(data).__name__}")
    known = {f.name for f in fields(cls)}
    for key in data:
        if key not in known:
            raise ConfigError(f"unknown config key: {section}.{key}")
    return dict(data)


def _section(section: str, data: Any, cls: type) -> Any:
    values = _check_keys(section, data, cls)
    hints = typing.get_type_hints(cls)
    for key, value in values.items():
        if typing.get_origin(hints[key]) is tuple and isinstance(value, list):
            values[key] = tuple(value)
    try:
        return cls(**values)
    except TypeError as e:
        raise ConfigError(f"{section}: {e}") from e


@dataclass
class PipelineConfig:
    """
    Everything a pipeline run depends on.

    Parameters
    ----------
    paths : PathsConfig, optional
        Inputs and output directory.
    ingest : IngestConfig, optional
        Proposal duration bounds and vote window.
    train : TrainConfig, optional
        Embedder hyperparameters.
    cluster : ClusterConfig, optional
        k-means and label propagation settings.
    filter : ClusterFilterPolicy, optional
        Cluster size filter.
    synth : SynthConfig, optional
        Synthetic dataset shape.
    seed : int, optional
        Run seed. Replaces the seeds of ``train`` and ``synth`` and seeds
        k-means. Default is 0.
    grid_search : bool, optional
        Run the grid search before training. Default is False.

    Examples
    --------
    >>> config = PipelineConfig.from_dict({"seed": 7, "cluster": {"k": 12}})
    >>> config.train_config.seed
    7
    """

    paths: PathsConfig = field(default_factory=PathsConfig)
    ingest: IngestConfig = field(default_factory=IngestConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    cluster: ClusterConfig = field(default_factory=ClusterConfig)
    filter: ClusterFilterPolicy = field(default_factory=ClusterFilterPolicy)
    synth: SynthConfig = field(default_factory=SynthConfig)
    seed: int = 0
    grid_search: bool = False

    @classmethod
    def from_dict(cls, data: dict[str, Any] | None) -> "PipelineConfig":
        """
        Build a config from a parsed document.

        Raises
        ------
        ConfigError
            If a key is unknown or a value has the wrong shape.
        """
        data = data or {}
        if not isinstance(data, dict):
            raise ConfigError("config document must be a mapping")
        for key in data:
            if key not in TOP_LEVEL_KEYS:
                raise ConfigError(f"unknown config key: {key}")

        paths = _check_keys("paths", data.get("paths"), PathsConfig)
        train = _check_keys("train", data.get("train"), TrainConfig)
        return cls(
            paths=PathsConfig(**{name: None if v is None else Path(v) for name, v in paths.items()}),
            ingest=_section("ingest", data.get("ingest"), IngestConfig),
            train=TrainConfig.from_dict(train),
            cluster=_section("cluster", data.get("cluster"), ClusterConfig),
            filter=_section("filter", data.get("filter"), ClusterFilterPolicy),
            synth=_section("synth", data.get("synth"), SynthConfig),
            seed=int(data.get("seed", 0)),
            grid_search=bool(data.get("grid_search", False)),
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        """
        Read a YAML config file.

        Raises
        ------
        ConfigError
            If the file is missing, is not valid YAML, or has unknown keys.
        """
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file {path} does not exist")
        try:
            data = yaml.safe_load(path.read_text(encoding="utf-8"))
        except yaml.YAMLError as e:
            raise ConfigError(f"{path}: invalid YAML: {e}") from e
        return cls.from_dict(data)

    def with_overrides(
        self,
        *,
        seed: int | None = None,
        out: str | Path | None = None,
        votes: str | Path | None = None,
        proposals: str | Path | None = None,
        registry: str | Path | None = None,
        truth: str | Path | None = None,
        k: int | None = None,
        epochs: int | None = None,
        min_duration: int | None = None,
        max_duration: float | None = None,
        grid: bool = False,
    ) -> "PipelineConfig":
        """Return a copy with every non-None flag value applied."""
        path_values = {"out": out, "votes": votes, "proposals": proposals, "registry": registry, "truth": truth}
        paths = replace(self.paths, **{name: Path(v) for name, v in path_values.items() if v is not None})
        ingest = self.ingest
        if min_duration is not None:
            ingest = replace(ingest, min_duration=min_duration)
        if max_duration is not None:
            ingest = replace(ingest, max_duration=max_duration)
        return replace(
            self,
            paths=paths,
            ingest=ingest,
            train=self.train if epochs is None else replace(self.train, epochs=epochs),
            cluster=self.cluster if k is None else replace(self.cluster, k=k),
            seed=self.seed if seed is None else seed,
            grid_search=self.grid_search or grid,
        )

    @property
    def train_config(self) -> TrainConfig:
        return replace(self.train, seed=self.seed)

    @property
    def synth_config(self) -> SynthConfig:
        return replace(self.synth, seed=self.seed)

    def validate(self) -> None:
        """
        Raises
        ------
        ConfigError
            If any section is invalid.
        """
        self.ingest.validate()
        self.train.validate()
        self.cluster.validate()
        self.filter.validate()
        self.synth.validate()

    def to_dict(self) -> dict[str, Any]:
        """Every setting that affects artifacts; paths are left out."""
        return {
            "ingest": asdict(self.ingest),
            "train": self.train_config.to_dict(),
            "cluster": asdict(self.cluster),
            "filter": asdict(self.filter),
            "synth": asdict(self.synth_config),
            "seed": self.seed,
            "grid_search": self.grid_search,
        }

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON of :meth:`to_dict`."""
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def meta(self) -> dict[str, Any]:
        return make_meta(self.config_hash(), self.seed)
