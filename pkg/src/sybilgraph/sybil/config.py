"""
Configuration dataclasses for clustering and cluster filtering.
"""

import math
from dataclasses import dataclass

from sybilgraph.errors import ConfigError


@dataclass
class ClusterConfig:
    """
    Settings of the k-means stage and label propagation.

    Parameters
    ----------
    k : int | None, optional
        Cluster count. None derives it from ``points_per_cluster``.
    points_per_cluster : float, optional
        Unknown voters per cluster when ``k`` is unset. Default is 100.
    max_iters : int, optional
        Maximum Lloyd iterations. Default is 300.
    label_neighbors : int, optional
        Known neighbors consulted per cluster member during label
        propagation. Default is 5.

    Examples
    --------
    >>> ClusterConfig().resolve_k(250)
    3
    >>> ClusterConfig(k=7).resolve_k(250)
    7
    """

    k: int | None = None
    points_per_cluster: float = 100.0
    max_iters: int = 300
    label_neighbors: int = 5

    def resolve_k(self, unknown_voters: int) -> int:
        """Cluster count for ``unknown_voters`` points, clamped to [1, unknown_voters]."""
        if self.k is not None:
            return self.k
        return max(1, min(unknown_voters, math.ceil(unknown_voters / self.points_per_cluster)))

    def validate(self) -> None:
        """
        Raises
        ------
        ConfigError
            If a count is below 1 or ``points_per_cluster`` is not positive.
        """
        if self.k is not None and self.k < 1:
            raise ConfigError("cluster: k must be >= 1")
        if self.points_per_cluster <= 0:
            raise ConfigError("cluster: points_per_cluster must be positive")
        if self.max_iters < 1:
            raise ConfigError("cluster: max_iters must be >= 1")
        if self.label_neighbors < 1:
            raise ConfigError("cluster: label_neighbors must be >= 1")


@dataclass
class ClusterFilterPolicy:
    """
    Rules applied to raw k-means clusters before they count as sybils.

    Parameters
    ----------
    drop_singletons : bool, optional
        Remove clusters of one node. Default is True.
    drop_large : bool, optional
        Remove clusters larger than the size threshold. Default is True.
    std_multiplier : float, optional
        The threshold is ``mean + std_multiplier * std`` of the cluster sizes
        left after singleton removal. Default is 1.0.
    """

    drop_singletons: bool = True
    drop_large: bool = True
    std_multiplier: float = 1.0

    def validate(self) -> None:
        if self.std_multiplier < 0:
            raise ConfigError("filter: std_multiplier must be non-negative")
