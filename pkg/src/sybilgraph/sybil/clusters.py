"""
Cluster filtering, label propagation, and the similarity graph.

Raw k-means clusters over Unknown voters are normalized by dropping
singletons and then every cluster larger than ``mean + m * std`` of the
remaining sizes. Each surviving cluster takes the most common persistent
name among its members' nearest Known voters in embedding space.
"""

from collections import Counter
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field, replace
from typing import Any

import numpy as np

from sybilgraph.log import get_logger
from sybilgraph.sybil.config import ClusterFilterPolicy
from sybilgraph.sybil.index import build_index, knn_search
from sybilgraph.sybil.kmeans import KMeansResult
from sybilgraph.votegraph.models import VotingGraph

logger = get_logger(__name__)

SYNTHETIC_LABEL = "sybil-cluster-{index}"


@dataclass(frozen=True)
class ClusterStats:
    """Count and size summary of a list of clusters."""

    total: int = 0
    mean_size: float = 0.0
    min_size: int = 0
    max_size: int = 0

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> "ClusterStats":
        if not sizes:
            return cls()
        return cls(
            total=len(sizes),
            mean_size=float(np.mean(sizes)),
            min_size=int(min(sizes)),
            max_size=int(max(sizes)),
        )


@dataclass(frozen=True)
class FilterSnapshot:
    """
    Threshold statistics applied by one :func:`filter_clusters` call.

    Parameters
    ----------
    mean_size : float
        Mean size of the clusters left after singleton removal.
    std_size : float
        Population standard deviation of those sizes.
    size_threshold : float
        Largest size kept; ``inf`` when large clusters are not dropped or no
        cluster is left.
    """

    mean_size: float
    std_size: float
    size_threshold: float


@dataclass
class SybilClusterSet:
    """
    Predicted sybil clusters over Unknown voter nodes.

    Parameters
    ----------
    clusters : list[tuple[int, ...]]
        Sorted node ids of each cluster, ordered by smallest member.
    policy : ClusterFilterPolicy
        Policy the clusters were filtered with.
    snapshot : FilterSnapshot
        Threshold statistics the policy produced.
    before_filter : ClusterStats
        Clusters left after singleton removal, before the size filter.
    stats : ClusterStats
        Surviving clusters.
    labels : list[str]
        Propagated label per cluster; empty until labels are propagated.
    singletons_dropped : int
        Raw clusters of size one.
    large_dropped : int
        Clusters above the size threshold.
    """

    clusters: list[tuple[int, ...]] = field(default_factory=list)
    policy: ClusterFilterPolicy = field(default_factory=ClusterFilterPolicy)
    snapshot: FilterSnapshot = field(default_factory=lambda: FilterSnapshot(0.0, 0.0, float("inf")))
    before_filter: ClusterStats = field(default_factory=ClusterStats)
    stats: ClusterStats = field(default_factory=ClusterStats)
    labels: list[str] = field(default_factory=list)
    singletons_dropped: int = 0
    large_dropped: int = 0

    def __len__(self) -> int:
        return len(self.clusters)

    @property
    def members(self) -> list[int]:
        return sorted(node for cluster in self.clusters for node in cluster)

    @property
    def sizes(self) -> list[int]:
        return [len(cluster) for cluster in self.clusters]

    def cluster_of(self) -> dict[int, int]:
        """Node id to cluster index for every member."""
        return {node: index for index, cluster in enumerate(self.clusters) for node in cluster}

    def with_labels(self, labels: list[str]) -> "SybilClusterSet":
        return replace(self, labels=list(labels))

    def summary_rows(self) -> list[tuple[str, str]]:
        """Cluster-analysis summary as (description, value) rows."""
        return [
            ("Total clusters formed (excluding singletons)", f"{self.before_filter.total:,}"),
            ("Average cluster size", f"{self.before_filter.mean_size:,.2f} nodes"),
            ("Largest cluster contains", f"{self.before_filter.max_size:,} nodes"),
            ("Smallest cluster contains", f"{self.before_filter.min_size:,} nodes"),
            ("Filtered clusters formed (excluding large clusters)", f"{self.stats.total:,}"),
            ("Largest cluster after filtering contains", f"{self.stats.max_size:,} nodes"),
        ]

    def size_histogram(self) -> list[tuple[int, int]]:
        return sorted(Counter(self.sizes).items())

    def to_dict(self) -> dict[str, Any]:
        return {
            "clusters": [list(cluster) for cluster in self.clusters],
            "labels": list(self.labels),
            "policy": asdict(self.policy),
            "snapshot": {
                "mean_size": self.snapshot.mean_size,
                "std_size": self.snapshot.std_size,
                "size_threshold": _finite_or_none(self.snapshot.size_threshold),
            },
            "before_filter": asdict(self.before_filter),
            "stats": asdict(self.stats),
            "singletons_dropped": self.singletons_dropped,
            "large_dropped": self.large_dropped,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SybilClusterSet":
        snapshot = data["snapshot"]
        threshold = snapshot["size_threshold"]
        return cls(
            clusters=[tuple(int(n) for n in cluster) for cluster in data["clusters"]],
            policy=ClusterFilterPolicy(**data["policy"]),
            snapshot=FilterSnapshot(
                mean_size=float(snapshot["mean_size"]),
                std_size=float(snapshot["std_size"]),
                size_threshold=float("inf") if threshold is None else float(threshold),
            ),
            before_filter=ClusterStats(**data["before_filter"]),
            stats=ClusterStats(**data["stats"]),
            labels=[str(label) for label in data.get("labels", [])],
            singletons_dropped=int(data["singletons_dropped"]),
            large_dropped=int(data["large_dropped"]),
        )


def _finite_or_none(value: float) -> float | None:
    return value if np.isfinite(value) else None


def clusters_from_assignments(assignments: np.ndarray, node_ids: Sequence[int]) -> list[tuple[int, ...]]:
    """Group ``node_ids`` by cluster index; empty clusters are omitted."""
    groups: dict[int, list[int]] = {}
    for node, cluster in zip(node_ids, np.asarray(assignments).tolist()):
        groups.setdefault(int(cluster), []).append(int(node))
    return sorted((tuple(sorted(members)) for members in groups.values()), key=lambda c: c[0])


def filter_clusters(
    clusters: Sequence[Sequence[int]], policy: ClusterFilterPolicy | None = None
) -> SybilClusterSet:
    """
    Apply the singleton and size filters to raw clusters.

    Parameters
    ----------
    clusters : sequence of sequences of int
        Raw clusters of node ids.
    policy : ClusterFilterPolicy | None, optional
        Filter rules; defaults to :class:`ClusterFilterPolicy`.

    Returns
    -------
    SybilClusterSet
        Surviving clusters with the threshold snapshot and summary stats.
        Every cluster may be dropped; the result is then empty.
    """
    policy = policy or ClusterFilterPolicy()
    raw = sorted((tuple(sorted(int(n) for n in c)) for c in clusters if len(c)), key=lambda c: c[0])

    kept = [c for c in raw if len(c) > 1] if policy.drop_singletons else list(raw)
    singletons = len(raw) - len(kept)
    sizes = [len(c) for c in kept]

    if sizes:
        mean, std = float(np.mean(sizes)), float(np.std(sizes))
    else:
        mean, std = 0.0, 0.0
    threshold = mean + policy.std_multiplier * std if policy.drop_large and sizes else float("inf")
    survivors = [c for c in kept if len(c) <= threshold]

    result = SybilClusterSet(
        clusters=survivors,
        policy=policy,
        snapshot=FilterSnapshot(mean_size=mean, std_size=std, size_threshold=threshold),
        before_filter=ClusterStats.from_sizes(sizes),
        stats=ClusterStats.from_sizes([len(c) for c in survivors]),
        singletons_dropped=singletons,
        large_dropped=len(kept) - len(survivors),
    )
    logger.info(
        "Clusters: %d raw, %d singletons dropped, %d above size %.4g dropped, %d kept",
        len(raw),
        singletons,
        result.large_dropped,
        threshold,
        len(survivors),
    )
    return result


def normalize_clusters(
    result: KMeansResult, node_ids: Sequence[int], policy: ClusterFilterPolicy | None = None
) -> SybilClusterSet:
    """
    Turn k-means assignments into filtered sybil clusters.

    Parameters
    ----------
    result : KMeansResult
        Clustering of the points in ``node_ids`` order.
    node_ids : sequence of int
        Node id of every clustered point.
    policy : ClusterFilterPolicy | None, optional
        Filter rules.

    Returns
    -------
    SybilClusterSet
        Clusters of size in [2, threshold].
    """
    return filter_clusters(clusters_from_assignments(result.assignments, node_ids), policy)


@dataclass
class SimilarityGraph(VotingGraph):
    """
    Voting graph whose clustered voters carry their cluster's label.

    Node ids, nodes, and edges are those of the source graph; only the
    ``cluster_label`` of clustered voters differs.

    Parameters
    ----------
    clusters : SybilClusterSet
        The clusters with their propagated labels.
    """

    clusters: SybilClusterSet = field(default_factory=SybilClusterSet)

    @property
    def node_labels(self) -> dict[int, str]:
        return {v.node_id: v.cluster_label for v in self.voters if v.cluster_label is not None}


def _majority(labels: list[str]) -> str | None:
    if not labels:
        return None
    counts = Counter(labels)
    return min(counts, key=lambda label: (-counts[label], label))


def propagate_labels(
    graph: VotingGraph,
    clusters: SybilClusterSet,
    embeddings: np.ndarray,
    label_neighbors: int = 5,
) -> SimilarityGraph:
    """
    Label every cluster and copy the graph with labels on clustered voters.

    Each cluster member contributes the persistent names of its
    ``label_neighbors`` nearest Known voters. The most frequent name wins,
    ties going to the lexicographically smallest; a cluster with no Known
    voters in the graph gets ``sybil-cluster-<index>``.

    Parameters
    ----------
    graph : VotingGraph
        Source voting graph.
    clusters : SybilClusterSet
        Filtered clusters over Unknown voters of ``graph``.
    embeddings : ndarray
        n x d embeddings, row i for node id i.
    label_neighbors : int, optional
        Known neighbors consulted per member. Default is 5.

    Returns
    -------
    SimilarityGraph
        Same nodes and edges as ``graph``.
    """
    known = graph.known_voter_ids
    index = build_index(embeddings[known], ids=known) if known else None
    k = min(label_neighbors, len(known))

    labels: list[str] = []
    for position, cluster in enumerate(clusters.clusters):
        names: list[str] = []
        if index is not None:
            neighbor_ids, _ = knn_search(index, embeddings[list(cluster)], k)
            names = [graph.voter(int(node)).persistent_name for node in neighbor_ids.ravel()]
        labels.append(_majority(names) or SYNTHETIC_LABEL.format(index=position))

    labeled = clusters.with_labels(labels)
    node_label = {node: labels[i] for node, i in labeled.cluster_of().items()}
    voters = [
        replace(v, cluster_label=node_label[v.node_id]) if v.node_id in node_label else v
        for v in graph.voters
    ]
    logger.info(
        "Propagated %d labels (%d synthetic)",
        len(labels),
        sum(label.startswith("sybil-cluster-") for label in labels),
    )
    return SimilarityGraph(
        voters=voters,
        proposals=list(graph.proposals),
        edges=list(graph.edges),
        label_index=dict(graph.label_index),
        clusters=labeled,
    )
