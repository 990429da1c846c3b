"""
Sociometric summary of one pipeline run.
"""

import json
from dataclasses import asdict, dataclass, field
from typing import Any

from sybilgraph.ingest.records import DatasetWindow
from sybilgraph.sybil.clusters import SimilarityGraph, SybilClusterSet
from sybilgraph.sybil.reduce import ClusteredGraph
from sybilgraph.votegraph.models import VotingGraph

REPORT_FIELDS = (
    "date_range",
    "original_graph",
    "similarity_graph",
    "clustered_graph",
    "known_voters",
    "unknown_voters",
    "potential_sybils",
    "sybil_clusters",
    "node_reduction",
)


def _pct(numerator: int, denominator: int) -> float:
    return round(100.0 * numerator / denominator, 2) if denominator else 0.0


@dataclass(frozen=True)
class GraphSize:
    nodes: int
    edges: int

    @classmethod
    def of(cls, graph: VotingGraph) -> "GraphSize":
        return cls(nodes=graph.node_count, edges=graph.edge_count)

    def label(self) -> str:
        return f"{self.nodes:,} nodes, {self.edges:,} edges"


@dataclass
class Report:
    """
    Sociometric results of a run.

    Parameters
    ----------
    window : DatasetWindow
        Date range of the votes.
    original, similarity, clustered : GraphSize
        Node and edge counts of the three graphs.
    known_voters, unknown_voters : int
        Voter counts of the original graph.
    potential_sybils : int
        Voters inside surviving clusters.
    clusters : int
        Surviving cluster count.
    meta : dict
        Artifact metadata of the run.
    """

    window: DatasetWindow
    original: GraphSize
    similarity: GraphSize
    clustered: GraphSize
    known_voters: int
    unknown_voters: int
    potential_sybils: int
    clusters: int
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def nodes_removed(self) -> int:
        return self.original.nodes - self.clustered.nodes

    @property
    def reduction_pct(self) -> float:
        """Node reduction over total original nodes, in percent."""
        return _pct(self.nodes_removed, self.original.nodes)

    @property
    def sybil_share_of_unknown_pct(self) -> float:
        return _pct(self.potential_sybils, self.unknown_voters)

    @property
    def clusters_share_of_unknown_pct(self) -> float:
        return _pct(self.clusters, self.unknown_voters)

    def to_dict(self) -> dict[str, Any]:
        quantities = {
            "date_range": {
                "start_date": self.window.start_iso(),
                "end_date": self.window.end_iso(),
                "duration": self.window.duration_label(),
            },
            "original_graph": asdict(self.original),
            "similarity_graph": asdict(self.similarity),
            "clustered_graph": asdict(self.clustered),
            "known_voters": self.known_voters,
            "unknown_voters": self.unknown_voters,
            "potential_sybils": {
                "count": self.potential_sybils,
                "share_of_unknown_pct": self.sybil_share_of_unknown_pct,
            },
            "sybil_clusters": {
                "count": self.clusters,
                "share_of_unknown_pct": self.clusters_share_of_unknown_pct,
            },
            "node_reduction": {
                "reduction_pct": self.reduction_pct,
                "nodes_removed": self.nodes_removed,
                "potential_sybils": self.potential_sybils,
            },
        }
        return {"meta": self.meta, **quantities}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    def rows(self) -> list[tuple[str, str]]:
        """(metric, value) rows of the text table."""
        return [
            ("Start Date", self.window.start_iso()),
            ("End Date", self.window.end_iso()),
            ("Duration", self.window.duration_label()),
            ("Original Graph", self.original.label()),
            ("Similarity Graph", self.similarity.label()),
            ("Clustered Graph", self.clustered.label()),
            ("Number of Known Voters", f"{self.known_voters:,}"),
            ("Number of Unknown Voters", f"{self.unknown_voters:,}"),
            (
                "Number of Potential Sybils Identified",
                f"{self.potential_sybils:,} ({self.sybil_share_of_unknown_pct:.2f}% of Unknown Voters)",
            ),
            (
                "Number of Sybil Clusters Formed",
                f"{self.clusters:,} ({self.clusters_share_of_unknown_pct:.2f}% of Unknown Voters)",
            ),
            (
                "Node Reduction After Clustering Sybils",
                f"{self.reduction_pct:.2f}% ({self.nodes_removed:,} nodes removed, "
                f"{self.potential_sybils:,} voters merged)",
            ),
        ]

    def to_text(self) -> str:
        """Aligned two-column table."""
        rows = [("Metric", "Value"), *self.rows()]
        width = max(len(metric) for metric, _ in rows)
        value_width = max(len(value) for _, value in rows)
        rule = "-" * (width + 2 + value_width)
        lines = [rule, f"{rows[0][0]:<{width}}  {rows[0][1]:>{value_width}}", rule]
        lines += [f"{metric:<{width}}  {value:>{value_width}}" for metric, value in rows[1:]]
        lines.append(rule)
        return "\n".join(lines) + "\n"


def sociometric_report(
    original: VotingGraph,
    similarity: SimilarityGraph,
    clustered: ClusteredGraph,
    clusters: SybilClusterSet,
    window: DatasetWindow,
    meta: dict[str, Any] | None = None,
) -> Report:
    """
    Summarize the three graphs of one run.

    Parameters
    ----------
    original : VotingGraph
        Graph built from the windowed votes.
    similarity : SimilarityGraph
        Graph with propagated labels.
    clustered : ClusteredGraph
        Reduced graph.
    clusters : SybilClusterSet
        Clusters that were merged.
    window : DatasetWindow
        Date range of the votes.
    meta : dict | None, optional
        Artifact metadata.

    Returns
    -------
    Report
        Counts, shares, and the node reduction.
    """
    return Report(
        window=window,
        original=GraphSize.of(original),
        similarity=GraphSize.of(similarity),
        clustered=GraphSize.of(clustered),
        known_voters=len(original.known_voter_ids),
        unknown_voters=len(original.unknown_voter_ids),
        potential_sybils=sum(clusters.sizes),
        clusters=len(clusters),
        meta=meta or {},
    )
