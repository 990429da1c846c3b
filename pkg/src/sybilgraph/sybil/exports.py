"""
On-disk forms of cluster sets, similarity graphs, and clustered graphs.
"""

from pathlib import Path
from typing import Any

from sybilgraph.artifacts import read_json, write_csv, write_json
from sybilgraph.sybil.clusters import SimilarityGraph, SybilClusterSet
from sybilgraph.sybil.reduce import ClusteredGraph
from sybilgraph.votegraph.cache import (
    graph_fields_from_dict,
    graph_to_dict,
    read_container,
    validate_graph,
    write_container,
)


def write_cluster_csv(path: str | Path, clusters: SybilClusterSet, meta: dict[str, Any] | None = None) -> Path:
    """Write one ``cluster_id,node_id,propagated_label`` row per member."""
    rows = (
        (index, node, clusters.labels[index] if index < len(clusters.labels) else "")
        for index, cluster in enumerate(clusters.clusters)
        for node in cluster
    )
    return write_csv(path, ("cluster_id", "node_id", "propagated_label"), rows, meta)


def write_cluster_size_histogram(
    path: str | Path, clusters: SybilClusterSet, meta: dict[str, Any] | None = None
) -> Path:
    return write_csv(path, ("size", "count"), clusters.size_histogram(), meta)


def write_cluster_summary(path: str | Path, clusters: SybilClusterSet) -> Path:
    """Aligned text form of :meth:`SybilClusterSet.summary_rows`."""
    rows = clusters.summary_rows()
    width = max(len(description) for description, _ in rows)
    text = "".join(f"{description:<{width}}  {value}\n" for description, value in rows)
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    return path


def save_cluster_set(path: str | Path, clusters: SybilClusterSet, meta: dict[str, Any]) -> Path:
    return write_json(path, clusters.to_dict(), meta)


def load_cluster_set(path: str | Path) -> tuple[SybilClusterSet, dict[str, Any]]:
    """
    Raises
    ------
    StageDependencyError
        If the file does not exist.
    """
    data = read_json(path)
    return SybilClusterSet.from_dict(data), data.get("meta", {})


def save_similarity_graph(path: str | Path, graph: SimilarityGraph, meta: dict[str, Any]) -> Path:
    return write_container(path, {**graph_to_dict(graph), "clusters": graph.clusters.to_dict()}, meta)


def load_similarity_graph(path: str | Path) -> tuple[SimilarityGraph, dict[str, Any]]:
    """
    Raises
    ------
    StageDependencyError
        If the file does not exist.
    GraphValidationError
        If the stored graph is invalid.
    """
    data = read_container(path)
    graph = SimilarityGraph(
        **graph_fields_from_dict(data), clusters=SybilClusterSet.from_dict(data["clusters"])
    )
    validate_graph(graph)
    return graph, data.get("meta", {})


def save_clustered_graph(path: str | Path, graph: ClusteredGraph, meta: dict[str, Any]) -> Path:
    merge_map = [[node, merged] for node, merged in sorted(graph.merge_map.items())]
    return write_container(path, {**graph_to_dict(graph), "merge_map": merge_map}, meta)


def load_clustered_graph(path: str | Path) -> tuple[ClusteredGraph, dict[str, Any]]:
    """
    Raises
    ------
    StageDependencyError
        If the file does not exist.
    GraphValidationError
        If the stored graph is invalid.
    """
    data = read_container(path)
    merge_map = {int(node): int(merged) for node, merged in data["merge_map"]}
    graph = ClusteredGraph(**graph_fields_from_dict(data), merge_map=merge_map)
    validate_graph(graph)
    return graph, data.get("meta", {})
