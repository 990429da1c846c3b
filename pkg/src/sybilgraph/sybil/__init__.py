"""
Sybil module.

Clusters node embeddings with an exact L2 index and k-means, filters the
clusters, propagates labels, and produces the reduced graph and reports.

Classes
-------
FlatIndex
    Exact squared-L2 nearest-neighbor index.
KMeansResult
    Centroids, assignments, and objective history of a k-means run.
SybilClusterSet
    Filtered clusters of Unknown voters with their labels.
SimilarityGraph, ClusteredGraph
    The labeled and the reduced voting graphs.
Report
    Sociometric results of a run.
"""

from sybilgraph.sybil.clusters import (
    ClusterStats,
    FilterSnapshot,
    SimilarityGraph,
    SybilClusterSet,
    clusters_from_assignments,
    filter_clusters,
    normalize_clusters,
    propagate_labels,
)
from sybilgraph.sybil.config import ClusterConfig, ClusterFilterPolicy
from sybilgraph.sybil.exports import (
    load_cluster_set,
    load_clustered_graph,
    load_similarity_graph,
    save_cluster_set,
    save_clustered_graph,
    save_similarity_graph,
    write_cluster_csv,
    write_cluster_size_histogram,
    write_cluster_summary,
)
from sybilgraph.sybil.index import FlatIndex, build_index, knn_search, pairwise_sq_distances
from sybilgraph.sybil.kmeans import KMeansResult, kmeans_cluster, kmeans_plusplus
from sybilgraph.sybil.reduce import ClusteredGraph, reduce_graph
from sybilgraph.sybil.report import REPORT_FIELDS, GraphSize, Report, sociometric_report

__all__ = [
    "ClusterConfig",
    "ClusterFilterPolicy",
    "FlatIndex",
    "build_index",
    "knn_search",
    "pairwise_sq_distances",
    "KMeansResult",
    "kmeans_cluster",
    "kmeans_plusplus",
    "ClusterStats",
    "FilterSnapshot",
    "SybilClusterSet",
    "SimilarityGraph",
    "clusters_from_assignments",
    "filter_clusters",
    "normalize_clusters",
    "propagate_labels",
    "ClusteredGraph",
    "reduce_graph",
    "GraphSize",
    "Report",
    "REPORT_FIELDS",
    "sociometric_report",
    "write_cluster_csv",
    "write_cluster_size_histogram",
    "write_cluster_summary",
    "save_cluster_set",
    "load_cluster_set",
    "save_similarity_graph",
    "load_similarity_graph",
    "save_clustered_graph",
    "load_clustered_graph",
]
