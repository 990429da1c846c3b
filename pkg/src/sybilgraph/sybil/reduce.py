"""
Merge each sybil cluster into one voter node.
"""

from dataclasses import dataclass, field, replace

from sybilgraph.errors import ClusterOverlapError, GraphValidationError
from sybilgraph.log import get_logger
from sybilgraph.sybil.clusters import SimilarityGraph, SybilClusterSet
from sybilgraph.votegraph.cache import validate_graph
from sybilgraph.votegraph.models import VoterNode, VotingGraph

logger = get_logger(__name__)


@dataclass
class ClusteredGraph(VotingGraph):
    """
    Voting graph with every sybil cluster merged into a single voter.

    Parameters
    ----------
    merge_map : dict[int, int]
        Node id in the similarity graph to node id in this graph, for every
        node.
    """

    merge_map: dict[int, int] = field(default_factory=dict)

    @property
    def nodes_removed(self) -> int:
        return len(self.merge_map) - self.node_count


def _check_clusters(graph: VotingGraph, clusters: SybilClusterSet) -> None:
    seen: set[int] = set()
    for index, cluster in enumerate(clusters.clusters):
        for node in cluster:
            if node in seen:
                raise ClusterOverlapError(f"node {node} appears in more than one cluster (cluster {index})")
            if not graph.is_voter(node):
                raise GraphValidationError(f"cluster {index} member {node} is not a voter node")
            if graph.voter(node).is_known:
                raise GraphValidationError(f"cluster {index} member {node} is a Known voter")
            seen.add(node)


def reduce_graph(similarity: SimilarityGraph, clusters: SybilClusterSet) -> ClusteredGraph:
    """
    Merge every cluster into one node and retarget the edges.

    Node ids are reassigned densely in ascending order of the original ids;
    a merged node takes the position of its smallest member. Edges keep their
    order and attributes, and parallel edges stay separate.

    Parameters
    ----------
    similarity : SimilarityGraph
        Graph with propagated cluster labels.
    clusters : SybilClusterSet
        Clusters to merge.

    Returns
    -------
    ClusteredGraph
        Graph with ``node_count - sum(size - 1)`` nodes and every edge.

    Raises
    ------
    ClusterOverlapError
        If two clusters share a node.
    GraphValidationError
        If a cluster member is not an Unknown voter of ``similarity``.
    """
    _check_clusters(similarity, clusters)
    labels = clusters.labels or similarity.clusters.labels
    cluster_of = clusters.cluster_of()
    representative = [cluster[0] for cluster in clusters.clusters]

    merge_map: dict[int, int] = {}
    next_id = 0
    for node in range(similarity.node_count):
        index = cluster_of.get(node)
        if index is None or representative[index] == node:
            merge_map[node] = next_id
            next_id += 1
    for node, index in cluster_of.items():
        merge_map[node] = merge_map[representative[index]]

    voters: list[VoterNode] = []
    for voter in similarity.voters:
        index = cluster_of.get(voter.node_id)
        if index is None:
            voters.append(replace(voter, node_id=merge_map[voter.node_id]))
        elif representative[index] == voter.node_id:
            members = [similarity.voter(node) for node in clusters.clusters[index]]
            voters.append(
                VoterNode(
                    node_id=merge_map[voter.node_id],
                    wallet_addresses=frozenset().union(*(m.wallet_addresses for m in members)),
                    total_power=sum(m.total_power for m in members),
                    vote_count=sum(m.vote_count for m in members),
                    persistent_name=None,
                    cluster_label=labels[index] if index < len(labels) else None,
                )
            )

    clustered = ClusteredGraph(
        voters=sorted(voters, key=lambda v: v.node_id),
        proposals=[replace(p, node_id=merge_map[p.node_id]) for p in similarity.proposals],
        edges=[
            replace(e, voter=merge_map[e.voter], proposal=merge_map[e.proposal])
            for e in similarity.edges
        ],
        label_index={name: merge_map[node] for name, node in similarity.label_index.items()},
        merge_map=merge_map,
    )
    validate_graph(clustered)
    logger.info(
        "Reduced %d nodes to %d (%d clusters), %d edges kept",
        similarity.node_count,
        clustered.node_count,
        len(clusters),
        clustered.edge_count,
    )
    return clustered
