import numpy as np
import pytest

from sybilgraph.errors import ClusterOverlapError, GraphValidationError
from sybilgraph.sybil import ClusterFilterPolicy, SybilClusterSet, filter_clusters, propagate_labels, reduce_graph
from sybilgraph.votegraph.builder import build_voting_graph
from sybilgraph.votegraph.cache import validate_graph
from tests.conftest import vote


def _similarity(graph, clusters):
    vectors = np.random.default_rng(0).normal(size=(graph.node_count, 3))
    return propagate_labels(graph, clusters, vectors)


def test_merges_cluster_into_smallest_member(small_graph):
    clusters = filter_clusters([[2, 4]])
    similarity = _similarity(small_graph, clusters)
    clustered = reduce_graph(similarity, similarity.clusters)

    assert clustered.merge_map == {0: 0, 1: 1, 2: 2, 3: 3, 4: 2, 5: 4, 6: 5}
    assert clustered.node_count == 6
    assert clustered.nodes_removed == 1
    merged = clustered.voter(2)
    assert merged.wallet_addresses == frozenset({"0xcc", "0xdd"})
    assert merged.vote_count == 5
    assert merged.total_power == 6.0
    assert merged.cluster_label == similarity.clusters.labels[0]
    validate_graph(clustered)


def test_reduction_invariants_on_random_graphs():
    rng = np.random.default_rng(12)
    votes = [
        vote(f"0x{int(rng.integers(40)):02x}", f"p{int(rng.integers(15))}", 1_000 + i, power=float(rng.integers(1, 9)))
        for i in range(300)
    ]
    graph = build_voting_graph(votes, {"0x00": "zero.eth", "0x01": "one.eth"})
    unknown = graph.unknown_voter_ids
    clusters = filter_clusters(
        [unknown[i : i + 3] for i in range(0, len(unknown) - 3, 3)],
        ClusterFilterPolicy(drop_large=False),
    )
    similarity = _similarity(graph, clusters)
    clustered = reduce_graph(similarity, similarity.clusters)

    assert clustered.edge_count == graph.edge_count
    assert clustered.node_count == graph.node_count - sum(size - 1 for size in clusters.sizes)
    assert clustered.total_power() == pytest.approx(graph.total_power())
    assert sorted(e.timestamp for e in clustered.edges) == sorted(e.timestamp for e in graph.edges)
    assert set(clustered.merge_map) == set(range(graph.node_count))


def test_empty_cluster_set_is_identity(small_graph):
    similarity = _similarity(small_graph, SybilClusterSet())
    clustered = reduce_graph(similarity, SybilClusterSet())
    assert clustered.node_count == small_graph.node_count
    assert clustered.edges == small_graph.edges


def test_rejects_overlapping_clusters(small_graph):
    similarity = _similarity(small_graph, SybilClusterSet())
    with pytest.raises(ClusterOverlapError):
        reduce_graph(similarity, SybilClusterSet(clusters=[(2, 4), (4,)]))


@pytest.mark.parametrize("cluster", [(0, 2), (1, 2)])
def test_rejects_known_voters_and_proposals(small_graph, cluster):
    similarity = _similarity(small_graph, SybilClusterSet())
    with pytest.raises(GraphValidationError):
        reduce_graph(similarity, SybilClusterSet(clusters=[cluster]))
