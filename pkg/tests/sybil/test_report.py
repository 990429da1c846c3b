import json

import numpy as np
import pytest

from sybilgraph.ingest.records import DatasetWindow
from sybilgraph.sybil import (
    REPORT_FIELDS,
    SybilClusterSet,
    filter_clusters,
    load_cluster_set,
    load_clustered_graph,
    load_similarity_graph,
    propagate_labels,
    reduce_graph,
    save_cluster_set,
    save_clustered_graph,
    save_similarity_graph,
    sociometric_report,
    write_cluster_csv,
    write_cluster_summary,
)
from sybilgraph.votegraph.builder import build_voting_graph

DAY = 86_400


@pytest.fixture
def run(small_graph):
    vectors = np.random.default_rng(0).normal(size=(7, 3))
    similarity = propagate_labels(small_graph, filter_clusters([[2, 4]]), vectors)
    clustered = reduce_graph(similarity, similarity.clusters)
    return small_graph, similarity, clustered


@pytest.fixture
def window():
    return DatasetWindow(start_date=0, end_date=400 * DAY, vote_count=8, proposal_count=3, voter_count=5)


def test_report_counts(run, window):
    original, similarity, clustered = run
    report = sociometric_report(original, similarity, clustered, similarity.clusters, window, {"seed": 1})
    data = report.to_dict()
    assert list(data) == ["meta", *REPORT_FIELDS]
    assert data["date_range"] == {"start_date": "1970-01-01", "end_date": "1971-02-05", "duration": "1 years and 35 days"}
    assert data["original_graph"] == {"nodes": 7, "edges": 8}
    assert data["similarity_graph"] == {"nodes": 7, "edges": 8}
    assert data["clustered_graph"] == {"nodes": 6, "edges": 8}
    assert data["known_voters"] == 2
    assert data["unknown_voters"] == 2
    assert data["potential_sybils"] == {"count": 2, "share_of_unknown_pct": 100.0}
    assert data["sybil_clusters"] == {"count": 1, "share_of_unknown_pct": 50.0}
    assert data["node_reduction"] == {"reduction_pct": 14.29, "nodes_removed": 1, "potential_sybils": 2}
    assert json.loads(report.to_json()) == data


def test_report_text_table(run, window):
    original, similarity, clustered = run
    text = sociometric_report(original, similarity, clustered, similarity.clusters, window).to_text()
    lines = text.splitlines()
    assert lines[0] == lines[2] == lines[-1]
    assert lines[1].startswith("Metric")
    assert len(lines) == 4 + 11
    assert "14.29% (1 nodes removed, 2 voters merged)" in text


def test_empty_run_has_zero_shares(small_votes, window):
    graph = build_voting_graph(small_votes, {"0xaa": "a", "0xab": "a", "0xbb": "b", "0xcc": "c", "0xdd": "d"})
    similarity = propagate_labels(graph, SybilClusterSet(), np.zeros((7, 2)))
    clustered = reduce_graph(similarity, SybilClusterSet())
    data = sociometric_report(graph, similarity, clustered, SybilClusterSet(), window).to_dict()
    assert data["unknown_voters"] == 0
    assert data["potential_sybils"]["share_of_unknown_pct"] == 0.0
    assert data["node_reduction"]["reduction_pct"] == 0.0


def test_graph_artifacts_round_trip(tmp_path, run):
    _, similarity, clustered = run
    meta = {"config_hash": "abc", "seed": 0}
    loaded_similarity, similarity_meta = load_similarity_graph(
        save_similarity_graph(tmp_path / "similarity.json", similarity, meta)
    )
    loaded_clustered, _ = load_clustered_graph(save_clustered_graph(tmp_path / "clustered.json", clustered, meta))
    clusters, _ = load_cluster_set(save_cluster_set(tmp_path / "clusters.json", similarity.clusters, meta))

    assert loaded_similarity.node_labels == similarity.node_labels
    assert loaded_similarity.clusters == similarity.clusters
    assert similarity_meta["config_hash"] == "abc"
    assert loaded_clustered.merge_map == clustered.merge_map
    assert loaded_clustered.edges == clustered.edges
    assert clusters == similarity.clusters


def test_cluster_exports(tmp_path, run):
    _, similarity, _ = run
    csv_text = write_cluster_csv(tmp_path / "clusters.csv", similarity.clusters).read_text()
    label = similarity.clusters.labels[0]
    assert csv_text.splitlines() == ["cluster_id,node_id,propagated_label", f"0,2,{label}", f"0,4,{label}"]
    summary = write_cluster_summary(tmp_path / "summary.txt", similarity.clusters).read_text()
    assert summary.splitlines()[0].startswith("Total clusters formed (excluding singletons)")
    assert summary.splitlines()[0].endswith("1")
