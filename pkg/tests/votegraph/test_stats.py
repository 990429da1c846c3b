import pytest

from sybilgraph.votegraph import VotingGraph, simple_projection, sociometrics


def test_sociometrics_counts(small_graph):
    report = sociometrics(small_graph, top_k=3)
    assert (report.node_count, report.edge_count) == (7, 8)
    assert (report.voter_count, report.proposal_count) == (4, 3)
    assert (report.known_voters, report.unknown_voters) == (2, 2)
    assert report.density == pytest.approx(7 / 12)
    assert report.degree_histogram == {1: 1, 2: 4, 3: 1, 4: 1}
    assert report.degree_histogram_rows() == [(1, 1), (2, 4), (3, 1), (4, 1)]


def test_sociometrics_centralities(small_graph):
    report = sociometrics(small_graph, top_k=3)
    assert len(report.top_betweenness) == 3
    values = [value for _, value in report.top_betweenness]
    assert values == sorted(values, reverse=True)
    # p2 joins alice, 0xcc, and 0xdd and bridges to p1 and p3
    assert report.top_betweenness[0][0] == 3


def test_simple_projection_collapses_parallel_votes(small_graph):
    projection = simple_projection(small_graph)
    assert projection.number_of_nodes() == 7
    assert projection.number_of_edges() == 7


def test_sociometrics_empty_graph():
    report = sociometrics(VotingGraph())
    assert report.node_count == 0
    assert report.degree_histogram == {}
    assert report.to_dict()["top_betweenness"] == []
