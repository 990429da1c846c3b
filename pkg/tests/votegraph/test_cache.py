import json
from dataclasses import replace

import pytest

from sybilgraph.errors import GraphValidationError, StageDependencyError
from sybilgraph.votegraph import load_graph, save_graph, validate_graph


def test_saved_graph_loads_equal(tmp_path, small_graph):
    path = save_graph(small_graph, tmp_path / "graph.json", meta={"seed": 3})
    assert load_graph(path) == small_graph
    document = json.loads(path.read_text())
    assert document["format_version"] == 1
    assert document["meta"] == {"seed": 3}


def test_load_missing_graph(tmp_path):
    with pytest.raises(StageDependencyError, match="graph.json"):
        load_graph(tmp_path / "graph.json")


def test_load_rejects_other_format_version(tmp_path, small_graph):
    path = save_graph(small_graph, tmp_path / "graph.json")
    document = json.loads(path.read_text())
    document["format_version"] = 99
    path.write_text(json.dumps(document))
    with pytest.raises(GraphValidationError, match="format_version"):
        load_graph(path)


def test_validate_graph_accepts_built_graph(small_graph):
    validate_graph(small_graph)


def test_validate_graph_vote_count_mismatch(small_graph):
    voters = [replace(v, vote_count=v.vote_count + 1) if v.node_id == 2 else v for v in small_graph.voters]
    with pytest.raises(GraphValidationError, match="vote_count"):
        validate_graph(replace(small_graph, voters=voters))


def test_validate_graph_edge_between_voters(small_graph):
    edges = [replace(small_graph.edges[0], proposal=2), *small_graph.edges[1:]]
    with pytest.raises(GraphValidationError, match="edge 0"):
        validate_graph(replace(small_graph, edges=edges))


def test_validate_graph_sparse_ids(small_graph):
    proposals = [replace(p, node_id=p.node_id + 10) if p.node_id == 6 else p for p in small_graph.proposals]
    with pytest.raises(GraphValidationError, match="dense"):
        validate_graph(replace(small_graph, proposals=proposals))
