import numpy as np
import pytest

from sybilgraph.sybil import filter_clusters
from sybilgraph.synth import EntityType, GroundTruth, evaluate_recovery, evaluate_wallet_clusters, random_baseline_ari
from sybilgraph.votegraph.builder import build_voting_graph
from tests.conftest import vote


@pytest.fixture
def truth():
    return GroundTruth(
        wallet_entity={"s1": 10, "s2": 10, "s3": 10, "t1": 11, "t2": 11, "h1": 0},
        entity_types={10: EntityType.SYBIL, 11: EntityType.SYBIL, 0: EntityType.HONEST},
    )


def test_perfect_recovery(truth):
    scores = evaluate_wallet_clusters([["s1", "s2", "s3"], ["t1", "t2"]], truth)
    assert (scores.precision, scores.recall, scores.f1, scores.ari) == (1.0, 1.0, 1.0, 1.0)
    assert scores.sybil_wallets == 5


def test_partial_recovery(truth):
    scores = evaluate_wallet_clusters([["s1", "s2"], ["s3", "t1"]], truth)
    assert scores.precision == pytest.approx(0.5)
    assert scores.recall == pytest.approx(0.25)
    assert scores.f1 == pytest.approx(1 / 3)


def test_no_prediction_scores_zero(truth):
    scores = evaluate_wallet_clusters([], truth)
    assert (scores.precision, scores.recall, scores.f1) == (0.0, 0.0, 0.0)
    assert scores.ari == pytest.approx(0.0)


def test_scores_ignore_cluster_order(truth):
    a = evaluate_wallet_clusters([["s1", "s2"], ["t2", "t1", "s3"]], truth)
    b = evaluate_wallet_clusters([["t1", "s3", "t2"], ["s2", "s1"]], truth)
    assert a == b


def test_honest_wallets_are_counted_separately(truth):
    scores = evaluate_wallet_clusters([["s1", "s2", "h1", "0xunknown"]], truth)
    assert scores.honest_flagged == 1
    assert scores.precision == 1.0


def test_recovery_over_graph_nodes(truth):
    votes = [vote(w, "p1", 1_000 + i) for i, w in enumerate(["s1", "s2", "s3", "t1", "t2", "h1"])]
    graph = build_voting_graph(votes, {})
    # node ids: s1=0, p1=1, s2=2, s3=3, t1=4, t2=5, h1=6
    clusters = filter_clusters([[0, 2, 3], [4, 5]])
    scores = evaluate_recovery(clusters, truth, graph)
    assert scores.f1 == 1.0
    assert scores.to_dict()["honest_flagged"] == 0


def test_random_baseline_is_near_zero():
    wallet_entity = {f"w{i}": i // 5 for i in range(200)}
    truth = GroundTruth(wallet_entity=wallet_entity, entity_types={e: EntityType.SYBIL for e in range(40)})
    scores = [random_baseline_ari(truth, 40, seed=seed) for seed in range(10)]
    assert abs(np.mean(scores)) < 0.02
    assert random_baseline_ari(GroundTruth(), 5) == 0.0
