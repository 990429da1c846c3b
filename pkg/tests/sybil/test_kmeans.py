import numpy as np
import pytest
from sklearn.metrics import adjusted_rand_score

from sybilgraph.errors import IndexParameterError
from sybilgraph.sybil import kmeans_cluster, kmeans_plusplus


@pytest.mark.parametrize("instance", range(100))
def test_objective_never_increases(instance):
    rng = np.random.default_rng(instance)
    n = int(rng.integers(2, 60))
    points = rng.normal(size=(n, int(rng.integers(1, 5))))
    k = int(rng.integers(1, min(n, 8) + 1))
    result = kmeans_cluster(points, k, seed=instance)
    history = np.array(result.objective_history)
    assert (np.diff(history) <= 1e-9 * max(1.0, history[0])).all()
    assert result.objective == history[-1]
    assert result.assignments.shape == (n,)


def test_converged_assignment_is_a_fixed_point():
    points = np.random.default_rng(1).normal(size=(80, 3))
    result = kmeans_cluster(points, 5, seed=1)
    assert result.iterations_run < 300
    distances = ((points[:, None, :] - result.centroids[None, :, :]) ** 2).sum(axis=2)
    assert (np.argmin(distances, axis=1) == result.assignments).all()


def test_k_equals_n_has_zero_objective():
    points = np.random.default_rng(2).normal(size=(9, 2))
    result = kmeans_cluster(points, 9)
    assert result.objective == 0.0
    assert sorted(result.assignments.tolist()) == list(range(9))


def test_recovers_two_separated_blobs():
    rng = np.random.default_rng(3)
    points = np.vstack([rng.normal(0.0, 0.1, (30, 2)), rng.normal(10.0, 0.1, (30, 2))])
    truth = [0] * 30 + [1] * 30
    result = kmeans_cluster(points, 2, seed=3)
    assert adjusted_rand_score(truth, result.assignments) == 1.0


def test_seeded_runs_are_identical():
    points = np.random.default_rng(4).normal(size=(50, 4))
    a, b = kmeans_cluster(points, 6, seed=9), kmeans_cluster(points, 6, seed=9)
    np.testing.assert_array_equal(a.assignments, b.assignments)
    np.testing.assert_array_equal(a.centroids, b.centroids)


def test_plusplus_falls_back_on_duplicate_points():
    points = np.zeros((4, 2))
    chosen = kmeans_plusplus(points, 3, np.random.default_rng(0))
    assert len(set(chosen.tolist())) == 3


@pytest.mark.parametrize("k", [0, 6])
def test_k_out_of_range(k):
    with pytest.raises(IndexParameterError):
        kmeans_cluster(np.ones((5, 2)), k)
