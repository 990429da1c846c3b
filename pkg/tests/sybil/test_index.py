import numpy as np
import numpy.testing as npt
import pytest

from sybilgraph.errors import IndexParameterError, NonFiniteError, ShapeError
from sybilgraph.sybil import build_index, knn_search


def brute_force_knn(vectors, ids, queries, k):
    neighbors, distances = [], []
    for query in queries:
        scored = sorted(
            (float(np.sum((query - vector) ** 2)), int(node)) for vector, node in zip(vectors, ids)
        )[:k]
        distances.append([d for d, _ in scored])
        neighbors.append([node for _, node in scored])
    return np.array(neighbors), np.array(distances)


@pytest.mark.parametrize("instance", range(50))
def test_matches_brute_force(instance):
    rng = np.random.default_rng(instance)
    n, d = int(rng.integers(1, 501)), int(rng.integers(1, 65))
    vectors = rng.normal(size=(n, d))
    ids = rng.permutation(np.arange(100, 100 + n))
    queries = rng.normal(size=(rng.integers(1, 10), d))
    k = int(rng.integers(1, n + 1))

    got_ids, got_dists = knn_search(build_index(vectors, ids), queries, k)
    want_ids, want_dists = brute_force_knn(vectors, ids, queries, k)
    npt.assert_array_equal(got_ids, want_ids)
    npt.assert_allclose(got_dists, want_dists, rtol=1e-12, atol=1e-12)


def test_ties_go_to_the_lower_id():
    vectors = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
    index = build_index(vectors, ids=[7, 3, 5, 1])
    ids, dists = knn_search(index, np.zeros((1, 2)), 3)
    assert ids.tolist() == [[1, 3, 5]]
    npt.assert_array_equal(dists, [[1.0, 1.0, 1.0]])


def test_self_query_returns_itself_first():
    vectors = np.random.default_rng(0).normal(size=(12, 3))
    ids, dists = knn_search(build_index(vectors), vectors, 1)
    assert ids.ravel().tolist() == list(range(12))
    npt.assert_array_equal(dists, 0.0)


def test_index_is_read_only_copy():
    vectors = np.ones((3, 2))
    index = build_index(vectors)
    vectors[0, 0] = 5.0
    assert index.vectors[0, 0] == 1.0
    with pytest.raises(ValueError):
        index.vectors[0, 0] = 2.0


@pytest.mark.parametrize("k", [0, 4])
def test_k_out_of_range(k):
    with pytest.raises(IndexParameterError):
        knn_search(build_index(np.ones((3, 2))), np.ones((1, 2)), k)


def test_bad_inputs():
    with pytest.raises(NonFiniteError):
        build_index(np.array([[np.nan, 0.0]]))
    with pytest.raises(IndexParameterError):
        build_index(np.ones((3, 2)), ids=[1, 2])
    with pytest.raises(ShapeError):
        knn_search(build_index(np.ones((3, 2))), np.ones((1, 3)), 1)
    with pytest.raises(NonFiniteError):
        knn_search(build_index(np.ones((3, 2))), np.array([[np.inf, 0.0]]), 1)
