import numpy as np
import numpy.testing as npt

from sybilgraph.embedder import FEATURE_NAMES, engineer_features, split_masks, zscore

DAY = 86_400.0


def test_raw_features_of_a_voter_and_a_proposal(small_graph, tiny_train_config):
    features = engineer_features(small_graph, tiny_train_config)
    assert features.raw_node_features.shape == (7, len(FEATURE_NAMES))

    alice = features.raw_node_features[0]
    npt.assert_allclose(
        alice,
        [np.log1p(2), np.log1p(5.0), np.log1p(2), 200 / DAY, 200 / DAY, 2, 0, 1],
    )
    p2 = features.raw_node_features[3]
    npt.assert_allclose(p2[:3], [np.log1p(3), np.log1p(6.0), np.log1p(4)])
    assert p2[5] == 1
    assert p2[6] == 1
    assert p2[7] == 0


def test_node_features_are_zscored(small_graph, tiny_train_config):
    features = engineer_features(small_graph, tiny_train_config)
    npt.assert_allclose(features.node_features.mean(axis=0), 0.0, atol=1e-12)
    assert features.power_aggregate.shape == (7, 1)


def test_edge_arrays_keep_parallel_votes(small_graph, tiny_train_config):
    features = engineer_features(small_graph, tiny_train_config)
    assert features.edge_index.shape == (8, 2)
    assert features.edge_power.sum() == 16.0
    assert ((features.edge_index == [2, 3]).all(axis=1)).sum() == 2


def test_temporal_sequence_holds_recent_votes(small_graph, tiny_train_config):
    features = engineer_features(small_graph, tiny_train_config)
    assert features.temporal_sequences.shape == (7, 3, 3)
    npt.assert_allclose(
        features.temporal_sequences[2],
        [[0.0, np.log1p(1.0), 1], [400 / DAY, np.log1p(1.0), 1], [200 / DAY, np.log1p(1.0), 0]],
    )
    # a single vote is front-padded with zeros
    npt.assert_allclose(features.temporal_sequences[5][:2], 0.0)
    npt.assert_allclose(features.temporal_sequences[5][2], [0.0, np.log1p(5.0), 2])
    npt.assert_array_equal(features.temporal_sequences[1], 0.0)


def test_split_masks_partition_voters(small_graph, tiny_train_config):
    features = engineer_features(small_graph, tiny_train_config)
    masks = np.stack([features.train_mask, features.val_mask, features.test_mask])
    assert (masks.sum(axis=0) <= 1).all()
    assert sorted(np.flatnonzero(masks.any(axis=0))) == [0, 2, 4, 5]
    assert features.train_mask.sum() == 3


def test_split_masks_are_seeded():
    a = split_masks(list(range(20)), 25, (0.5, 0.25, 0.25), seed=3)
    b = split_masks(list(range(20)), 25, (0.5, 0.25, 0.25), seed=3)
    for left, right in zip(a, b):
        npt.assert_array_equal(left, right)
    assert [m.sum() for m in a] == [10, 5, 5]


def test_zscore_zeroes_constant_columns():
    out = zscore(np.array([[1.0, 5.0], [3.0, 5.0]]))
    npt.assert_allclose(out, [[-1.0, 0.0], [1.0, 0.0]])
