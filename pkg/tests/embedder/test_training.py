import json
import math
from dataclasses import replace

import numpy as np
import numpy.testing as npt
import pytest

from sybilgraph.embedder import (
    embed_all,
    engineer_features,
    grid_search,
    load_checkpoint,
    load_embeddings,
    save_checkpoint,
    save_embeddings,
    train,
    write_loss_curve,
    zero_params,
)
from sybilgraph.embedder.config import GridSpec
from sybilgraph.errors import (
    ArtifactMismatchError,
    DegenerateEmbeddingError,
    StageDependencyError,
    TrainingDivergedError,
)
from sybilgraph.votegraph import build_voting_graph
from tests.conftest import vote


def test_training_is_deterministic(small_graph, tiny_train_config):
    first = train(small_graph, tiny_train_config)
    second = train(small_graph, tiny_train_config)
    assert first.loss_curve == second.loss_curve
    for name in first.params.names():
        npt.assert_array_equal(first.params.blocks[name], second.params.blocks[name])


def test_loss_curve_has_one_point_per_epoch(small_graph, tiny_train_config):
    result = train(small_graph, tiny_train_config)
    assert [p.epoch for p in result.loss_curve] == [1, 2, 3]
    assert 1 <= result.best_epoch <= 3
    assert result.best_val_mse == min(p.val_mse for p in result.loss_curve)


def test_training_reduces_the_loss(small_graph, tiny_train_config):
    config = tiny_train_config
    config.epochs = 40
    curve = train(small_graph, config).loss_curve
    assert min(p.train_mse for p in curve[1:]) < curve[0].train_mse


def test_patience_stops_early(small_graph, tiny_train_config):
    tiny_train_config.epochs = 60
    tiny_train_config.patience = 2
    result = train(small_graph, tiny_train_config)
    stopped = len(result.loss_curve)
    assert stopped == 60 or stopped == result.best_epoch + 2


def test_grid_search_scores_every_point(small_graph, tiny_train_config):
    result = grid_search(small_graph, tiny_train_config)
    assert [row.embedding_dim for row in result.table] == [3, 4]
    best = min(result.table, key=lambda row: row.val_mse)
    assert result.best_config.embedding_dim == best.embedding_dim
    assert result.best_config.seed == tiny_train_config.seed


def test_embed_all_centers_columns(small_graph, tiny_train_config):
    features = engineer_features(small_graph, tiny_train_config)
    params = train(small_graph, tiny_train_config, features=features).params
    embeddings = embed_all(params, features)
    assert embeddings.shape == (7, 4)
    npt.assert_allclose(embeddings.vectors.mean(axis=0), 0.0, atol=1e-12)
    npt.assert_allclose(embeddings.std, embeddings.vectors.std(axis=0))


def test_embed_all_rejects_constant_embeddings(small_graph, tiny_train_config):
    features = engineer_features(small_graph, tiny_train_config)
    with pytest.raises(DegenerateEmbeddingError):
        embed_all(zero_params(tiny_train_config, features.feature_count), features)


def test_checkpoint_round_trip(tmp_path, small_graph, tiny_train_config):
    result = train(small_graph, tiny_train_config)
    path = save_checkpoint(tmp_path / "model.npz", result.params, tiny_train_config, {"seed": 0})
    params, config, meta = load_checkpoint(path)
    assert params.names() == result.params.names()
    for name in params.names():
        npt.assert_array_equal(params.blocks[name], result.params.blocks[name])
    assert config == tiny_train_config
    assert meta == {"seed": 0}


def test_embeddings_round_trip(tmp_path, small_graph, tiny_train_config):
    features = engineer_features(small_graph, tiny_train_config)
    embeddings = embed_all(train(small_graph, tiny_train_config, features=features).params, features)
    loaded, _ = load_embeddings(save_embeddings(tmp_path / "embeddings.npz", embeddings))
    npt.assert_array_equal(loaded.vectors, embeddings.vectors)
    assert loaded.dead_dimensions == embeddings.dead_dimensions


def test_missing_and_foreign_archives(tmp_path):
    with pytest.raises(StageDependencyError):
        load_checkpoint(tmp_path / "absent.npz")
    foreign = tmp_path / "foreign.npz"
    with foreign.open("wb") as handle:
        np.savez(handle, header=np.array(json.dumps({"format_version": 999})))
    with pytest.raises(ArtifactMismatchError):
        load_embeddings(foreign)


def test_loss_curve_csv(tmp_path, small_graph, tiny_train_config):
    path = write_loss_curve(tmp_path / "loss_curve.csv", train(small_graph, tiny_train_config).loss_curve)
    lines = [line for line in path.read_text().splitlines() if not line.startswith("#")]
    assert lines[0] == "epoch,train_mse,val_mse"
    assert len(lines) == 4


def test_retraining_the_grid_winner_reproduces_its_score(small_graph, tiny_train_config):
    result = grid_search(small_graph, tiny_train_config)
    winner = min(range(len(result.table)), key=lambda i: result.table[i].val_mse)
    assert result.best_config.init_seed == tiny_train_config.seed ^ winner
    assert train(small_graph, result.best_config).best_val_mse == result.table[winner].val_mse


def test_grid_search_skips_a_diverging_rate(small_graph, tiny_train_config):
    tiny_train_config.grid = GridSpec(embedding_dim=(4,), learning_rate=(1e200, 0.01), heads=(1,))
    tiny_train_config.epochs = 5
    result = grid_search(small_graph, tiny_train_config)
    assert [row.learning_rate for row in result.table] == [1e200, 0.01]
    assert result.table[0].val_mse == math.inf
    assert math.isfinite(result.table[1].val_mse)
    assert result.best_config.learning_rate == 0.01


def test_divergence_names_the_epoch(small_graph, tiny_train_config):
    tiny_train_config.learning_rate = 1e200
    tiny_train_config.epochs = 5
    with pytest.raises(TrainingDivergedError) as excinfo:
        train(small_graph, tiny_train_config)
    assert excinfo.value.epoch >= 2
    assert f"training diverged at epoch {excinfo.value.epoch}" in excinfo.value.message


def test_constant_features_are_learned(tiny_train_config):
    # 10 voters on 10 proposals, 20 nodes
    graph = build_voting_graph([vote(f"0x{i:02d}", f"p{i}", 1_000 + i) for i in range(10)], {})
    features = engineer_features(graph, tiny_train_config)
    assert features.node_count == 20
    features = replace(
        features,
        node_features=np.zeros_like(features.node_features),
        power_aggregate=np.zeros_like(features.power_aggregate),
    )
    tiny_train_config.epochs = 200
    curve = train(graph, tiny_train_config, features=features).loss_curve
    assert all(math.isfinite(p.train_mse) for p in curve)
    assert min(p.train_mse for p in curve) < 1e-3
