import json
import logging

import pytest
import yaml

from sybilgraph.cli import PIPELINE_ORDER, STAGES, build_parser, main, run_subcommand
from sybilgraph.cli.config import PipelineConfig
from sybilgraph.cli.main import CONFIG_ENV
from sybilgraph.errors import ConfigError
from sybilgraph.log import reset_logging


@pytest.fixture(autouse=True)
def no_env_config(monkeypatch):
    monkeypatch.delenv(CONFIG_ENV, raising=False)


def test_every_stage_has_a_subcommand():
    parser = build_parser()
    for name in STAGES:
        assert parser.parse_args([name]).command == name
    assert set(PIPELINE_ORDER) < set(STAGES)


def test_stage_flags_are_scoped():
    parser = build_parser()
    args = parser.parse_args(["pipeline", "--k", "5", "--epochs", "3", "--votes", "v.csv", "--seed", "2"])
    assert (args.k, args.epochs, args.votes, args.seed) == (5, 3, "v.csv", 2)
    with pytest.raises(SystemExit):
        parser.parse_args(["stats", "--k", "5"])


def test_no_command_prints_help(capsys):
    assert main([]) == 2
    assert "usage:" in capsys.readouterr().out


def test_missing_input_is_a_usage_error(tmp_path, capsys):
    assert main(["ingest", "--out", str(tmp_path)]) == 2
    assert "error [usage]: paths.votes is required" in capsys.readouterr().out


def test_missing_upstream_artifact(tmp_path, capsys):
    assert main(["stats", "--out", str(tmp_path)]) == 3
    assert "error [stage dependency]" in capsys.readouterr().out


def test_bad_config_file(tmp_path, capsys):
    config = tmp_path / "run.yaml"
    config.write_text(yaml.safe_dump({"cluster": {"clusters": 3}}))
    assert main(["stats", "--config", str(config)]) == 2
    assert "unknown config key: cluster.clusters" in capsys.readouterr().out


def test_config_from_environment(tmp_path, monkeypatch, capsys):
    config = tmp_path / "run.yaml"
    config.write_text(yaml.safe_dump({"paths": {"out": str(tmp_path / "env-out")}, "seed": 3}))
    monkeypatch.setenv(CONFIG_ENV, str(config))
    assert main(["synth"]) == 0
    assert (tmp_path / "env-out" / "synth" / "truth.csv").exists()


def test_unknown_stage_name():
    with pytest.raises(ConfigError, match="unknown subcommand"):
        run_subcommand("plot", PipelineConfig())


def _small_run(tmp_path, out):
    synth_dir = tmp_path / "data" / "synth"
    document = {
        "seed": 11,
        "paths": {
            "votes": str(synth_dir / "votes.csv"),
            "proposals": str(synth_dir / "proposals.csv"),
            "registry": str(synth_dir / "registry.csv"),
            "truth": str(synth_dir / "truth.csv"),
            "out": str(out),
        },
        "train": {
            "embedding_dim": 6,
            "hidden_dim": 6,
            "sequence_length": 4,
            "heads": 2,
            "head_dim": 3,
            "learning_rate": 0.01,
            "epochs": 8,
            "grid": {"embedding_dim": [4, 6], "learning_rate": [0.01], "heads": [1]},
        },
        "cluster": {"points_per_cluster": 3},
        "synth": {
            "honest_voters": 40,
            "sybil_entities": 5,
            "wallets_per_sybil": [3, 3],
            "proposals": 25,
            "votes_per_voter": [4, 8],
            "known_fraction": 0.25,
        },
    }
    config = tmp_path / f"{out.name}.yaml"
    config.write_text(yaml.safe_dump(document))
    return str(config)


@pytest.mark.slow
def test_pipeline_end_to_end(tmp_path):
    config = _small_run(tmp_path, tmp_path / "run")
    assert main(["synth", "--config", config, "--out", str(tmp_path / "data")]) == 0
    assert main(["pipeline", "--config", config, "--grid"]) == 0
    assert main(["eval", "--config", config]) == 0

    out = tmp_path / "run"
    for name in ("graph.json", "stats.json", "model.npz", "grid_search.csv", "embeddings.npz",
                 "clusters.json", "similarity.json", "clustered_graph.json", "report.json",
                 "report.txt", "evaluation.json"):
        assert (out / name).exists(), name

    comment, *loss_lines = (out / "loss_curve.csv").read_text().splitlines()
    assert comment.startswith("# config_hash=")
    assert loss_lines[0] == "epoch,train_mse,val_mse"
    assert [line.split(",")[0] for line in loss_lines[1:]] == [str(e) for e in range(1, 9)]

    clusters = json.loads((out / "clusters.json").read_text())
    _, *cluster_lines = (out / "clusters.csv").read_text().splitlines()
    assert cluster_lines[0] == "cluster_id,node_id,propagated_label"
    assert len(cluster_lines) - 1 == sum(len(members) for members in clusters["clusters"])

    report = json.loads((out / "report.json").read_text())
    assert report["original_graph"]["edges"] == report["clustered_graph"]["edges"]
    assert report["node_reduction"]["nodes_removed"] == (
        report["potential_sybils"]["count"] - report["sybil_clusters"]["count"]
    )
    evaluation = json.loads((out / "evaluation.json").read_text())
    assert 0.0 <= evaluation["precision"] <= 1.0
    assert evaluation["sybil_wallets"] == 15


@pytest.mark.slow
def test_pipeline_is_deterministic(tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"
    config_a, config_b = _small_run(tmp_path, first), _small_run(tmp_path, second)
    assert main(["synth", "--config", config_a, "--out", str(tmp_path / "data")]) == 0
    assert main(["pipeline", "--config", config_a]) == 0
    assert main(["pipeline", "--config", config_b]) == 0

    def without_created_at(path):
        document = json.loads(path.read_text())
        document["meta"].pop("created_at")
        return document

    for name in ("graph.json", "clusters.json", "similarity.json", "clustered_graph.json", "report.json"):
        assert without_created_at(first / name) == without_created_at(second / name), name
    assert (first / "clusters.csv").read_text() == (second / "clusters.csv").read_text()


@pytest.mark.slow
def test_report_refuses_artifacts_from_another_config(tmp_path, capsys):
    config = _small_run(tmp_path, tmp_path / "run")
    assert main(["synth", "--config", config, "--out", str(tmp_path / "data")]) == 0
    assert main(["pipeline", "--config", config]) == 0
    assert main(["report", "--config", config, "--seed", "99"]) == 3
    assert "was produced with config hash" in capsys.readouterr().out


def test_repeated_runs_keep_one_log_handler(tmp_path):
    logger = logging.getLogger("sybilgraph")
    for _ in range(3):
        main(["stats", "--out", str(tmp_path)])
    assert len(logger.handlers) == 1
    reset_logging()
    assert logger.handlers == []
