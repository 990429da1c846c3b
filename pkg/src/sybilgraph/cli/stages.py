"""
Pipeline stages behind the CLI subcommands.

Every stage reads its inputs from the output directory of the stages before
it and writes its artifacts there. A stage is a pure function of its input
artifacts and the run config; only the ``created_at`` meta field varies
between reruns.
"""

from collections.abc import Callable
from dataclasses import asdict
from pathlib import Path
from typing import Any

from sybilgraph.artifacts import check_config_hash, read_json, write_csv, write_json
from sybilgraph.cli.config import PipelineConfig
from sybilgraph.embedder import (
    embed_all,
    engineer_features,
    grid_search,
    load_checkpoint,
    load_embeddings,
    save_checkpoint,
    save_embeddings,
    train,
    write_grid_table,
    write_loss_curve,
)
from sybilgraph.errors import ConfigError
from sybilgraph.ingest import (
    DatasetWindow,
    RecordFormat,
    duration_histogram,
    filter_proposals,
    parse_proposals,
    parse_registry,
    parse_votes,
    restrict_votes_to_proposals,
    window_and_sort,
)
from sybilgraph.log import get_logger
from sybilgraph.sybil import (
    filter_clusters,
    kmeans_cluster,
    load_cluster_set,
    load_clustered_graph,
    load_similarity_graph,
    normalize_clusters,
    propagate_labels,
    reduce_graph,
    save_cluster_set,
    save_clustered_graph,
    save_similarity_graph,
    sociometric_report,
    write_cluster_csv,
    write_cluster_size_histogram,
    write_cluster_summary,
)
from sybilgraph.synth import evaluate_recovery, generate_dataset, random_baseline_ari, read_truth, write_dataset
from sybilgraph.votegraph import VotingGraph, build_voting_graph, save_graph, sociometrics
from sybilgraph.votegraph.cache import graph_fields_from_dict, read_container, validate_graph

logger = get_logger(__name__)

VOTES = "votes.json"
WINDOW = "window.json"
GRAPH = "graph.json"
DIAGNOSTICS = "ingest_diagnostics.json"
DURATIONS = "proposal_durations.csv"
DURATIONS_FILTERED = "proposal_durations_filtered.csv"
STATS = "stats.json"
DEGREES = "degree_histogram.csv"
CHECKPOINT = "model.npz"
LOSS_CURVE = "loss_curve.csv"
GRID_TABLE = "grid_search.csv"
EMBEDDINGS = "embeddings.npz"
CLUSTERS = "clusters.json"
CLUSTERS_CSV = "clusters.csv"
CLUSTER_SIZES = "cluster_sizes.csv"
CLUSTER_SUMMARY = "cluster_summary.txt"
SIMILARITY = "similarity.json"
CLUSTERED = "clustered_graph.json"
REPORT_JSON = "report.json"
REPORT_TEXT = "report.txt"
EVALUATION = "evaluation.json"
SYNTH_DIR = "synth"

HISTOGRAM_COLUMNS = ("bin_start", "bin_end", "count")

Stage = Callable[[PipelineConfig], list[Path]]


def _out(config: PipelineConfig) -> Path:
    out = config.paths.out
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_graph(path: Path) -> tuple[VotingGraph, dict[str, Any]]:
    data = read_container(path)
    graph = VotingGraph(**graph_fields_from_dict(data))
    validate_graph(graph)
    return graph, data.get("meta", {})


def _diagnostics(parsed) -> dict[str, Any]:
    return {
        "parsed": len(parsed.records),
        "malformed": parsed.malformed_count,
        "diagnostics": [asdict(d) for d in parsed.diagnostics],
    }


def run_ingest(config: PipelineConfig) -> list[Path]:
    """
    Parse, filter, and window the inputs, then build the voting graph.

    Raises
    ------
    ConfigError
        If an input path is unset or missing.
    """
    out = _out(config)
    meta = config.meta()
    votes_path = config.paths.require("votes")
    proposals_path = config.paths.require("proposals")
    registry = parse_registry(config.paths.require("registry")) if config.paths.registry else {}

    votes = parse_votes(votes_path, RecordFormat.from_path(votes_path))
    proposals = parse_proposals(proposals_path, RecordFormat.from_path(proposals_path))
    filtered = filter_proposals(
        proposals.records, config.ingest.min_duration, config.ingest.max_duration
    )
    restricted = restrict_votes_to_proposals(
        votes.records,
        filtered.kept,
        listed=proposals.records,
        keep_unknown=config.ingest.keep_unknown_proposals,
    )
    windowed, window = window_and_sort(restricted, *config.ingest.window)
    graph = build_voting_graph(windowed, registry)

    bins = config.ingest.histogram_bins
    written = [
        write_json(out / VOTES, {"votes": [asdict(v) for v in windowed]}, meta),
        write_json(out / WINDOW, {"window": window.to_dict()}, meta),
        save_graph(graph, out / GRAPH, meta),
        write_json(
            out / DIAGNOSTICS,
            {
                "votes": _diagnostics(votes),
                "proposals": _diagnostics(proposals),
                "proposals_kept": len(filtered.kept),
                "proposals_rejected": filtered.rejected_count,
                "votes_on_rejected_proposals": len(votes.records) - len(restricted),
                "votes_outside_window": len(restricted) - len(windowed),
                "registry_entries": len(registry),
            },
            meta,
        ),
        write_csv(out / DURATIONS, HISTOGRAM_COLUMNS, duration_histogram(proposals.records, bins), meta),
        write_csv(
            out / DURATIONS_FILTERED, HISTOGRAM_COLUMNS, duration_histogram(filtered.kept, bins), meta
        ),
    ]
    print(
        f"Ingested {len(windowed):,} votes ({window.start_iso()} to {window.end_iso()}): "
        f"{graph.node_count:,} nodes, {graph.edge_count:,} edges"
    )
    return written


def run_stats(config: PipelineConfig) -> list[Path]:
    """Sociometric summary of the ingested graph."""
    out = _out(config)
    meta = config.meta()
    graph, _ = _load_graph(out / GRAPH)
    report = sociometrics(graph)
    written = [
        write_json(out / STATS, report.to_dict(), meta),
        write_csv(out / DEGREES, ("degree", "count"), report.degree_histogram_rows(), meta),
    ]
    print(
        f"Graph: {report.voter_count:,} voters ({report.known_voters:,} known), "
        f"{report.proposal_count:,} proposals, density {report.density:.4g}"
    )
    return written


def run_train(config: PipelineConfig) -> list[Path]:
    """Train the embedder, after a grid search when enabled."""
    out = _out(config)
    meta = config.meta()
    graph, _ = _load_graph(out / GRAPH)
    train_config = config.train_config
    written = []

    if config.grid_search:
        search = grid_search(graph, train_config)
        written.append(write_grid_table(out / GRID_TABLE, search.table, meta))
        train_config = search.best_config
        print(
            f"Grid search picked d={train_config.embedding_dim} "
            f"lr={train_config.learning_rate:g} heads={train_config.heads}"
        )

    result = train(graph, train_config)
    written.append(save_checkpoint(out / CHECKPOINT, result.params, train_config, meta))
    written.append(write_loss_curve(out / LOSS_CURVE, result.loss_curve, meta))
    print(
        f"Trained {len(result.loss_curve)} epochs, best epoch {result.best_epoch} "
        f"(val MSE {result.best_val_mse:.6g}, test MSE {result.test_mse:.6g})"
    )
    return written


def run_embed(config: PipelineConfig) -> list[Path]:
    """Embed every node of the graph with the trained checkpoint."""
    out = _out(config)
    graph, _ = _load_graph(out / GRAPH)
    params, train_config, _ = load_checkpoint(out / CHECKPOINT)
    features = engineer_features(graph, train_config)
    embeddings = embed_all(params, features, train_config.variability_floor)
    path = save_embeddings(out / EMBEDDINGS, embeddings, config.meta())
    print(f"Embedded {embeddings.shape[0]:,} nodes into {embeddings.shape[1]} dimensions")
    return [path]


def run_cluster(config: PipelineConfig) -> list[Path]:
    """Cluster Unknown voters, filter the clusters, and propagate labels."""
    out = _out(config)
    meta = config.meta()
    graph, _ = _load_graph(out / GRAPH)
    embeddings, _ = load_embeddings(out / EMBEDDINGS)

    unknown = graph.unknown_voter_ids
    if unknown:
        k = config.cluster.resolve_k(len(unknown))
        result = kmeans_cluster(
            embeddings.vectors[unknown], k, max_iters=config.cluster.max_iters, seed=config.seed
        )
        clusters = normalize_clusters(result, unknown, config.filter)
    else:
        logger.warning("No Unknown voters to cluster")
        clusters = filter_clusters([], config.filter)

    similarity = propagate_labels(
        graph, clusters, embeddings.vectors, label_neighbors=config.cluster.label_neighbors
    )
    labeled = similarity.clusters
    written = [
        save_cluster_set(out / CLUSTERS, labeled, meta),
        write_cluster_csv(out / CLUSTERS_CSV, labeled, meta),
        write_cluster_size_histogram(out / CLUSTER_SIZES, labeled, meta),
        write_cluster_summary(out / CLUSTER_SUMMARY, labeled),
        save_similarity_graph(out / SIMILARITY, similarity, meta),
    ]
    print(f"Found {len(labeled):,} sybil clusters covering {len(labeled.members):,} voters")
    return written


def run_reduce(config: PipelineConfig) -> list[Path]:
    """Merge every sybil cluster of the similarity graph into one node."""
    out = _out(config)
    similarity, _ = load_similarity_graph(out / SIMILARITY)
    clustered = reduce_graph(similarity, similarity.clusters)
    path = save_clustered_graph(out / CLUSTERED, clustered, config.meta())
    print(
        f"Reduced {similarity.node_count:,} nodes to {clustered.node_count:,} "
        f"({clustered.nodes_removed:,} merged away)"
    )
    return [path]


def run_report(config: PipelineConfig) -> list[Path]:
    """
    Summarize the original, similarity, and clustered graphs.

    Raises
    ------
    ArtifactMismatchError
        If an input artifact was produced under another config hash.
    """
    out = _out(config)
    meta = config.meta()
    window_doc = read_json(out / WINDOW)
    original, original_meta = _load_graph(out / GRAPH)
    similarity, similarity_meta = load_similarity_graph(out / SIMILARITY)
    clustered, clustered_meta = load_clustered_graph(out / CLUSTERED)
    clusters, clusters_meta = load_cluster_set(out / CLUSTERS)
    check_config_hash(
        config.config_hash(),
        (WINDOW, window_doc.get("meta", {})),
        (GRAPH, original_meta),
        (SIMILARITY, similarity_meta),
        (CLUSTERED, clustered_meta),
        (CLUSTERS, clusters_meta),
    )

    window = DatasetWindow.from_dict(window_doc["window"])
    report = sociometric_report(original, similarity, clustered, clusters, window, meta)
    json_path = out / REPORT_JSON
    json_path.write_text(report.to_json(), encoding="utf-8")
    text_path = out / REPORT_TEXT
    text = report.to_text()
    text_path.write_text(text, encoding="utf-8")
    print(text, end="")
    return [json_path, text_path]


def run_synth(config: PipelineConfig) -> list[Path]:
    """Generate a synthetic dataset with planted sybils under ``<out>/synth``."""
    out = _out(config)
    dataset = generate_dataset(config.synth_config)
    paths = write_dataset(dataset, out / SYNTH_DIR)
    print(
        f"Generated {len(dataset.votes):,} votes from {len(dataset.truth.wallet_entity):,} wallets "
        f"into {out / SYNTH_DIR}"
    )
    return [paths.votes, paths.proposals, paths.registry, paths.truth]


def run_eval(config: PipelineConfig) -> list[Path]:
    """Score the cluster stage against the synthetic ground truth."""
    out = _out(config)
    truth_path = config.paths.truth or out / SYNTH_DIR / "truth.csv"
    truth = read_truth(truth_path)
    graph, _ = _load_graph(out / GRAPH)
    clusters, _ = load_cluster_set(out / CLUSTERS)

    scores = evaluate_recovery(clusters, truth, graph)
    baseline = random_baseline_ari(truth, max(1, len(clusters)), seed=config.seed)
    path = write_json(
        out / EVALUATION,
        {**scores.to_dict(), "clusters": len(clusters), "random_baseline_ari": baseline},
        config.meta(),
    )
    print(
        f"Precision {scores.precision:.3f}, recall {scores.recall:.3f}, F1 {scores.f1:.3f}, "
        f"ARI {scores.ari:.3f} (random baseline {baseline:.3f})"
    )
    return [path]


PIPELINE_ORDER = ("ingest", "stats", "train", "embed", "cluster", "reduce", "report")


def run_pipeline(config: PipelineConfig) -> list[Path]:
    """Run every stage from ingest to report."""
    written: list[Path] = []
    for name in PIPELINE_ORDER:
        logger.info("Stage %s", name)
        written.extend(STAGES[name](config))
    return written


STAGES: dict[str, Stage] = {
    "ingest": run_ingest,
    "stats": run_stats,
    "train": run_train,
    "embed": run_embed,
    "cluster": run_cluster,
    "reduce": run_reduce,
    "report": run_report,
    "synth": run_synth,
    "eval": run_eval,
    "pipeline": run_pipeline,
}


def run_subcommand(name: str, config: PipelineConfig) -> list[Path]:
    """
    Validate ``config`` and run one stage.

    Parameters
    ----------
    name : str
        Stage name, one of :data:`STAGES`.
    config : PipelineConfig
        Run configuration.

    Returns
    -------
    list[Path]
        Artifacts written by the stage.

    Raises
    ------
    ConfigError
        If the stage is unknown or the config is invalid.
    StageDependencyError
        If an upstream artifact is missing.
    """
    if name not in STAGES:
        raise ConfigError(f"unknown subcommand {name!r}; expected one of {', '.join(STAGES)}")
    config.validate()
    logger.info("Running %s (config %s, seed %d)", name, config.config_hash()[:12], config.seed)
    written = STAGES[name](config)
    logger.info("%s wrote %s", name, ", ".join(p.name for p in written))
    return written
