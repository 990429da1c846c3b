"""
Feature engineering over the voting graph.

Every node gets eight engineered features, z-scored over nodes, in this order:

    0  log(1 + degree)            distinct neighbors
    1  log(1 + total_power)       power cast (voters) or received (proposals)
    2  log(1 + vote_count)        incident vote edges
    3  activity span              days between first and last event
    4  mean inter-vote gap        days
    5  distinct spaces            spaces among incident edges
    6  is_proposal flag
    7  is_known flag

Voter nodes also get a temporal sequence of their last T votes, each step
holding (days since previous vote, log(1 + power), choice), zero-padded at
the front. Proposal nodes get all-pad sequences.
"""

from dataclasses import dataclass

import numpy as np

from sybilgraph.embedder.config import TrainConfig
from sybilgraph.log import get_logger
from sybilgraph.votegraph.models import VotingGraph

logger = get_logger(__name__)

FEATURE_NAMES = (
    "log_degree",
    "log_total_power",
    "log_vote_count",
    "activity_span_days",
    "mean_gap_days",
    "distinct_spaces",
    "is_proposal",
    "is_known",
)
SEQUENCE_FEATURES = 3
SECONDS_PER_DAY = 86_400.0


@dataclass
class FeatureSet:
    """
    Model inputs derived from one voting graph.

    Parameters
    ----------
    node_features : ndarray
        n x f z-scored feature matrix; also the reconstruction target.
    raw_node_features : ndarray
        n x f features before z-scoring.
    edge_index : ndarray
        E x 2 (voter, proposal) pairs, one row per vote (parallel rows kept).
    edge_power : ndarray
        Length-E voting power per edge.
    power_aggregate : ndarray
        n x 1 z-scored mean of ``log(1 + power)`` over incident edges.
    temporal_sequences : ndarray
        n x T x 3 per-node event sequences, padded at the front.
    train_mask, val_mask, test_mask : ndarray
        Disjoint boolean masks covering exactly the voter nodes.
    """

    node_features: np.ndarray
    raw_node_features: np.ndarray
    edge_index: np.ndarray
    edge_power: np.ndarray
    power_aggregate: np.ndarray
    temporal_sequences: np.ndarray
    train_mask: np.ndarray
    val_mask: np.ndarray
    test_mask: np.ndarray

    @property
    def node_count(self) -> int:
        return self.node_features.shape[0]

    @property
    def feature_count(self) -> int:
        return self.node_features.shape[1]

    @property
    def target(self) -> np.ndarray:
        return self.node_features


def zscore(matrix: np.ndarray) -> np.ndarray:
    """Column-wise z-score; constant columns become zero."""
    mean = matrix.mean(axis=0, keepdims=True)
    std = matrix.std(axis=0, keepdims=True)
    safe = np.where(std > 0, std, 1.0)
    return np.where(std > 0, (matrix - mean) / safe, 0.0)


def split_masks(
    voter_ids: list[int], node_count: int, fractions: tuple[float, float, float], seed: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Partition voter nodes into train/validation/test masks.

    Parameters
    ----------
    voter_ids : list[int]
        Node ids of the voters to split.
    node_count : int
        Length of each mask.
    fractions : tuple[float, float, float]
        Train, validation, and test fractions.
    seed : int
        Permutation seed.

    Returns
    -------
    tuple[ndarray, ndarray, ndarray]
        Disjoint boolean masks whose union is the voter set.
    """
    order = np.random.default_rng(seed).permutation(np.asarray(voter_ids, dtype=np.int64))
    count = len(order)
    n_train = min(count, int(round(fractions[0] * count)))
    n_val = min(count - n_train, int(round(fractions[1] * count)))

    masks = tuple(np.zeros(node_count, dtype=bool) for _ in range(3))
    masks[0][order[:n_train]] = True
    masks[1][order[n_train : n_train + n_val]] = True
    masks[2][order[n_train + n_val :]] = True
    return masks


def engineer_features(graph: VotingGraph, config: TrainConfig) -> FeatureSet:
    """
    Build node features, temporal sequences, edge arrays, and split masks.

    Parameters
    ----------
    graph : VotingGraph
        Non-empty voting graph.
    config : TrainConfig
        Supplies the sequence length, split fractions, and seed.

    Returns
    -------
    FeatureSet
        Inputs for :func:`forward` and :func:`train`.
    """
    n = graph.node_count
    steps = config.sequence_length
    spaces = {p.node_id: p.space_id for p in graph.proposals}

    events: list[list[tuple[int, float, int]]] = [[] for _ in range(n)]
    neighbor_sets: list[set[int]] = [set() for _ in range(n)]
    node_spaces: list[set[str]] = [set() for _ in range(n)]
    power = np.zeros(n)
    log_power_sum = np.zeros(n)

    for edge in graph.edges:
        for node, other in ((edge.voter, edge.proposal), (edge.proposal, edge.voter)):
            events[node].append((edge.timestamp, edge.voting_power, edge.choice))
            neighbor_sets[node].add(other)
            node_spaces[node].add(spaces[edge.proposal])
            power[node] += edge.voting_power
            log_power_sum[node] += np.log1p(edge.voting_power)

    raw = np.zeros((n, len(FEATURE_NAMES)))
    sequences = np.zeros((n, steps, SEQUENCE_FEATURES))
    edge_counts = np.array([len(e) for e in events], dtype=np.float64)

    for node in range(n):
        node_events = sorted(events[node], key=lambda event: event[0])
        times = np.array([t for t, _, _ in node_events], dtype=np.float64)
        gaps = np.diff(times) / SECONDS_PER_DAY if len(times) > 1 else np.zeros(0)
        raw[node, 0] = np.log1p(len(neighbor_sets[node]))
        raw[node, 1] = np.log1p(power[node])
        raw[node, 2] = np.log1p(len(node_events))
        raw[node, 3] = (times[-1] - times[0]) / SECONDS_PER_DAY if len(times) else 0.0
        raw[node, 4] = gaps.mean() if gaps.size else 0.0
        raw[node, 5] = len(node_spaces[node])

    for proposal in graph.proposals:
        raw[proposal.node_id, 6] = 1.0
    for voter in graph.voters:
        raw[voter.node_id, 7] = 1.0 if voter.is_known else 0.0
        node_events = sorted(events[voter.node_id], key=lambda event: event[0])
        recent = node_events[-steps:]
        offset = steps - len(recent)
        previous = None
        history_index = len(node_events) - len(recent)
        if history_index > 0:
            previous = node_events[history_index - 1][0]
        for position, (timestamp, vote_power, choice) in enumerate(recent):
            delta = 0.0 if previous is None else (timestamp - previous) / SECONDS_PER_DAY
            sequences[voter.node_id, offset + position] = (delta, np.log1p(vote_power), choice)
            previous = timestamp

    mean_log_power = np.divide(
        log_power_sum, edge_counts, out=np.zeros(n), where=edge_counts > 0
    ).reshape(n, 1)

    train_mask, val_mask, test_mask = split_masks(graph.voter_ids, n, config.split, config.seed)
    edge_index = np.array([(e.voter, e.proposal) for e in graph.edges], dtype=np.int64).reshape(-1, 2)
    edge_power = np.array([e.voting_power for e in graph.edges], dtype=np.float64)

    logger.info(
        "Engineered %d features for %d nodes (%d train / %d val / %d test voters)",
        raw.shape[1],
        n,
        train_mask.sum(),
        val_mask.sum(),
        test_mask.sum(),
    )
    return FeatureSet(
        node_features=zscore(raw),
        raw_node_features=raw,
        edge_index=edge_index,
        edge_power=edge_power,
        power_aggregate=zscore(mean_log_power),
        temporal_sequences=sequences,
        train_mask=train_mask,
        val_mask=val_mask,
        test_mask=test_mask,
    )
