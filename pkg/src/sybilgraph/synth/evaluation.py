"""
Scoring of recovered sybil clusters against generated ground truth.

Pairwise precision and recall count same-entity wallet pairs among sybil
wallets only; honest wallets placed in clusters are reported separately.
"""

from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
from sklearn.metrics import adjusted_rand_score

from sybilgraph.log import get_logger
from sybilgraph.sybil.clusters import SybilClusterSet
from sybilgraph.synth.enums import EntityType
from sybilgraph.synth.generator import GroundTruth
from sybilgraph.votegraph.models import VotingGraph

logger = get_logger(__name__)


@dataclass(frozen=True)
class RecoveryScores:
    """
    Agreement between predicted clusters and planted sybil entities.

    Parameters
    ----------
    precision : float
        Predicted same-cluster sybil pairs that share an entity (0 when no
        pair is predicted).
    recall : float
        Same-entity sybil pairs that were predicted together.
    f1 : float
        Harmonic mean of precision and recall.
    ari : float
        Adjusted Rand index over sybil wallets, unclustered wallets counting
        as singletons.
    sybil_wallets : int
        Sybil wallets scored.
    honest_flagged : int
        Honest wallets that ended up inside a predicted cluster.
    """

    precision: float
    recall: float
    f1: float
    ari: float
    sybil_wallets: int
    honest_flagged: int = 0

    def to_dict(self) -> dict[str, float | int]:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "ari": self.ari,
            "sybil_wallets": self.sybil_wallets,
            "honest_flagged": self.honest_flagged,
        }


def _pairs(count: int) -> int:
    return count * (count - 1) // 2


def evaluate_wallet_clusters(predicted: Iterable[Iterable[str]], truth: GroundTruth) -> RecoveryScores:
    """
    Score predicted wallet clusters against the truth.

    Parameters
    ----------
    predicted : iterable of iterables of str
        Predicted clusters as wallet addresses.
    truth : GroundTruth
        Planted entities.

    Returns
    -------
    RecoveryScores
        Scores that do not depend on cluster order or ids.
    """
    sybils = truth.sybil_wallets
    sybil_set = set(sybils)
    cluster_of: dict[str, int] = {}
    honest_flagged = 0
    for index, cluster in enumerate(predicted):
        for wallet in cluster:
            if wallet in sybil_set:
                cluster_of[wallet] = index
            elif wallet in truth.wallet_entity:
                honest_flagged += 1

    true_pairs = sum(_pairs(len(w)) for w in truth.entities(EntityType.SYBIL).values())
    predicted_sizes = Counter(cluster_of.values())
    predicted_pairs = sum(_pairs(size) for size in predicted_sizes.values())
    overlap = Counter((cluster_of[w], truth.wallet_entity[w]) for w in cluster_of)
    hits = sum(_pairs(size) for size in overlap.values())

    precision = hits / predicted_pairs if predicted_pairs else 0.0
    recall = hits / true_pairs if true_pairs else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0

    if sybils:
        singleton = iter(range(-1, -len(sybils) - 1, -1))
        labels_true = [truth.wallet_entity[w] for w in sybils]
        labels_pred = [cluster_of[w] if w in cluster_of else next(singleton) for w in sybils]
        ari = float(adjusted_rand_score(labels_true, labels_pred))
    else:
        ari = 0.0

    scores = RecoveryScores(
        precision=precision,
        recall=recall,
        f1=f1,
        ari=ari,
        sybil_wallets=len(sybils),
        honest_flagged=honest_flagged,
    )
    logger.info(
        "Recovery: precision %.3f recall %.3f F1 %.3f ARI %.3f over %d sybil wallets",
        precision,
        recall,
        f1,
        ari,
        len(sybils),
    )
    return scores


def evaluate_recovery(
    predicted: SybilClusterSet, truth: GroundTruth, graph: VotingGraph
) -> RecoveryScores:
    """
    Score a cluster set of ``graph`` voter nodes against the truth.

    Each node contributes every wallet merged into it.
    """
    wallet_clusters = [
        sorted(set().union(*(graph.voter(node).wallet_addresses for node in cluster)))
        for cluster in predicted.clusters
    ]
    return evaluate_wallet_clusters(wallet_clusters, truth)


def random_baseline_ari(truth: GroundTruth, n_clusters: int, seed: int = 0) -> float:
    """
    ARI of a uniformly random assignment of sybil wallets to ``n_clusters`` labels.

    Returns 0.0 when there are no sybil wallets.
    """
    sybils = truth.sybil_wallets
    if not sybils:
        return 0.0
    rng = np.random.default_rng(seed)
    labels_pred = rng.integers(max(1, n_clusters), size=len(sybils))
    labels_true = [truth.wallet_entity[w] for w in sybils]
    return float(adjusted_rand_score(labels_true, labels_pred))
