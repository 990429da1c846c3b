"""
Lloyd's k-means with k-means++ seeding over exact squared L2 distances.
"""

from dataclasses import dataclass, field

import numpy as np

from sybilgraph.errors import IndexParameterError, NonFiniteError
from sybilgraph.log import get_logger
from sybilgraph.sybil.index import pairwise_sq_distances

logger = get_logger(__name__)


@dataclass
class KMeansResult:
    """
    Output of :func:`kmeans_cluster`.

    Parameters
    ----------
    k : int
        Cluster count.
    centroids : ndarray
        k x d centroid matrix.
    assignments : ndarray
        Cluster index of every point.
    objective : float
        Sum of squared distances from each point to its centroid.
    iterations_run : int
        Completed update steps.
    objective_history : list[float]
        Objective after the initial assignment and after every iteration.
    """

    k: int
    centroids: np.ndarray
    assignments: np.ndarray
    objective: float
    iterations_run: int
    objective_history: list[float] = field(default_factory=list)

    def members(self) -> list[np.ndarray]:
        """Point indices of every cluster, in cluster order."""
        return [np.flatnonzero(self.assignments == j) for j in range(self.k)]


def _assign(points: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    distances = pairwise_sq_distances(points, centroids)
    assignments = np.argmin(distances, axis=1)
    return assignments, distances[np.arange(len(points)), assignments]


def kmeans_plusplus(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """
    Pick k seed point indices with k-means++ weighting.

    Once every remaining point coincides with a chosen seed, the lowest
    unchosen index is taken.
    """
    n = len(points)
    chosen = [int(rng.integers(n))]
    closest = pairwise_sq_distances(points, points[chosen])[:, 0]
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            index = int(rng.choice(n, p=closest / total))
        else:
            taken = set(chosen)
            index = next(i for i in range(n) if i not in taken)
        chosen.append(index)
        closest = np.minimum(closest, pairwise_sq_distances(points, points[[index]])[:, 0])
    return np.array(chosen, dtype=np.int64)


def _update(
    points: np.ndarray, assignments: np.ndarray, distances: np.ndarray, centroids: np.ndarray
) -> np.ndarray:
    k = len(centroids)
    counts = np.bincount(assignments, minlength=k)
    sums = np.zeros_like(centroids)
    np.add.at(sums, assignments, points)

    updated = centroids.copy()
    filled = counts > 0
    updated[filled] = sums[filled] / counts[filled, None]

    empty = np.flatnonzero(~filled)
    if len(empty):
        logger.warning("Re-seeding %d empty clusters at the farthest points", len(empty))
        remaining = distances.copy()
        for j in empty:
            farthest = int(np.argmax(remaining))
            updated[j] = points[farthest]
            remaining[farthest] = -1.0
    return updated


def kmeans_cluster(points: np.ndarray, k: int, max_iters: int = 300, seed: int = 0) -> KMeansResult:
    """
    Cluster points with Lloyd iterations.

    Parameters
    ----------
    points : ndarray
        n x d embeddings of the points to cluster.
    k : int
        Cluster count, 1 <= k <= n.
    max_iters : int, optional
        Iteration cap. Default is 300.
    seed : int, optional
        Seed of the k-means++ draw. Default is 0.

    Returns
    -------
    KMeansResult
        Final centroids and assignments. When iterations stop before the cap
        the assignment is a fixed point of the final centroids.

    Raises
    ------
    IndexParameterError
        If k is outside [1, n] or ``max_iters`` < 1.
    NonFiniteError
        If a point holds a non-finite value.
    """
    points = np.asarray(points, dtype=np.float64)
    n = len(points)
    if not 1 <= k <= n:
        raise IndexParameterError(f"k={k} must be between 1 and the number of points {n}")
    if max_iters < 1:
        raise IndexParameterError("max_iters must be >= 1")
    if not np.isfinite(points).all():
        raise NonFiniteError("k-means points contain non-finite values")

    rng = np.random.default_rng(seed)
    centroids = points[kmeans_plusplus(points, k, rng)].copy()
    assignments, distances = _assign(points, centroids)
    history = [float(distances.sum())]

    iterations = 0
    for iterations in range(1, max_iters + 1):
        centroids = _update(points, assignments, distances, centroids)
        updated, distances = _assign(points, centroids)
        history.append(float(distances.sum()))
        logger.debug("k-means iteration %d objective %.6g", iterations, history[-1])
        stable = np.array_equal(updated, assignments)
        assignments = updated
        if stable:
            break

    logger.info(
        "k-means: %d points, k=%d, %d iterations, objective %.6g", n, k, iterations, history[-1]
    )
    return KMeansResult(
        k=k,
        centroids=centroids,
        assignments=assignments,
        objective=history[-1],
        iterations_run=iterations,
        objective_history=history,
    )
