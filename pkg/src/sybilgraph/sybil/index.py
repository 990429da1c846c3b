"""
Exact L2 nearest-neighbor index.

Distances are squared Euclidean, computed from explicit differences so that
results match a naive per-pair loop. Rows are processed in blocks to bound
memory.
"""

from dataclasses import dataclass

import numpy as np

from sybilgraph.errors import IndexParameterError, NonFiniteError, ShapeError

BLOCK_ELEMENTS = 1 << 22


@dataclass(frozen=True)
class FlatIndex:
    """
    Stored vectors and their node ids.

    Parameters
    ----------
    vectors : ndarray
        n x d float64 matrix.
    ids : ndarray
        Length-n node id per stored row.
    """

    vectors: np.ndarray
    ids: np.ndarray

    @property
    def size(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


def build_index(vectors: np.ndarray, ids: np.ndarray | list[int] | None = None) -> FlatIndex:
    """
    Build an exact flat index.

    Parameters
    ----------
    vectors : ndarray
        n x d embeddings.
    ids : array-like | None, optional
        Node id of each row; defaults to ``range(n)``.

    Returns
    -------
    FlatIndex
        Read-only copy of the vectors.

    Raises
    ------
    NonFiniteError
        If any vector holds a non-finite value.
    IndexParameterError
        If ``vectors`` is not 2-D or ``ids`` has the wrong length.
    """
    data = np.array(vectors, dtype=np.float64)
    if data.ndim != 2:
        raise IndexParameterError(f"index vectors must be 2-D, got shape {data.shape}")
    if not np.isfinite(data).all():
        raise NonFiniteError("index vectors contain non-finite values")
    node_ids = np.arange(len(data), dtype=np.int64) if ids is None else np.array(ids, dtype=np.int64)
    if node_ids.shape != (len(data),):
        raise IndexParameterError(f"{len(node_ids)} ids for {len(data)} vectors")
    data.flags.writeable = False
    node_ids.flags.writeable = False
    return FlatIndex(vectors=data, ids=node_ids)


def _blocks(rows: int, columns: int, dim: int):
    step = max(1, BLOCK_ELEMENTS // max(1, columns * dim))
    for start in range(0, rows, step):
        yield start, min(rows, start + step)


def pairwise_sq_distances(queries: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """
    Squared L2 distance between every query and every stored vector.

    Returns
    -------
    ndarray
        m x n matrix.

    Raises
    ------
    ShapeError
        If the dimensions differ.
    """
    if queries.shape[1] != vectors.shape[1]:
        raise ShapeError("pairwise_sq_distances", queries.shape, vectors.shape)
    out = np.empty((queries.shape[0], vectors.shape[0]))
    for start, stop in _blocks(queries.shape[0], vectors.shape[0], vectors.shape[1]):
        diff = queries[start:stop, None, :] - vectors[None, :, :]
        out[start:stop] = np.einsum("mnd,mnd->mn", diff, diff)
    return out


def knn_search(index: FlatIndex, queries: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Exact k nearest stored vectors of every query.

    Parameters
    ----------
    index : FlatIndex
        Index to search.
    queries : ndarray
        m x d query matrix.
    k : int
        Neighbors per query, 1 <= k <= index size.

    Returns
    -------
    tuple[ndarray, ndarray]
        m x k node ids and m x k squared distances, distance-ascending with
        ties broken by the lower node id.

    Raises
    ------
    IndexParameterError
        If k is outside [1, n].
    ShapeError
        If the query dimension differs from the index dimension.
    NonFiniteError
        If a query holds a non-finite value.
    """
    if not 1 <= k <= index.size:
        raise IndexParameterError(f"k={k} must be between 1 and the index size {index.size}")
    queries = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    if queries.shape[1] != index.dim:
        raise ShapeError("knn_search", queries.shape, index.vectors.shape)
    if not np.isfinite(queries).all():
        raise NonFiniteError("queries contain non-finite values")

    neighbor_ids = np.empty((queries.shape[0], k), dtype=np.int64)
    distances = np.empty((queries.shape[0], k))
    for start, stop in _blocks(queries.shape[0], index.size, index.dim):
        block = pairwise_sq_distances(queries[start:stop], index.vectors)
        tie_keys = np.broadcast_to(index.ids, block.shape)
        order = np.lexsort((tie_keys, block), axis=-1)[:, :k]
        neighbor_ids[start:stop] = index.ids[order]
        distances[start:stop] = np.take_along_axis(block, order, axis=1)
    return neighbor_ids, distances
