"""
Clustering primitives: k-means++ seeding, Lloyd k-means and average-linkage agglomeration
"""

import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy.spatial.distance import cdist

from app.core.exceptions import ContractViolation
from app.core.seeding import SeedLike, as_generator
from app.models.strategy import ClusterAssignment

logger = logging.getLogger(__name__)

KMEANS_TOLERANCE = 1e-6
KMEANS_MAX_ITERATIONS = 100


def _check_k(X: np.ndarray, k: int):
    if k < 1:
        raise ContractViolation(f"cluster count must be positive, got {k}")
    if k > X.shape[0]:
        raise ContractViolation(f"cannot form {k} clusters from {X.shape[0]} rows")


def _sq_distances_to(X: np.ndarray, row: np.ndarray) -> np.ndarray:
    return cdist(X, row[None, :], metric="sqeuclidean").ravel()


def kmeanspp_seed(X: np.ndarray, k: int, seed: SeedLike, first: Optional[int] = None) -> List[int]:
    """k distinct row indices by k-means++ seeding.

    The first index is uniform (or ``first`` when given); each next index is drawn
    with probability proportional to the squared distance to the nearest chosen
    row. When every remaining squared distance is 0 the draw is uniform over the
    rows not chosen yet.
    """
    X = np.asarray(X, dtype=np.float64)
    if k == 0:
        return []
    _check_k(X, k)
    n = X.shape[0]
    rng = as_generator(seed)

    chosen = [int(rng.integers(n)) if first is None else int(first)]
    nearest = _sq_distances_to(X, X[chosen[0]])
    while len(chosen) < k:
        nearest[chosen] = 0.0
        total = nearest.sum()
        if total > 0:
            pick = int(rng.choice(n, p=nearest / total))
        else:
            remaining = np.setdiff1d(np.arange(n), chosen)
            pick = int(rng.choice(remaining))
        chosen.append(pick)
        nearest = np.minimum(nearest, _sq_distances_to(X, X[pick]))
    return chosen


def _assign(X: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # argmin keeps the lowest centroid id on ties
    return np.argmin(cdist(X, centroids, metric="sqeuclidean"), axis=1)


def _fill_empty(X: np.ndarray, labels: np.ndarray, centroids: np.ndarray, k: int):
    """Move the point farthest from its centroid into each empty cluster"""
    counts = np.bincount(labels, minlength=k)
    empty = np.flatnonzero(counts == 0)
    if empty.size == 0:
        return labels, centroids

    labels, centroids = labels.copy(), centroids.copy()
    distance = np.sum((X - centroids[labels]) ** 2, axis=1)
    for cluster in empty:
        movable = counts[labels] > 1
        point = int(np.argmax(np.where(movable, distance, -1.0)))
        counts[labels[point]] -= 1
        labels[point] = cluster
        counts[cluster] = 1
        distance[point] = 0.0
        centroids[cluster] = X[point]
    return labels, centroids


def _means(X: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    return np.vstack([X[labels == cluster].mean(axis=0) for cluster in range(k)])


def kmeans_cluster(X: np.ndarray, k: int, seed: SeedLike) -> Tuple[ClusterAssignment, np.ndarray]:
    """Lloyd iterations from k-means++ seeds until centroids move < 1e-6 or 100 iterations"""
    X = np.asarray(X, dtype=np.float64)
    _check_k(X, k)
    rng = as_generator(seed)

    centroids = X[kmeanspp_seed(X, k, rng)].copy()
    for iteration in range(KMEANS_MAX_ITERATIONS):
        labels, centroids = _fill_empty(X, _assign(X, centroids), centroids, k)
        updated = _means(X, labels, k)
        shift = float(np.max(np.linalg.norm(updated - centroids, axis=1)))
        centroids = updated
        if shift < KMEANS_TOLERANCE:
            break

    labels, centroids = _fill_empty(X, _assign(X, centroids), centroids, k)
    centroids = _means(X, labels, k)
    logger.debug(f"k-means with k={k} stopped after {iteration + 1} iterations")
    return ClusterAssignment(assignment=labels, k=k), centroids


def agglomerative_cluster(X: np.ndarray, k: int) -> ClusterAssignment:
    """Average-linkage agglomeration (Euclidean) down to k clusters.

    Clusters are identified by their smallest member index; among equally close
    pairs the lexicographically smallest (i, j) merges first. Output ids are
    renumbered 0..k-1 in order of smallest member. Cost is O(n^2) per merge.
    """
    X = np.asarray(X, dtype=np.float64)
    _check_k(X, k)
    n = X.shape[0]

    distances = cdist(X, X, metric="euclidean")
    np.fill_diagonal(distances, np.inf)
    sizes = np.ones(n)
    labels = np.arange(n)

    for _ in range(n - k):
        # row-major argmin over a symmetric matrix yields the smallest (i, j), i < j
        flat = int(np.argmin(distances))
        i, j = divmod(flat, n)
        merged = (sizes[i] * distances[i] + sizes[j] * distances[j]) / (sizes[i] + sizes[j])
        distances[i, :] = merged
        distances[:, i] = merged
        distances[i, i] = np.inf
        distances[j, :] = np.inf
        distances[:, j] = np.inf
        sizes[i] += sizes[j]
        labels[labels == j] = i

    _, assignment = np.unique(labels, return_inverse=True)
    return ClusterAssignment(assignment=assignment.astype(np.int64), k=k)
