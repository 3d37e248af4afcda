"""
Batch selection primitives over the unlabeled pool.

Every function returns a QueryBatch of exactly ``b`` distinct indices from
``pool.unlabeled``. Rows of score vectors, probability matrices and embeddings
follow the order of ``pool.unlabeled``. Ties break toward the lower dataset
index.
"""

import logging
from typing import Dict, List

import numpy as np
from scipy.spatial.distance import cdist

from app.core.exceptions import ContractViolation
from app.core.seeding import SeedLike, as_generator
from app.models.dataset import PoolState, QueryBatch
from app.models.strategy import ClusterAssignment
from app.strategies.clustering import kmeans_cluster, kmeanspp_seed
from app.strategies.scoring import margin_scores

logger = logging.getLogger(__name__)


def _unlabeled(pool: PoolState, b: int) -> np.ndarray:
    unlabeled = pool.unlabeled_array()
    if b < 0:
        raise ContractViolation(f"batch size must be nonnegative, got {b}")
    if b > unlabeled.size:
        raise ContractViolation(f"batch size {b} exceeds the {unlabeled.size} unlabeled samples")
    return unlabeled


def _check_rows(array: np.ndarray, count: int, name: str):
    if array.shape[0] != count:
        raise ContractViolation(f"{name} has {array.shape[0]} rows for {count} unlabeled samples")


def _batch(indices, cycle: int) -> QueryBatch:
    return QueryBatch(indices=[int(i) for i in indices], cycle=cycle)


def select_top(scores: np.ndarray, pool: PoolState, b: int, descending: bool = True, cycle: int = 0) -> QueryBatch:
    """The b most extreme scores, in score order"""
    unlabeled = _unlabeled(pool, b)
    scores = np.asarray(scores, dtype=np.float64)
    _check_rows(scores, unlabeled.size, "scores")
    keys = -scores if descending else scores
    order = np.lexsort((unlabeled, keys))
    return _batch(unlabeled[order[:b]], cycle)


def select_random(pool: PoolState, b: int, seed: SeedLike, cycle: int = 0) -> QueryBatch:
    """b indices drawn uniformly without replacement"""
    unlabeled = _unlabeled(pool, b)
    rng = as_generator(seed)
    return _batch(rng.choice(unlabeled, size=b, replace=False), cycle)


def kcenter_greedy(
    embed_U: np.ndarray, embed_L: np.ndarray, pool: PoolState, b: int, cycle: int = 0
) -> QueryBatch:
    """Greedy k-center: repeatedly take the unlabeled point farthest from L and earlier picks"""
    unlabeled = _unlabeled(pool, b)
    embed_U = np.asarray(embed_U, dtype=np.float64)
    embed_L = np.asarray(embed_L, dtype=np.float64)
    _check_rows(embed_U, unlabeled.size, "embed_unlabeled")
    if embed_L.shape[0] == 0:
        raise ContractViolation("k-center greedy needs at least one labeled sample")

    nearest = cdist(embed_U, embed_L, metric="euclidean").min(axis=1)
    picks: List[int] = []
    for _ in range(b):
        candidates = np.flatnonzero(nearest == nearest.max())
        j = int(candidates[np.argmin(unlabeled[candidates])])
        picks.append(int(unlabeled[j]))
        nearest = np.minimum(nearest, cdist(embed_U, embed_U[j:j + 1], metric="euclidean").ravel())
        nearest[j] = -np.inf
    return _batch(picks, cycle)


def select_kmeans(embed_U: np.ndarray, pool: PoolState, b: int, seed: SeedLike, cycle: int = 0) -> QueryBatch:
    """k-means with k=b on the unlabeled embeddings; the member nearest each centroid"""
    unlabeled = _unlabeled(pool, b)
    embed_U = np.asarray(embed_U, dtype=np.float64)
    _check_rows(embed_U, unlabeled.size, "embed_unlabeled")
    if b == 0:
        return _batch([], cycle)

    clusters, centroids = kmeans_cluster(embed_U, b, seed)
    picks = []
    for cluster in range(b):
        members = np.flatnonzero(clusters.assignment == cluster)
        distance = np.sum((embed_U[members] - centroids[cluster]) ** 2, axis=1)
        picks.append(unlabeled[members[np.lexsort((unlabeled[members], distance))[0]]])
    return _batch(picks, cycle)


def badge_embeddings(P: np.ndarray, E: np.ndarray) -> np.ndarray:
    """Rows (p - onehot(argmax p)) kron h, of length K * d_h"""
    P = np.asarray(P, dtype=np.float64)
    E = np.asarray(E, dtype=np.float64)
    if P.shape[0] != E.shape[0]:
        raise ContractViolation(f"{P.shape[0]} probability rows for {E.shape[0]} embedding rows")
    rows = np.arange(P.shape[0])
    residual = P.copy()
    residual[rows, np.argmax(P, axis=1)] -= 1.0
    return (residual[:, :, None] * E[:, None, :]).reshape(P.shape[0], -1)


def select_badge(P: np.ndarray, E: np.ndarray, pool: PoolState, b: int, seed: SeedLike, cycle: int = 0) -> QueryBatch:
    """k-means++ seeds over the gradient embeddings"""
    unlabeled = _unlabeled(pool, b)
    _check_rows(np.asarray(P), unlabeled.size, "probs")
    gradients = badge_embeddings(P, E)
    chosen = kmeanspp_seed(gradients, b, seed)
    return _batch(unlabeled[chosen], cycle)


def select_cluster_margin(
    P: np.ndarray,
    clusters: ClusterAssignment,
    pool: PoolState,
    b: int,
    m: int,
    seed: SeedLike,
    cycle: int = 0,
) -> QueryBatch:
    """Round-robin random draws over clusters of the m*b lowest-margin candidates.

    Clusters are visited in ascending order of candidate count (then cluster id);
    each visit draws one candidate uniformly from the cluster.
    """
    unlabeled = _unlabeled(pool, b)
    _check_rows(np.asarray(P), unlabeled.size, "probs")
    _check_rows(clusters.assignment, unlabeled.size, "clusters")
    if m < 1:
        raise ContractViolation(f"candidate multiplier must be positive, got {m}")

    margins = margin_scores(P)
    candidate_count = min(m * b, unlabeled.size)
    candidates = np.lexsort((unlabeled, margins))[:candidate_count]

    groups: Dict[int, List[int]] = {}
    for row in candidates:
        groups.setdefault(int(clusters.assignment[row]), []).append(int(unlabeled[row]))
    visit_order = sorted(groups, key=lambda cluster: (len(groups[cluster]), cluster))

    rng = as_generator(seed)
    picks: List[int] = []
    while len(picks) < b:
        for cluster in visit_order:
            members = groups[cluster]
            if not members:
                continue
            picks.append(members.pop(int(rng.integers(len(members)))))
            if len(picks) == b:
                break
    return _batch(picks, cycle)
