"""
The seven query strategies and the dispatcher
"""

import logging
from typing import Dict, Type

from app.core.exceptions import ConfigurationError
from app.core.seeding import SeedLike
from app.models.dataset import PoolState, QueryBatch
from app.models.strategy import ClusterAssignment, ModelView, StrategyConfig, StrategyName
from app.strategies.base import QueryStrategy
from app.strategies.clustering import agglomerative_cluster
from app.strategies.scoring import bald_scores, entropy_scores
from app.strategies.selection import (
    kcenter_greedy,
    select_badge,
    select_cluster_margin,
    select_kmeans,
    select_random,
    select_top,
)

logger = logging.getLogger(__name__)

CLUSTERS_PER_QUERY = 10


class RandomSampling(QueryStrategy):
    """Uniform draws from U; the baseline"""
    name = StrategyName.RANDOM

    def query(self, view, pool, b, seed, cycle=0):
        return select_random(pool, b, seed, cycle=cycle)


class EntropySampling(QueryStrategy):
    """Largest predictive entropy"""
    name = StrategyName.ENTROPY
    requires = frozenset({"probs"})

    def query(self, view, pool, b, seed, cycle=0):
        self.check_view(view, pool)
        return select_top(entropy_scores(view.probs), pool, b, descending=True, cycle=cycle)


class BatchBALDSampling(QueryStrategy):
    """Largest per-sample BALD mutual information under MC dropout"""
    name = StrategyName.BATCHBALD
    requires = frozenset({"mc_probs"})

    def query(self, view, pool, b, seed, cycle=0):
        self.check_view(view, pool)
        return select_top(bald_scores(view.mc_probs), pool, b, descending=True, cycle=cycle)


class KMeansSampling(QueryStrategy):
    """Member nearest each of b k-means centroids"""
    name = StrategyName.KMEANS
    requires = frozenset({"embed_unlabeled"})

    def query(self, view, pool, b, seed, cycle=0):
        self.check_view(view, pool)
        return select_kmeans(view.embed_unlabeled, pool, b, seed, cycle=cycle)


class CoresetSampling(QueryStrategy):
    """Greedy k-center over the embeddings"""
    name = StrategyName.CORESET
    requires = frozenset({"embed_unlabeled", "embed_labeled"})

    def query(self, view, pool, b, seed, cycle=0):
        self.check_view(view, pool)
        return kcenter_greedy(view.embed_unlabeled, view.embed_labeled, pool, b, cycle=cycle)


class BadgeSampling(QueryStrategy):
    """k-means++ seeding over gradient embeddings"""
    name = StrategyName.BADGE
    requires = frozenset({"probs", "embed_unlabeled"})

    def query(self, view, pool, b, seed, cycle=0):
        self.check_view(view, pool)
        return select_badge(view.probs, view.embed_unlabeled, pool, b, seed, cycle=cycle)


class ClusterMarginSampling(QueryStrategy):
    """Round-robin over hierarchical clusters of low-margin candidates.

    Uses ``view.clusters`` when the caller computed them once; otherwise clusters
    the unlabeled embeddings on the spot.
    """
    name = StrategyName.CLUSTER_MARGIN
    requires = frozenset({"probs"})

    def cluster_count(self, b: int, unlabeled_count: int) -> int:
        wanted = self.config.cm_cluster_count or CLUSTERS_PER_QUERY * max(b, 1)
        return max(1, min(wanted, unlabeled_count))

    def cluster(self, embed_unlabeled, b: int) -> ClusterAssignment:
        k = self.cluster_count(b, embed_unlabeled.shape[0])
        logger.info(f"Hierarchical clustering of {embed_unlabeled.shape[0]} samples into {k} clusters")
        return agglomerative_cluster(embed_unlabeled, k)

    def query(self, view, pool, b, seed, cycle=0):
        self.check_view(view, pool)
        clusters = view.clusters
        if clusters is None:
            if view.embed_unlabeled is None:
                raise ConfigurationError("cluster-margin needs clusters or embed_unlabeled in the view")
            clusters = self.cluster(view.embed_unlabeled, b)
        return select_cluster_margin(
            view.probs, clusters, pool, b, self.config.cm_multiplier, seed, cycle=cycle
        )


STRATEGIES: Dict[StrategyName, Type[QueryStrategy]] = {
    strategy.name: strategy
    for strategy in (
        RandomSampling,
        EntropySampling,
        BatchBALDSampling,
        KMeansSampling,
        CoresetSampling,
        BadgeSampling,
        ClusterMarginSampling,
    )
}


def build_strategy(config: StrategyConfig) -> QueryStrategy:
    return STRATEGIES[StrategyName(config.name)](config)


def select(
    strategy: StrategyConfig,
    view: ModelView,
    pool: PoolState,
    b: int,
    seed: SeedLike,
    cycle: int = 0,
) -> QueryBatch:
    """Dispatch to the strategy named in ``strategy``"""
    return build_strategy(strategy).query(view, pool, b, seed, cycle=cycle)
