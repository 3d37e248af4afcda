"""
Tests for scoring, clustering and the seven query strategies
"""

import math

import numpy as np
import pytest
from scipy.cluster.hierarchy import fcluster, linkage

from app.core.exceptions import ConfigurationError, ContractViolation
from app.models.dataset import PoolState
from app.models.strategy import ClusterAssignment, ModelView, StrategyConfig, StrategyName
from app.pooldata.pool import commit_query, init_pool
from app.strategies.clustering import agglomerative_cluster, kmeans_cluster, kmeanspp_seed
from app.strategies.samplers import STRATEGIES, ClusterMarginSampling, build_strategy, select
from app.strategies.scoring import bald_scores, entropy_scores, margin_scores
from app.strategies.selection import (
    badge_embeddings,
    kcenter_greedy,
    select_badge,
    select_cluster_margin,
    select_kmeans,
    select_random,
    select_top,
)


def _pool(unlabeled, n=None) -> PoolState:
    unlabeled = tuple(unlabeled)
    n = n or max(unlabeled) + 1
    labeled = tuple(i for i in range(n) if i not in set(unlabeled))
    return PoolState(labeled=labeled, unlabeled=unlabeled, dataset_size=n)


def _random_probs(rng, n, k):
    return rng.dirichlet(np.ones(k), size=n)


def _partition(labels):
    return {frozenset(np.flatnonzero(labels == c).tolist()) for c in np.unique(labels)}


class TestScores:
    def test_entropy_values(self):
        scores = entropy_scores(np.array([[0.5, 0.5], [1.0, 0.0]]))
        assert scores[0] == pytest.approx(math.log(2), abs=1e-6)
        assert scores[1] == 0.0
        assert entropy_scores(np.array([[0.5, 0.25, 0.25]]))[0] == pytest.approx(1.0397, abs=1e-4)

    def test_margin_values(self):
        scores = margin_scores(np.array([[0.6, 0.3, 0.1], [1 / 3, 1 / 3, 1 / 3], [0.9, 0.05, 0.05]]))
        np.testing.assert_allclose(scores, [0.3, 0.0, 0.85], atol=1e-6)

    def test_margin_needs_two_classes(self):
        with pytest.raises(ContractViolation):
            margin_scores(np.ones((3, 1)))

    def test_bald_values(self):
        opposing = np.array([[[1.0, 0.0]], [[0.0, 1.0]]])
        assert bald_scores(opposing)[0] == pytest.approx(math.log(2), abs=1e-6)
        identical = np.repeat(np.array([[[0.3, 0.7], [0.5, 0.5]]]), 4, axis=0)
        assert np.all(bald_scores(identical) == 0.0)
        assert np.all(bald_scores(identical[:1]) == 0.0)

    def test_score_ranges(self, rng):
        probs = _random_probs(rng, 50, 4)
        entropy = entropy_scores(probs)
        assert np.all((entropy >= 0) & (entropy <= math.log(4) + 1e-12))
        margins = margin_scores(probs)
        assert np.all((margins >= 0) & (margins <= 1))

        tensor = np.stack([_random_probs(rng, 50, 4) for _ in range(6)])
        bald = bald_scores(tensor)
        assert np.all(bald >= 0)
        assert np.all(bald <= entropy_scores(tensor.mean(axis=0)) + 1e-12)


class TestSelectTop:
    def test_argmax(self):
        batch = select_top(np.array([0.1, 0.9, 0.5]), _pool([4, 7, 9], n=10), 1)
        assert batch.indices == (7,)

    def test_ties_go_to_lower_index(self):
        batch = select_top(np.zeros(4), _pool([8, 3, 5, 6], n=9), 2)
        assert batch.indices == (3, 5)

    def test_whole_pool_in_score_order(self):
        batch = select_top(np.array([0.2, 0.9, 0.5]), _pool([0, 1, 2]), 3)
        assert batch.indices == (1, 2, 0)

    def test_ascending(self):
        batch = select_top(np.array([0.2, 0.9, 0.5]), _pool([0, 1, 2]), 2, descending=False)
        assert batch.indices == (0, 2)

    def test_monotone_transform_keeps_batch(self, rng):
        scores = rng.normal(size=30)
        pool = init_pool(30)
        assert select_top(scores, pool, 7).indices == select_top(np.exp(3 * scores) + 1, pool, 7).indices

    def test_batch_larger_than_pool(self):
        with pytest.raises(ContractViolation):
            select_top(np.zeros(2), _pool([0, 1]), 3)


class TestSelectRandom:
    def test_full_batch_is_permutation(self):
        batch = select_random(init_pool(6), 6, seed=1)
        assert sorted(batch.indices) == list(range(6))

    def test_same_seed_same_batch(self):
        assert select_random(init_pool(50), 5, seed=3).indices == select_random(init_pool(50), 5, seed=3).indices

    def test_empty_batch(self):
        assert len(select_random(init_pool(4), 0, seed=0)) == 0

    def test_oversized_batch(self):
        with pytest.raises(ContractViolation):
            select_random(init_pool(4), 5, seed=0)


class TestKCenterGreedy:
    def setup_method(self):
        # dataset index 0 labeled at 0.0; unlabeled 1, 2, 3 at 1.0, 2.0, 10.0
        self.X = np.array([[0.0], [1.0], [2.0], [10.0]])
        self.pool = commit_query(init_pool(4), [0])

    def test_farthest_point_first(self):
        batch = kcenter_greedy(self.X[1:], self.X[:1], self.pool, 1)
        assert batch.indices == (3,)

    def test_second_pick_after_covering(self):
        batch = kcenter_greedy(self.X[1:], self.X[:1], self.pool, 2)
        assert batch.indices == (3, 2)

    def test_exhaustion(self):
        batch = kcenter_greedy(self.X[1:], self.X[:1], self.pool, 3)
        assert sorted(batch.indices) == [1, 2, 3]

    def test_empty_labeled_set(self):
        with pytest.raises(ContractViolation):
            kcenter_greedy(self.X, np.zeros((0, 1)), init_pool(4), 1)

    def test_matches_brute_force(self, rng):
        for _ in range(200):
            n_labeled, n_unlabeled, d = int(rng.integers(1, 4)), int(rng.integers(1, 13)), int(rng.integers(1, 4))
            n = n_labeled + n_unlabeled
            X = rng.normal(size=(n, d))
            pool = commit_query(init_pool(n), rng.permutation(n)[:n_labeled])
            b = int(rng.integers(1, n_unlabeled + 1))

            batch = kcenter_greedy(X[list(pool.unlabeled)], X[list(pool.labeled)], pool, b)

            covered = list(pool.labeled)
            remaining = sorted(pool.unlabeled)
            expected = []
            for _ in range(b):
                gaps = {u: min(math.dist(X[u], X[c]) for c in covered) for u in remaining}
                best = max(gaps.values())
                pick = min(u for u in remaining if gaps[u] == best)
                expected.append(pick)
                covered.append(pick)
                remaining.remove(pick)
            assert list(batch.indices) == expected


class TestKMeans:
    def test_k_equals_n(self):
        X = np.array([[0.0], [3.0], [7.0]])
        clusters, centroids = kmeans_cluster(X, 3, seed=0)
        assert sorted(clusters.assignment.tolist()) == [0, 1, 2]
        np.testing.assert_allclose(np.sort(centroids.ravel()), [0.0, 3.0, 7.0])

    def test_separated_groups(self):
        X = np.array([[0.0], [0.1], [10.0], [10.1]])
        clusters, centroids = kmeans_cluster(X, 2, seed=4)
        np.testing.assert_allclose(np.sort(centroids.ravel()), [0.05, 10.05], atol=1e-12)
        assert clusters.assignment[0] == clusters.assignment[1] != clusters.assignment[2]

    def test_same_seed_same_assignment(self, rng):
        X = rng.normal(size=(40, 3))
        first, _ = kmeans_cluster(X, 5, seed=8)
        second, _ = kmeans_cluster(X, 5, seed=8)
        assert np.array_equal(first.assignment, second.assignment)

    def test_no_empty_cluster_with_duplicates(self):
        X = np.array([[0.0]] * 6 + [[1.0]])
        clusters, _ = kmeans_cluster(X, 4, seed=0)
        assert np.all(np.bincount(clusters.assignment, minlength=4) > 0)

    def test_too_many_clusters(self):
        with pytest.raises(ContractViolation):
            kmeans_cluster(np.zeros((2, 1)), 3, seed=0)

    def test_select_kmeans_picks_member_nearest_mean(self):
        X = np.array([[0.0], [0.1], [0.3], [10.0], [10.1], [10.3]])
        batch = select_kmeans(X, init_pool(6), 2, seed=1)
        assert sorted(batch.indices) == [1, 4]

    def test_select_kmeans_whole_pool(self, rng):
        X = rng.normal(size=(5, 2))
        assert sorted(select_kmeans(X, init_pool(5), 5, seed=0).indices) == [0, 1, 2, 3, 4]


class TestKMeansPlusPlus:
    def test_single_center(self):
        chosen = kmeanspp_seed(np.arange(5.0)[:, None], 1, seed=2)
        assert len(chosen) == 1 and 0 <= chosen[0] < 5

    def test_identical_points_fall_back_to_uniform(self):
        chosen = kmeanspp_seed(np.zeros((4, 2)), 2, seed=0)
        assert len(set(chosen)) == 2

    def test_squared_distance_weighting(self):
        X = np.array([[0.0], [1.0], [4.0]])
        generator = np.random.default_rng(2024)
        draws = 100_000
        hits = sum(kmeanspp_seed(X, 2, generator, first=0)[1] == 2 for _ in range(draws))
        assert hits / draws == pytest.approx(16 / 17, abs=0.01)


class TestBadge:
    def test_gradient_expansion(self):
        np.testing.assert_allclose(
            badge_embeddings(np.array([[0.7, 0.3]]), np.array([[1.0, 2.0]])), [[-0.3, -0.6, 0.3, 0.6]]
        )

    def test_one_hot_gives_zero(self):
        assert np.all(badge_embeddings(np.array([[0.0, 1.0, 0.0]]), np.array([[2.0, 5.0]])) == 0.0)

    def test_tie_picks_lowest_class(self):
        g = badge_embeddings(np.array([[0.5, 0.5]]), np.array([[3.0, 4.0]]))
        np.testing.assert_allclose(g, [[-1.5, -2.0, 1.5, 2.0]])
        assert np.linalg.norm(g) == pytest.approx(3.5355, abs=1e-4)

    def test_norm_identity(self, rng):
        P = _random_probs(rng, 1000, 4)
        E = rng.normal(size=(1000, 6))
        G = badge_embeddings(P, E)
        residual = P.copy()
        residual[np.arange(1000), np.argmax(P, axis=1)] -= 1.0
        expected = np.linalg.norm(residual, axis=1) * np.linalg.norm(E, axis=1)
        np.testing.assert_allclose(np.linalg.norm(G, axis=1), expected, rtol=0, atol=1e-9)

    def test_only_informative_sample_is_always_taken(self):
        P = np.array([[1.0, 0.0], [0.6, 0.4], [0.0, 1.0], [1.0, 0.0]])
        E = np.ones((4, 3))
        for seed in range(10):
            batch = select_badge(P, E, init_pool(4), 2, seed=seed)
            assert 1 in batch.indices and len(set(batch.indices)) == 2

    def test_same_seed_same_batch(self, rng):
        P, E = _random_probs(rng, 30, 3), rng.normal(size=(30, 4))
        assert select_badge(P, E, init_pool(30), 5, seed=6).indices == select_badge(P, E, init_pool(30), 5, seed=6).indices


class TestAgglomerative:
    def test_k_equals_n(self):
        assert sorted(agglomerative_cluster(np.array([[0.0], [1.0], [5.0]]), 3).assignment.tolist()) == [0, 1, 2]

    def test_closest_pair_merges_first(self):
        clusters = agglomerative_cluster(np.array([[0.0], [1.0], [10.0]]), 2)
        assert clusters.assignment.tolist() == [0, 0, 1]

    def test_single_cluster(self):
        assert set(agglomerative_cluster(np.random.default_rng(0).normal(size=(6, 2)), 1).assignment) == {0}

    def test_matches_scipy_average_linkage(self, rng):
        for _ in range(10):
            X = rng.normal(size=(25, 3))
            k = int(rng.integers(2, 8))
            ours = agglomerative_cluster(X, k).assignment
            reference = fcluster(linkage(X, method="average", metric="euclidean"), t=k, criterion="maxclust")
            assert _partition(ours) == _partition(reference)

    def test_too_many_clusters(self):
        with pytest.raises(ContractViolation):
            agglomerative_cluster(np.zeros((2, 1)), 3)


class TestClusterMargin:
    def setup_method(self):
        # margins 0.0, 0.1, 0.2, 0.3 for the candidates, 0.8 for the rest
        self.P = np.array([[0.5, 0.5], [0.55, 0.45], [0.6, 0.4], [0.65, 0.35], [0.9, 0.1], [0.9, 0.1]])
        self.pool = init_pool(6)

    def test_multiplier_one_takes_lowest_margins(self):
        clusters = ClusterAssignment(assignment=np.array([0, 1, 0, 1, 0, 1]), k=2)
        batch = select_cluster_margin(self.P, clusters, self.pool, 2, m=1, seed=0)
        assert sorted(batch.indices) == [0, 1]

    def test_smallest_cluster_is_visited_first(self):
        clusters = ClusterAssignment(assignment=np.array([1, 0, 0, 0, 0, 0]), k=2)
        for seed in range(5):
            batch = select_cluster_margin(self.P, clusters, self.pool, 2, m=2, seed=seed)
            assert batch.indices[0] == 0
            assert batch.indices[1] in (1, 2, 3)

    def test_single_cluster_draws_from_candidates(self):
        clusters = ClusterAssignment(assignment=np.zeros(6, dtype=int), k=1)
        batch = select_cluster_margin(self.P, clusters, self.pool, 2, m=2, seed=3)
        assert len(set(batch.indices)) == 2 and set(batch.indices) <= {0, 1, 2, 3}

    def test_default_cluster_count(self):
        strategy = ClusterMarginSampling(StrategyConfig(name="cluster-margin"))
        assert strategy.cluster_count(b=5, unlabeled_count=1000) == 50
        assert strategy.cluster_count(b=5, unlabeled_count=20) == 20


class TestDispatch:
    def test_registry_covers_every_name(self):
        assert set(STRATEGIES) == set(StrategyName)

    def test_random_ignores_view(self):
        pool = init_pool(20)
        batch = select(StrategyConfig(name="random"), ModelView(), pool, 4, seed=9)
        assert batch.indices == select_random(pool, 4, seed=9).indices

    def test_entropy_is_select_top_of_entropy(self, rng):
        probs = _random_probs(rng, 15, 3)
        pool = init_pool(15)
        batch = select(StrategyConfig(name="entropy"), ModelView(probs=probs), pool, 4, seed=0)
        assert batch.indices == select_top(entropy_scores(probs), pool, 4).indices

    def test_batchbald_is_top_b_of_per_sample_bald(self, rng):
        mc_probs = np.stack([_random_probs(rng, 15, 3) for _ in range(6)])
        pool = init_pool(15)
        batch = select(StrategyConfig(name="batchbald"), ModelView(mc_probs=mc_probs), pool, 4, seed=0)
        assert batch.indices == select_top(bald_scores(mc_probs), pool, 4).indices

    def test_missing_view_field(self, rng):
        with pytest.raises(ConfigurationError):
            select(StrategyConfig(name="batchbald"), ModelView(probs=_random_probs(rng, 5, 2)), init_pool(5), 1, seed=0)

    def test_every_strategy_returns_b_unlabeled_indices(self, rng):
        pool = commit_query(init_pool(40), [0, 5, 9])
        n_unlabeled = len(pool.unlabeled)
        view = ModelView(
            probs=_random_probs(rng, n_unlabeled, 3),
            mc_probs=np.stack([_random_probs(rng, n_unlabeled, 3) for _ in range(4)]),
            embed_unlabeled=rng.normal(size=(n_unlabeled, 4)),
            embed_labeled=rng.normal(size=(3, 4)),
        )
        for name in StrategyName:
            batch = build_strategy(StrategyConfig(name=name)).query(view, pool, 6, seed=1)
            assert len(set(batch.indices)) == 6
            assert set(batch.indices) <= set(pool.unlabeled)
