"""
Cycle protocol: standard runs, oracle verification runs and multi-seed suites
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from app.core.config import settings
from app.core.exceptions import BenchmarkError, ConfigurationError, SuiteError
from app.core.logging import log_cycle
from app.core.seeding import derive_rng, derive_seed
from app.learners.operations import embed, mc_predict, predict_labels, predict_proba, train
from app.loop.schedule import budget_schedule
from app.models.dataset import Dataset, PoolState
from app.models.learner import FittedModel
from app.models.report import CollapseMap
from app.models.run import CycleRecord, Metric, RunConfig, RunMode, SeedRun, SuiteResult
from app.models.strategy import ClusterAssignment, ModelView
from app.pooldata.pool import commit_query, init_pool
from app.pooldata.sources import load_source
from app.report.metrics import accuracy, class_histogram, f1_binary
from app.strategies.base import QueryStrategy
from app.strategies.samplers import ClusterMarginSampling, build_strategy
from app.strategies.selection import select_random

logger = logging.getLogger(__name__)

Data = Tuple[Dataset, Dataset]
# (cycle, model trained on L_c) -> model whose view drives the query of cycle c
QueryModel = Callable[[int, FittedModel], FittedModel]

# Oracle stream uses cycle -1 so it never collides with a cycle's stream
ORACLE_CYCLE = -1


def resolve_collapse(cfg: RunConfig, class_count: int) -> Optional[CollapseMap]:
    """Collapse map for f1-binary; identity for two-class data without one"""
    if cfg.metric != Metric.F1_BINARY:
        return None
    if cfg.collapse_map is None:
        if class_count != 2:
            raise ConfigurationError("f1-binary on more than two classes needs a collapse_map")
        return CollapseMap.identity()
    collapse_map = CollapseMap(mapping=cfg.collapse_map)
    if not collapse_map.covers(class_count):
        raise ConfigurationError(f"collapse_map must map every class 0..{class_count - 1}")
    return collapse_map


def evaluate(model: FittedModel, test: Dataset, cfg: RunConfig) -> float:
    """Test metric of ``model``"""
    predictions = predict_labels(model, test.features)
    if cfg.metric == Metric.ACCURACY:
        return accuracy(predictions, test.labels)
    return f1_binary(predictions, test.labels, resolve_collapse(cfg, test.class_count))


def _train_on_pool(cfg: RunConfig, train_ds: Dataset, pool: PoolState, seed: int, cycle: int) -> FittedModel:
    labeled = pool.labeled_array()
    return train(
        cfg.learner,
        train_ds.features[labeled],
        train_ds.labels[labeled],
        derive_seed(seed, cycle, "train"),
        class_count=train_ds.class_count,
        reference=train_ds.features,
    )


class _ViewBuilder:
    """Computes the ModelView fields one strategy reads; holds the once-per-run clustering"""

    def __init__(self, cfg: RunConfig, strategy: QueryStrategy, train_ds: Dataset, seed: int):
        self.cfg = cfg
        self.strategy = strategy
        self.train_ds = train_ds
        self.seed = seed
        self.cluster_of: Optional[Dict[int, int]] = None
        self.cluster_count = 0

    def build(self, model: FittedModel, pool: PoolState, b: int, cycle: int) -> ModelView:
        needs = self.strategy.requires
        unlabeled = pool.unlabeled_array()
        X_U = self.train_ds.features[unlabeled]
        fields = {}

        if "probs" in needs:
            fields["probs"] = predict_proba(model, X_U)
        if "mc_probs" in needs:
            fields["mc_probs"] = mc_predict(
                model,
                X_U,
                T=self.cfg.strategy.mc_T,
                dropout_rate=self.cfg.strategy.dropout_rate,
                seed=derive_seed(self.seed, cycle, "mc-dropout"),
            )
        if "embed_unlabeled" in needs:
            fields["embed_unlabeled"] = embed(model, X_U)
        if "embed_labeled" in needs:
            fields["embed_labeled"] = embed(model, self.train_ds.features[pool.labeled_array()])

        if isinstance(self.strategy, ClusterMarginSampling):
            if self.cluster_of is None:
                clusters = self.strategy.cluster(embed(model, X_U), b)
                self.cluster_of = dict(zip(unlabeled.tolist(), clusters.assignment.tolist()))
                self.cluster_count = clusters.k
            fields["clusters"] = ClusterAssignment(
                assignment=np.array([self.cluster_of[i] for i in unlabeled.tolist()], dtype=np.int64),
                k=self.cluster_count,
            )
        return ModelView(**fields)


def run_cycles(cfg: RunConfig, seed: int, data: Data, query_model: QueryModel) -> List[CycleRecord]:
    """Shared cycle driver.

    Cycle 0 queries at random. Every later cycle builds the view from
    ``query_model(cycle, model trained on L_c)``, queries, commits, retrains from
    fresh weights on the enlarged pool and evaluates on the test data.
    """
    train_ds, test_ds = data
    resolve_collapse(cfg, train_ds.class_count)
    schedule = budget_schedule(train_ds.size, cfg.budget_fraction, cfg.cycles)
    strategy = build_strategy(cfg.strategy)
    views = _ViewBuilder(cfg, strategy, train_ds, seed)

    pool = init_pool(train_ds)
    model: Optional[FittedModel] = None
    records: List[CycleRecord] = []
    cycles = tqdm(
        enumerate(schedule),
        total=len(schedule),
        desc=f"{cfg.strategy.name.value} seed {seed}",
        disable=not settings.SHOW_PROGRESS,
    )
    for cycle, b in cycles:
        query_rng = derive_rng(seed, cycle, "query")
        if cycle == 0:
            batch = select_random(pool, b, query_rng, cycle=cycle)
        else:
            # the model trained on L_c at the end of the previous cycle is already a
            # fresh-weights function of (learner, L_c, seed stream)
            view = views.build(query_model(cycle, model), pool, b, cycle)
            batch = strategy.query(view, pool, b, query_rng, cycle=cycle)

        pool = commit_query(pool, batch)
        model = _train_on_pool(cfg, train_ds, pool, seed, cycle)
        record = CycleRecord(
            cycle=cycle,
            labeled_count=len(pool.labeled),
            metric_value=evaluate(model, test_ds, cfg),
            per_class_labeled=tuple(int(c) for c in class_histogram(pool, train_ds.labels, train_ds.class_count)),
            queried_indices=batch.indices,
        )
        records.append(record)
        log_cycle(logger, record, cfg.strategy.name.value, seed, cfg.mode.value)
    return records


def run_experiment(cfg: RunConfig, seed: int, data: Optional[Data] = None) -> List[CycleRecord]:
    """Standard protocol: the model trained on L_c queries Q_c"""
    if data is None:
        data = load_source(cfg.dataset)
    return run_cycles(cfg, seed, data, lambda cycle, cycle_model: cycle_model)


def train_oracle(cfg: RunConfig, seed: int, data: Data) -> FittedModel:
    """Model trained once on the entire training data"""
    train_ds, _ = data
    return train(
        cfg.query_learner,
        train_ds.features,
        train_ds.labels,
        derive_seed(seed, ORACLE_CYCLE, "oracle"),
        class_count=train_ds.class_count,
        reference=train_ds.features,
    )


def run_verification(
    cfg: RunConfig,
    seed: int,
    data: Optional[Data] = None,
    oracle: Optional[FittedModel] = None,
) -> List[CycleRecord]:
    """Verification protocol: a fully-trained oracle produces every view"""
    if data is None:
        data = load_source(cfg.dataset)
    if oracle is None:
        oracle = train_oracle(cfg, seed, data)
    return run_cycles(cfg, seed, data, lambda cycle, cycle_model: oracle)


def run_seed(cfg: RunConfig, seed: int, data: Data) -> SeedRun:
    """One seed in the configured mode"""
    start_time = time.time()
    if cfg.mode == RunMode.VERIFICATION:
        oracle = train_oracle(cfg, seed, data)
        oracle_metric = evaluate(oracle, data[1], cfg)
        logger.info(
            f"Oracle trained on all {data[0].size} training samples",
            extra={"seed": seed, "metric": round(oracle_metric, 6), "mode": cfg.mode.value},
        )
        records = run_verification(cfg, seed, data, oracle=oracle)
    else:
        oracle_metric = None
        records = run_experiment(cfg, seed, data)

    logger.info(
        "Seed completed",
        extra={
            "strategy": cfg.strategy.name.value,
            "seed": seed,
            "elapsed_sec": round(time.time() - start_time, 3),
        },
    )
    return SeedRun(seed=seed, records=records, oracle_metric=oracle_metric)


def run_suite(cfg: RunConfig, data: Optional[Data] = None, max_workers: Optional[int] = None) -> SuiteResult:
    """Every seed of ``cfg`` (in parallel when allowed), averaged per cycle"""
    if data is None:
        data = load_source(cfg.dataset)
    seeds = sorted(cfg.seeds)
    max_workers = max(1, max_workers or settings.MAX_WORKERS)

    runs: List[SeedRun] = []
    if max_workers == 1:
        for seed in seeds:
            runs.append(_guarded(run_seed, cfg, seed, data))
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            futures = {seed: executor.submit(run_seed, cfg, seed, data) for seed in seeds}
            for seed in seeds:
                runs.append(_guarded(futures[seed].result, seed=seed))

    curves = np.array([[record.metric_value for record in run.records] for run in runs])
    return SuiteResult(
        strategy=cfg.strategy.name.value,
        mode=cfg.mode,
        metric=cfg.metric,
        runs=runs,
        labeled_counts=[record.labeled_count for record in runs[0].records],
        mean_curve=curves.mean(axis=0).tolist(),
        config=cfg.model_dump(mode="json"),
    )


def _guarded(call, *args, seed: Optional[int] = None):
    seed = args[1] if seed is None else seed
    try:
        return call(*args)
    except (BenchmarkError, ValueError) as error:
        logger.error(f"Seed failed: {error}", extra={"seed": seed})
        raise SuiteError(seed, error) from error
