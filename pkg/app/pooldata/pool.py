"""
Train/test splitting and labeled/unlabeled pool bookkeeping
"""

import logging
import math
from typing import Sequence, Tuple, Union

import numpy as np

from app.core.exceptions import ContractViolation, DatasetError
from app.models.dataset import Dataset, PoolState, QueryBatch

logger = logging.getLogger(__name__)


def _round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def split(ds: Dataset, train_fraction: float, seed: int) -> Tuple[Dataset, Dataset]:
    """Stratified split: round(train_fraction * count) samples of every class go to train"""
    if not 0.0 < train_fraction < 1.0:
        raise DatasetError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    counts = ds.class_counts()
    too_small = [label for label, count in enumerate(counts) if 0 < count < 2]
    if too_small:
        raise DatasetError(f"cannot stratify: classes {too_small} have fewer than 2 samples")

    rng = np.random.default_rng(seed)
    train_parts = []
    for label in range(ds.class_count):
        members = np.flatnonzero(ds.labels == label)
        if members.size == 0:
            continue
        take = _round_half_up(train_fraction * members.size)
        train_parts.append(rng.permutation(members)[:take])

    train_index = np.sort(np.concatenate(train_parts))
    test_mask = np.ones(ds.size, dtype=bool)
    test_mask[train_index] = False
    test_index = np.flatnonzero(test_mask)
    if train_index.size == 0 or test_index.size == 0:
        raise DatasetError(f"split with fraction {train_fraction} leaves an empty part")

    return (
        ds.subset(train_index, name=f"{ds.name}-train"),
        ds.subset(test_index, name=f"{ds.name}-test"),
    )


def reduce_dataset(ds: Dataset, size: int, seed: int) -> Dataset:
    """Random reduction to about ``size`` samples that keeps the class distribution"""
    if size >= ds.size:
        return ds
    reduced, _ = split(ds, size / ds.size, seed)
    logger.info(f"Reduced {ds.name} from {ds.size} to {reduced.size} samples")
    return reduced


def init_pool(ds: Union[Dataset, int]) -> PoolState:
    """Everything unlabeled, in ascending index order"""
    n = ds if isinstance(ds, int) else ds.size
    return PoolState(labeled=(), unlabeled=tuple(range(n)), dataset_size=n)


def commit_query(pool: PoolState, batch: Union[QueryBatch, Sequence[int]]) -> PoolState:
    """Move the batch from U to L: L' = L + batch (batch order), U' = U - batch (order kept)"""
    indices = [int(i) for i in (batch.indices if isinstance(batch, QueryBatch) else batch)]
    if len(set(indices)) != len(indices):
        raise ContractViolation("query batch contains duplicate indices")
    unlabeled = set(pool.unlabeled)
    missing = [i for i in indices if i not in unlabeled]
    if missing:
        raise ContractViolation(f"indices {missing[:10]} are not in the unlabeled pool")

    queried = set(indices)
    return PoolState(
        labeled=pool.labeled + tuple(indices),
        unlabeled=tuple(i for i in pool.unlabeled if i not in queried),
        dataset_size=pool.dataset_size,
    )
