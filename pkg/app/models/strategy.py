"""
Query strategy data models
"""

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

# Plain arrays, shapes documented at use sites:
#   ProbMatrix      (n, K)     rows in [0, 1] summing to 1
#   ProbTensor      (T, n, K)  every slice a ProbMatrix
#   EmbeddingMatrix (n, d_h)   finite
ProbMatrix = np.ndarray
ProbTensor = np.ndarray
EmbeddingMatrix = np.ndarray

PROB_TOLERANCE = 1e-9


class StrategyName(str, Enum):
    """Available query strategies"""
    RANDOM = "random"
    ENTROPY = "entropy"
    BATCHBALD = "batchbald"
    KMEANS = "kmeans"
    CORESET = "coreset"
    BADGE = "badge"
    CLUSTER_MARGIN = "cluster-margin"


class StrategyConfig(BaseModel):
    """Strategy name plus the knobs the strategies read"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: StrategyName = Field(description="Query strategy")
    mc_T: int = Field(default=40, ge=1, description="MC dropout forward passes (batchbald)")
    dropout_rate: float = Field(default=0.5, ge=0, lt=1, description="MC dropout rate on the embedding")
    cm_multiplier: int = Field(default=10, ge=1, description="Cluster Margin candidate multiplier m")
    cm_cluster_count: Optional[int] = Field(
        default=None, ge=1,
        description="Cluster Margin cluster count; None means 10 x batch size at the first strategic cycle",
    )


def check_prob_matrix(probs: np.ndarray, name: str = "probs") -> np.ndarray:
    probs = np.asarray(probs, dtype=np.float64)
    if probs.ndim != 2:
        raise ValueError(f"{name} must be an (n, K) matrix")
    if probs.size and (probs.min() < 0 or probs.max() > 1):
        raise ValueError(f"{name} entries must lie in [0, 1]")
    if probs.size and np.max(np.abs(probs.sum(axis=1) - 1.0)) > PROB_TOLERANCE:
        raise ValueError(f"{name} rows must sum to 1")
    return probs


class ClusterAssignment(BaseModel):
    """Cluster id per row"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    assignment: np.ndarray = Field(description="Length-n cluster ids in [0, k)")
    k: int = Field(ge=1, description="Cluster count")

    @model_validator(mode="after")
    def _check_ids(self):
        ids = self.assignment
        if ids.ndim != 1:
            raise ValueError("assignment must be a vector")
        if ids.size and (ids.min() < 0 or ids.max() >= self.k):
            raise ValueError(f"cluster ids must lie in [0, {self.k})")
        ids.setflags(write=False)
        return self


class ModelView(BaseModel):
    """What a model exposes to the strategies for one query.

    Rows of ``probs``, ``mc_probs``, ``embed_unlabeled`` and ``clusters`` follow the
    order of ``pool.unlabeled``; rows of ``embed_labeled`` follow ``pool.labeled``.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    probs: Optional[np.ndarray] = None
    mc_probs: Optional[np.ndarray] = None
    embed_unlabeled: Optional[np.ndarray] = None
    embed_labeled: Optional[np.ndarray] = None
    clusters: Optional[ClusterAssignment] = None

    @model_validator(mode="after")
    def _check_fields(self):
        if self.probs is not None:
            check_prob_matrix(self.probs)
        if self.mc_probs is not None:
            if self.mc_probs.ndim != 3:
                raise ValueError("mc_probs must be a (T, n, K) tensor")
            for repetition in self.mc_probs:
                check_prob_matrix(repetition, "mc_probs")
        for name in ("embed_unlabeled", "embed_labeled"):
            value = getattr(self, name)
            if value is not None and (value.ndim != 2 or not np.all(np.isfinite(value))):
                raise ValueError(f"{name} must be a finite 2-D matrix")
        rows = {
            name: count for name, count in (
                ("probs", None if self.probs is None else self.probs.shape[0]),
                ("mc_probs", None if self.mc_probs is None else self.mc_probs.shape[1]),
                ("embed_unlabeled", None if self.embed_unlabeled is None else self.embed_unlabeled.shape[0]),
                ("clusters", None if self.clusters is None else self.clusters.assignment.shape[0]),
            ) if count is not None
        }
        if len(set(rows.values())) > 1:
            raise ValueError(f"unlabeled row counts disagree: {rows}")
        return self

    def check_unlabeled_rows(self, count: int):
        for name in ("probs", "embed_unlabeled"):
            value = getattr(self, name)
            if value is not None and value.shape[0] != count:
                raise ValueError(f"{name} has {value.shape[0]} rows for {count} unlabeled samples")
        if self.mc_probs is not None and self.mc_probs.shape[1] != count:
            raise ValueError(f"mc_probs has {self.mc_probs.shape[1]} rows for {count} unlabeled samples")
        if self.clusters is not None and self.clusters.assignment.shape[0] != count:
            raise ValueError(f"clusters cover {self.clusters.assignment.shape[0]} rows for {count} unlabeled samples")
