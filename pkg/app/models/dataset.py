"""
Dataset and pool data models
"""

from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def _frozen_array(values, dtype) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


class Dataset(BaseModel):
    """Feature matrix, integer labels and class count"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    features: np.ndarray = Field(description="n x d real matrix")
    labels: np.ndarray = Field(description="Length-n class ids in [0, class_count)")
    class_count: int = Field(ge=2, description="Number of classes K")
    name: str = Field(default="dataset", description="Identifier")

    @field_validator("features", mode="before")
    @classmethod
    def _coerce_features(cls, value):
        array = _frozen_array(value, np.float64)
        if array.ndim != 2:
            raise ValueError("features must be a 2-D matrix")
        return array

    @field_validator("labels", mode="before")
    @classmethod
    def _coerce_labels(cls, value):
        raw = np.asarray(value)
        if raw.size and not np.issubdtype(raw.dtype, np.integer):
            if not np.all(np.mod(raw, 1) == 0):
                raise ValueError("labels must be integers")
        array = _frozen_array(raw, np.int64)
        if array.ndim != 1:
            raise ValueError("labels must be a vector")
        return array

    @model_validator(mode="after")
    def _check_invariants(self):
        n, d = self.features.shape
        if n < 1 or d < 1:
            raise ValueError("dataset needs at least one sample and one feature")
        if self.labels.shape[0] != n:
            raise ValueError(f"{self.labels.shape[0]} labels for {n} samples")
        if not np.all(np.isfinite(self.features)):
            raise ValueError("features contain non-finite values")
        if self.labels.min() < 0 or self.labels.max() >= self.class_count:
            raise ValueError(f"labels must lie in [0, {self.class_count})")
        return self

    @property
    def size(self) -> int:
        return int(self.features.shape[0])

    @property
    def dims(self) -> int:
        return int(self.features.shape[1])

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.class_count)

    def subset(self, indices, name: str = None) -> "Dataset":
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(
            features=self.features[indices],
            labels=self.labels[indices],
            class_count=self.class_count,
            name=name or self.name,
        )


class MixtureSpec(BaseModel):
    """Isotropic Gaussian mixture, one component per class"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    class_count: int = Field(ge=2, description="Number of classes K")
    dims: int = Field(ge=1, description="Feature dimension d")
    per_class_counts: List[int] = Field(description="Samples per class")
    class_means: List[List[float]] = Field(description="K x d component means")
    class_stddev: float = Field(gt=0, description="Isotropic standard deviation")
    seed: int = Field(default=0, ge=0, description="Generator seed")
    name: str = Field(default="mixture", description="Dataset identifier")

    @model_validator(mode="after")
    def _check_shapes(self):
        if len(self.per_class_counts) != self.class_count:
            raise ValueError(f"per_class_counts needs {self.class_count} entries")
        if any(count < 1 for count in self.per_class_counts):
            raise ValueError("per_class_counts must all be >= 1")
        if len(self.class_means) != self.class_count or any(len(row) != self.dims for row in self.class_means):
            raise ValueError(f"class_means must have shape ({self.class_count}, {self.dims})")
        return self


class PoolState(BaseModel):
    """Disjoint labeled / unlabeled index partitions"""
    model_config = ConfigDict(frozen=True)

    labeled: Tuple[int, ...] = Field(default=(), description="Labeled indices L, in commit order")
    unlabeled: Tuple[int, ...] = Field(description="Unlabeled indices U")
    dataset_size: int = Field(ge=1, description="n")

    @field_validator("labeled", "unlabeled", mode="before")
    @classmethod
    def _as_ints(cls, value):
        return tuple(int(i) for i in value)

    @model_validator(mode="after")
    def _check_partition(self):
        labeled, unlabeled = set(self.labeled), set(self.unlabeled)
        if len(labeled) != len(self.labeled) or len(unlabeled) != len(self.unlabeled):
            raise ValueError("index sets contain duplicates")
        if labeled & unlabeled:
            raise ValueError("labeled and unlabeled sets overlap")
        if labeled | unlabeled != set(range(self.dataset_size)):
            raise ValueError("labeled and unlabeled sets must cover 0..n-1")
        return self

    def labeled_array(self) -> np.ndarray:
        return np.asarray(self.labeled, dtype=np.int64)

    def unlabeled_array(self) -> np.ndarray:
        return np.asarray(self.unlabeled, dtype=np.int64)


class QueryBatch(BaseModel):
    """Indices selected in one cycle"""
    model_config = ConfigDict(frozen=True)

    indices: Tuple[int, ...] = Field(description="Ordered distinct dataset indices")
    cycle: int = Field(default=0, ge=0, description="Cycle number c")

    @field_validator("indices", mode="before")
    @classmethod
    def _as_ints(cls, value):
        return tuple(int(i) for i in value)

    @field_validator("indices")
    @classmethod
    def _distinct(cls, value):
        if len(set(value)) != len(value):
            raise ValueError("query batch contains duplicate indices")
        return value

    def __len__(self) -> int:
        return len(self.indices)
