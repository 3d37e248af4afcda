"""
Learner data models
"""

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class LearnerKind(str, Enum):
    """Available learners"""
    LOGISTIC = "multinomial-logistic"
    NEAREST_CENTROID = "nearest-centroid"


class LearnerInit(str, Enum):
    """Weight initialization at the start of every cycle"""
    SCRATCH = "scratch"
    PRETRAINED = "pretrained"


class LearnerConfig(BaseModel):
    """Training options, defaults mirror the standardized deep learning settings"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: LearnerKind = Field(default=LearnerKind.LOGISTIC, description="Learner family")
    epochs: int = Field(default=200, ge=1, description="Training epochs")
    batch_size: int = Field(default=20, ge=1, description="Minibatch size")
    learning_rate: float = Field(default=0.01, gt=0, description="Initial SGD learning rate")
    momentum: float = Field(default=0.9, ge=0, lt=1, description="SGD momentum")
    weight_decay: float = Field(default=0.0005, ge=0, description="L2 weight decay")
    cosine_decay: bool = Field(default=True, description="Cosine learning-rate decay over epochs")
    embedding_dim: int = Field(default=32, ge=1, description="Width of the random nonlinear lift")
    init: LearnerInit = Field(default=LearnerInit.SCRATCH, description="scratch or pretrained")
    weights_path: Optional[str] = Field(default=None, description="ALQW1 blob for pretrained init")

    @model_validator(mode="after")
    def _check_init(self):
        if self.init == LearnerInit.PRETRAINED and not self.weights_path:
            raise ValueError("pretrained init requires weights_path")
        return self


class FittedModel(BaseModel):
    """Immutable trained classifier.

    Logistic models carry the fixed lift (``lift_weights``, ``lift_bias``) and the
    softmax head (``head_weights``, ``head_bias``). Nearest-centroid models carry
    per-class ``centroids`` in standardized space and ``present`` marking classes
    seen in training.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: LearnerKind
    class_count: int = Field(ge=2)
    feature_dim: int = Field(ge=1)
    embedding_dim: int = Field(ge=1)
    train_seed: int = Field(ge=0)
    feature_mean: np.ndarray
    feature_scale: np.ndarray
    lift_weights: Optional[np.ndarray] = None
    lift_bias: Optional[np.ndarray] = None
    head_weights: Optional[np.ndarray] = None
    head_bias: Optional[np.ndarray] = None
    centroids: Optional[np.ndarray] = None
    present: Optional[np.ndarray] = None

    @model_validator(mode="after")
    def _check_shapes(self):
        d, h, k = self.feature_dim, self.embedding_dim, self.class_count
        expected = {"feature_mean": (d,), "feature_scale": (d,)}
        if self.kind == LearnerKind.LOGISTIC:
            expected.update(lift_weights=(d, h), lift_bias=(h,), head_weights=(h, k), head_bias=(k,))
        else:
            expected.update(centroids=(k, d), present=(k,))
        for name, shape in expected.items():
            value = getattr(self, name)
            if value is None or value.shape != shape:
                raise ValueError(f"{name} must have shape {shape}")
            if not np.all(np.isfinite(value)):
                raise ValueError(f"{name} contains non-finite values")
            value.setflags(write=False)
        return self

    @property
    def raw_centroids(self) -> np.ndarray:
        """Nearest-centroid class means in input units"""
        if self.centroids is None:
            raise AttributeError("only nearest-centroid models have centroids")
        return self.centroids * self.feature_scale + self.feature_mean
