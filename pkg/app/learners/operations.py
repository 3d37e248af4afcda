"""
Learner operations: train, predict, embed and MC dropout prediction
"""

import logging
import time
from typing import Dict, Optional

import numpy as np

from app.core.exceptions import LearnerError
from app.learners.base import LearnerAdapter
from app.learners.logistic import LogisticLearner
from app.learners.nearest_centroid import NearestCentroidLearner
from app.models.learner import FittedModel, LearnerConfig, LearnerKind

logger = logging.getLogger(__name__)

DEFAULT_MC_ITERATIONS = 40
DEFAULT_DROPOUT_RATE = 0.5

_ADAPTERS: Dict[LearnerKind, LearnerAdapter] = {
    LearnerKind.LOGISTIC: LogisticLearner(),
    LearnerKind.NEAREST_CENTROID: NearestCentroidLearner(),
}


def get_adapter(kind: LearnerKind) -> LearnerAdapter:
    return _ADAPTERS[LearnerKind(kind)]


def train(
    cfg: LearnerConfig,
    features: np.ndarray,
    labels: np.ndarray,
    seed: int,
    class_count: Optional[int] = None,
    reference: Optional[np.ndarray] = None,
) -> FittedModel:
    """Train a fresh model; deterministic per (cfg, data, seed).

    ``reference`` supplies the standardization statistics (the whole training
    pool); without it the training features are used. Classes absent from
    ``labels`` are allowed.
    """
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if features.ndim != 2 or features.shape[0] == 0:
        raise LearnerError("cannot train on an empty feature matrix")
    if labels.shape != (features.shape[0],):
        raise LearnerError(f"{labels.shape[0]} labels for {features.shape[0]} samples")
    if reference is not None and reference.shape[1] != features.shape[1]:
        raise LearnerError("reference features have a different column count")

    if class_count is None:
        class_count = max(2, int(labels.max()) + 1)
    if labels.min() < 0 or labels.max() >= class_count:
        raise LearnerError(f"labels must lie in [0, {class_count})")

    start_time = time.time()
    model = get_adapter(cfg.kind).fit(cfg, features, labels, class_count, seed, reference)
    logger.debug(
        f"Trained {cfg.kind.value} on {features.shape[0]} samples",
        extra={"elapsed_sec": round(time.time() - start_time, 3)},
    )
    return model


def _standardize(model: FittedModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.feature_dim:
        raise LearnerError(f"expected {model.feature_dim} feature columns, got shape {X.shape}")
    return (X - model.feature_mean) / model.feature_scale


def embed(model: FittedModel, X: np.ndarray) -> np.ndarray:
    """Penultimate representation (n x d_h)"""
    return get_adapter(model.kind).lift(model, _standardize(model, X))


def predict_proba(model: FittedModel, X: np.ndarray) -> np.ndarray:
    """Class probabilities (n x K), rows summing to 1"""
    adapter = get_adapter(model.kind)
    return adapter.head(model, adapter.lift(model, _standardize(model, X)))


def mc_predict(
    model: FittedModel,
    X: np.ndarray,
    T: int = DEFAULT_MC_ITERATIONS,
    dropout_rate: float = DEFAULT_DROPOUT_RATE,
    seed: int = 0,
) -> np.ndarray:
    """T stochastic passes with an independent dropout mask on the embedding each time (T x n x K)"""
    if T < 1:
        raise LearnerError("T must be at least 1")
    if not 0.0 <= dropout_rate < 1.0:
        raise LearnerError(f"dropout_rate must lie in [0, 1), got {dropout_rate}")

    adapter = get_adapter(model.kind)
    embedding = adapter.lift(model, _standardize(model, X))
    keep = 1.0 - dropout_rate
    rng = np.random.default_rng(seed)

    samples = np.empty((T, embedding.shape[0], model.class_count))
    for repetition in range(T):
        mask = rng.random(embedding.shape) >= dropout_rate
        samples[repetition] = adapter.head(model, embedding * mask / keep)
    return samples


def predict_labels(model: FittedModel, X: np.ndarray) -> np.ndarray:
    """Argmax class per row, ties toward the lowest class id"""
    return np.argmax(predict_proba(model, X), axis=1)
