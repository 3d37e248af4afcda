"""
Nearest-centroid learner
"""

from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist

from app.learners.base import LearnerAdapter
from app.learners.optim import softmax
from app.models.learner import FittedModel, LearnerConfig, LearnerKind


class NearestCentroidLearner(LearnerAdapter):
    """Per-class means in standardized space; probabilities are softmax(-squared distance)"""

    kind = LearnerKind.NEAREST_CENTROID

    def fit(
        self,
        cfg: LearnerConfig,
        features: np.ndarray,
        labels: np.ndarray,
        class_count: int,
        seed: int,
        reference: Optional[np.ndarray] = None,
    ) -> FittedModel:
        mean, scale = self.standardization(features, reference)
        standardized = (features - mean) / scale
        d = features.shape[1]

        centroids = np.zeros((class_count, d))
        present = np.zeros(class_count, dtype=bool)
        for label in range(class_count):
            members = standardized[labels == label]
            if members.shape[0]:
                centroids[label] = members.mean(axis=0)
                present[label] = True

        return FittedModel(
            kind=self.kind,
            class_count=class_count,
            feature_dim=d,
            embedding_dim=d,
            train_seed=seed,
            feature_mean=mean,
            feature_scale=scale,
            centroids=centroids,
            present=present,
        )

    def lift(self, model: FittedModel, standardized: np.ndarray) -> np.ndarray:
        return standardized

    def head(self, model: FittedModel, embedding: np.ndarray) -> np.ndarray:
        logits = -cdist(embedding, model.centroids, metric="sqeuclidean")
        # classes never seen in training get probability 0
        logits[:, ~model.present] = -np.inf
        return softmax(logits)
