"""
Base class for learner adapters
"""

from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from app.models.learner import FittedModel, LearnerConfig, LearnerKind

# Standard deviations below this are treated as constant features
MIN_SCALE = 1e-12


class LearnerAdapter(ABC):
    """Base class for learners: fit, then map inputs to embeddings and embeddings to probabilities"""

    kind: LearnerKind

    @abstractmethod
    def fit(
        self,
        cfg: LearnerConfig,
        features: np.ndarray,
        labels: np.ndarray,
        class_count: int,
        seed: int,
        reference: Optional[np.ndarray] = None,
    ) -> FittedModel:
        """Train from fresh (or pretrained) weights"""
        pass

    @abstractmethod
    def lift(self, model: FittedModel, standardized: np.ndarray) -> np.ndarray:
        """Embedding of standardized inputs"""
        pass

    @abstractmethod
    def head(self, model: FittedModel, embedding: np.ndarray) -> np.ndarray:
        """Class probabilities of embedding rows"""
        pass

    @staticmethod
    def standardization(features: np.ndarray, reference: Optional[np.ndarray] = None):
        """Z-score statistics of the training pool; constant features keep scale 1"""
        source = features if reference is None else reference
        mean = source.mean(axis=0)
        scale = source.std(axis=0)
        scale[scale < MIN_SCALE] = 1.0
        return mean, scale
