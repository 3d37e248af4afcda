"""
Multinomial logistic learner on a fixed random nonlinear lift
"""

import logging
from typing import Optional

import numpy as np

from app.core.exceptions import LearnerError
from app.learners.base import LearnerAdapter
from app.learners.optim import CosineLRDecay, SGDWithMomentum, cross_entropy_loss_and_grad, softmax
from app.learners.weights import read_weights_file
from app.models.learner import FittedModel, LearnerConfig, LearnerInit, LearnerKind

logger = logging.getLogger(__name__)

# Sub-stream tags of the training seed
_LIFT_STREAM = 1
_SHUFFLE_STREAM = 2


class LogisticLearner(LearnerAdapter):
    """Softmax head trained by minibatch SGD on ReLU(x A + c), with A and c fixed at random"""

    kind = LearnerKind.LOGISTIC

    def fit(
        self,
        cfg: LearnerConfig,
        features: np.ndarray,
        labels: np.ndarray,
        class_count: int,
        seed: int,
        reference: Optional[np.ndarray] = None,
    ) -> FittedModel:
        d = features.shape[1]
        mean, scale = self.standardization(features, reference)

        if cfg.init == LearnerInit.PRETRAINED:
            pretrained = read_weights_file(cfg.weights_path)
            if pretrained.feature_dim != d or pretrained.class_count != class_count:
                raise LearnerError(
                    f"pretrained weights are for d={pretrained.feature_dim}, K={pretrained.class_count}; "
                    f"data has d={d}, K={class_count}"
                )
            lift_weights, lift_bias = pretrained.lift_weights, pretrained.lift_bias
            params = {"W": pretrained.head_weights.copy(), "b": pretrained.head_bias.copy()}
        else:
            lift_rng = np.random.default_rng([seed, _LIFT_STREAM])
            lift_weights = lift_rng.standard_normal((d, cfg.embedding_dim)) / np.sqrt(d)
            lift_bias = lift_rng.standard_normal(cfg.embedding_dim)
            params = {
                "W": np.zeros((cfg.embedding_dim, class_count)),
                "b": np.zeros(class_count),
            }

        H = np.maximum((features - mean) / scale @ lift_weights + lift_bias, 0.0)
        y = np.asarray(labels, dtype=np.int64)
        n = H.shape[0]

        optimizer = SGDWithMomentum(params, lr=cfg.learning_rate, momentum=cfg.momentum)
        scheduler = CosineLRDecay(optimizer, cfg.learning_rate, cfg.epochs) if cfg.cosine_decay else None
        shuffle_rng = np.random.default_rng([seed, _SHUFFLE_STREAM])

        loss = float("nan")
        for epoch in range(cfg.epochs):
            if scheduler is not None:
                scheduler.step(epoch)
            order = shuffle_rng.permutation(n)
            for start in range(0, n, cfg.batch_size):
                batch = order[start:start + cfg.batch_size]
                loss, grad_W, grad_b = cross_entropy_loss_and_grad(
                    params["W"], params["b"], H[batch], y[batch], cfg.weight_decay
                )
                optimizer.step({"W": grad_W, "b": grad_b})

        if not (np.all(np.isfinite(params["W"])) and np.all(np.isfinite(params["b"]))):
            raise LearnerError("training diverged: non-finite weights")

        logger.debug(f"Trained logistic head on {n} samples, last batch loss {loss:.4f}")
        return FittedModel(
            kind=self.kind,
            class_count=class_count,
            feature_dim=d,
            embedding_dim=lift_weights.shape[1],
            train_seed=seed,
            feature_mean=mean,
            feature_scale=scale,
            lift_weights=np.array(lift_weights),
            lift_bias=np.array(lift_bias),
            head_weights=params["W"],
            head_bias=params["b"],
        )

    def lift(self, model: FittedModel, standardized: np.ndarray) -> np.ndarray:
        return np.maximum(standardized @ model.lift_weights + model.lift_bias, 0.0)

    def head(self, model: FittedModel, embedding: np.ndarray) -> np.ndarray:
        return softmax(embedding @ model.head_weights + model.head_bias)
