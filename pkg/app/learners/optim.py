"""
Softmax head math and the minibatch optimizer
"""

import math
from typing import Dict, Tuple

import numpy as np


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax; ``-inf`` logits get probability 0"""
    shifted = logits - np.max(logits, axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=1, keepdims=True)


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits, axis=1, keepdims=True)
    return shifted - np.log(np.sum(np.exp(shifted), axis=1, keepdims=True))


def cross_entropy_loss_and_grad(
    W: np.ndarray,
    b: np.ndarray,
    H: np.ndarray,
    y: np.ndarray,
    weight_decay: float = 0.0,
) -> Tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy of softmax(H W + b) plus 0.5 * weight_decay * (|W|^2 + |b|^2).

    Returns (loss, dL/dW, dL/db).
    """
    n = H.shape[0]
    logits = H @ W + b
    log_probs = log_softmax(logits)
    rows = np.arange(n)
    loss = -np.mean(log_probs[rows, y])
    loss += 0.5 * weight_decay * (np.sum(W * W) + np.sum(b * b))

    residual = np.exp(log_probs)
    residual[rows, y] -= 1.0
    residual /= n
    grad_W = H.T @ residual + weight_decay * W
    grad_b = residual.sum(axis=0) + weight_decay * b
    return float(loss), grad_W, grad_b


class SGDWithMomentum:
    """
    SGD with heavy-ball momentum: v <- momentum * v + g; p <- p - lr * v.
    """
    def __init__(self, params: Dict[str, np.ndarray], lr: float = 0.01, momentum: float = 0.9):
        self.params = params
        self.lr = lr
        self.momentum = momentum
        self.velocities = {name: np.zeros_like(value) for name, value in params.items()}

    def step(self, grads: Dict[str, np.ndarray]):
        """
        Update each parameter in place using momentum.
        """
        for name, grad in grads.items():
            velocity = self.velocities[name]
            velocity *= self.momentum
            velocity += grad
            self.params[name] -= self.lr * velocity


class CosineLRDecay:
    """
    Adjust optimizer.lr using a cosine decay schedule over the epochs.
    """
    def __init__(self, optimizer: SGDWithMomentum, initial_lr: float, max_epochs: int):
        self.optimizer = optimizer
        self.initial_lr = initial_lr
        self.max_epochs = max_epochs

    def step(self, current_epoch: int):
        self.optimizer.lr = 0.5 * self.initial_lr * (1.0 + math.cos(math.pi * current_epoch / self.max_epochs))
