"""
Uncertainty scores over probability rows
"""

import numpy as np

from app.core.exceptions import ContractViolation


def _entropy(probs: np.ndarray) -> np.ndarray:
    """-sum p ln p over the last axis with 0 ln 0 = 0"""
    logs = np.log(np.where(probs > 0, probs, 1.0))
    return -np.sum(probs * logs, axis=-1)


def entropy_scores(P: np.ndarray) -> np.ndarray:
    """Shannon entropy (nats) per row; larger is more uncertain"""
    return _entropy(np.asarray(P, dtype=np.float64))


def margin_scores(P: np.ndarray) -> np.ndarray:
    """Top-1 minus top-2 probability per row; smaller is more uncertain"""
    P = np.asarray(P, dtype=np.float64)
    if P.shape[1] < 2:
        raise ContractViolation("margin needs at least two classes")
    top_two = -np.partition(-P, 1, axis=1)[:, :2]
    return top_two[:, 0] - top_two[:, 1]


def bald_scores(Tns: np.ndarray) -> np.ndarray:
    """Mutual information H(mean_T p) - mean_T H(p) per row, clamped at 0"""
    Tns = np.asarray(Tns, dtype=np.float64)
    mean_entropy = _entropy(Tns.mean(axis=0))
    expected_entropy = _entropy(Tns).mean(axis=0)
    return np.maximum(mean_entropy - expected_entropy, 0.0)
