"""
Evaluation metrics and curve summaries
"""

from typing import Dict, Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid
from sklearn.metrics import accuracy_score, confusion_matrix

from app.core.exceptions import ContractViolation
from app.models.dataset import PoolState
from app.models.report import CollapseMap, Curve


def _check_pair(pred: Sequence[int], truth: Sequence[int]):
    pred = np.asarray(pred, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    if pred.shape != truth.shape:
        raise ContractViolation(f"{pred.size} predictions for {truth.size} labels")
    if pred.size == 0:
        raise ContractViolation("metrics need at least one sample")
    return pred, truth


def accuracy(pred: Sequence[int], truth: Sequence[int]) -> float:
    """Fraction of exact matches"""
    pred, truth = _check_pair(pred, truth)
    return float(accuracy_score(truth, pred))


def collapse(labels: np.ndarray, collapse_map: CollapseMap) -> np.ndarray:
    unmapped = sorted(set(int(label) for label in np.unique(labels)) - set(collapse_map.mapping))
    if unmapped:
        raise ContractViolation(f"classes {unmapped} are not in the collapse map")
    lookup = np.zeros(max(collapse_map.mapping) + 1, dtype=np.int64)
    for label, side in collapse_map.mapping.items():
        lookup[label] = side
    return lookup[labels]


def f1_binary(pred: Sequence[int], truth: Sequence[int], collapse_map: Optional[CollapseMap] = None) -> float:
    """F1 of the collapsed anomaly class (1): 2TP / (2TP + FP + FN), 0 when undefined"""
    pred, truth = _check_pair(pred, truth)
    collapse_map = collapse_map or CollapseMap.identity()
    _, fp, fn, tp = confusion_matrix(
        collapse(truth, collapse_map), collapse(pred, collapse_map), labels=[0, 1]
    ).ravel()
    denominator = 2 * tp + fp + fn
    if denominator == 0:
        return 0.0
    return float(2 * tp / denominator)


def class_histogram(pool: PoolState, labels: Sequence[int], K: int) -> np.ndarray:
    """Labeled samples per class"""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape[0] != pool.dataset_size:
        raise ContractViolation(f"{labels.shape[0]} labels for a pool over {pool.dataset_size} samples")
    return np.bincount(labels[pool.labeled_array()], minlength=K)


def aubc(curve: Curve) -> float:
    """Area under the budget curve, normalized by the labeled-count range"""
    if len(curve.points) < 2:
        raise ContractViolation("AUBC needs at least two points")
    counts = np.asarray(curve.counts, dtype=np.float64)
    values = np.asarray(curve.values, dtype=np.float64)
    return float(trapezoid(values, counts) / (counts[-1] - counts[0]))


def annotation_savings(curves: Dict[str, Curve], reference: str = "random") -> Dict[str, dict]:
    """Labeled count at which each curve first reaches the reference's final value.

    ``reduction`` is the relative saving versus the reference's final labeled
    count; ``None`` when the curve never gets there.
    """
    if reference not in curves:
        return {}
    target_curve = curves[reference]
    target = target_curve.values[-1]
    budget = target_curve.counts[-1]

    savings = {}
    for name, curve in curves.items():
        reached = next((count for count, value in curve.points if value >= target), None)
        savings[name] = {
            "target_metric": target,
            "labeled_count": reached,
            "reduction": None if reached is None else (budget - reached) / budget,
        }
    return savings
