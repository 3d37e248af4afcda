"""
Per-cycle query budgets
"""

import math
from typing import List

from app.core.exceptions import ConfigurationError

# Absorbs binary representation error in fraction * n (e.g. 0.29 * 100)
_EPSILON = 1e-9


def budget_schedule(n_train: int, fraction: float, C: int) -> List[int]:
    """Batch size per cycle: floor(fraction * n) each, with the rounding remainder in cycle 0.

    The intended total is round(fraction * n * C), capped at n. Cycle 0 gets
    ``base + (total - C * base)`` so fractional budgets are queried at random in the
    first cycle.
    """
    if n_train < 1 or C < 1:
        raise ConfigurationError(f"need n_train >= 1 and C >= 1, got {n_train} and {C}")
    base = math.floor(fraction * n_train + _EPSILON)
    if base < 1:
        raise ConfigurationError(f"fraction {fraction} of {n_train} samples is less than one sample")

    total = min(math.floor(fraction * n_train * C + 0.5), n_train)
    first = base + (total - C * base)
    if first < 1:
        raise ConfigurationError(f"{C} cycles of {base} samples exceed the {n_train} training samples")
    return [first] + [base] * (C - 1)
