"""
Synthetic dataset generators and dataset-regime presets
"""

import itertools
import logging
import math
from typing import Dict, List, Sequence

import numpy as np

from app.core.exceptions import DatasetError
from app.models.dataset import Dataset, MixtureSpec

logger = logging.getLogger(__name__)


def generate_mixture(spec: MixtureSpec) -> Dataset:
    """Draw ``spec.per_class_counts[k]`` samples from N(mean_k, stddev^2 I), class by class"""
    rng = np.random.default_rng(spec.seed)
    means = np.asarray(spec.class_means, dtype=np.float64)

    blocks, labels = [], []
    for label, count in enumerate(spec.per_class_counts):
        blocks.append(means[label] + spec.class_stddev * rng.standard_normal((count, spec.dims)))
        labels.append(np.full(count, label, dtype=np.int64))

    dataset = Dataset(
        features=np.vstack(blocks),
        labels=np.concatenate(labels),
        class_count=spec.class_count,
        name=spec.name,
    )
    logger.debug("Generated mixture", extra={"path": spec.name})
    return dataset


def grid_means(class_count: int, dims: int, spacing: float = 1.0) -> List[List[float]]:
    """First ``class_count`` points of a unit-spaced grid in ``dims`` dimensions"""
    side = max(2, math.ceil(class_count ** (1.0 / dims)))
    corners = itertools.islice(itertools.product(range(side), repeat=dims), class_count)
    points = [[spacing * coordinate for coordinate in point] for point in corners]
    if len(points) < class_count:
        raise DatasetError(f"cannot place {class_count} classes on a grid in {dims} dimensions")
    return points


def grid_mixture_spec(
    class_count: int,
    dims: int,
    per_class_counts: Sequence[int],
    stddev: float,
    spacing: float = 1.0,
    seed: int = 0,
    name: str = "grid-mixture",
) -> MixtureSpec:
    """Mixture whose class means sit on a grid with the given spacing"""
    return MixtureSpec(
        class_count=class_count,
        dims=dims,
        per_class_counts=list(per_class_counts),
        class_means=grid_means(class_count, dims, spacing),
        class_stddev=stddev,
        seed=seed,
        name=name,
    )


def inject_label_noise(ds: Dataset, rate: float, seed: int) -> Dataset:
    """Replace exactly round(rate * n) labels by a uniformly drawn different class"""
    if not 0.0 <= rate <= 1.0:
        raise DatasetError(f"noise rate must lie in [0, 1], got {rate}")
    flips = int(round(rate * ds.size))
    if flips == 0:
        return ds

    rng = np.random.default_rng(seed)
    chosen = rng.choice(ds.size, size=flips, replace=False)
    # offset in 1..K-1 never maps a label to itself
    offsets = rng.integers(1, ds.class_count, size=flips)
    labels = ds.labels.copy()
    labels[chosen] = (labels[chosen] + offsets) % ds.class_count

    logger.info(f"Flipped {flips} of {ds.size} labels", extra={"path": ds.name})
    return Dataset(features=ds.features, labels=labels, class_count=ds.class_count, name=ds.name)


# Desk-scale class-count regimes; counts are per class before scaling
PRESETS: Dict[str, dict] = {
    "balanced": {"counts": [300] * 10, "dims": 8, "stddev": 0.45, "noise": 0.0},
    "medical": {"counts": [1576, 2229, 679, 516], "dims": 4, "stddev": 0.5, "noise": 0.0},
    "braintumor": {"counts": [1139, 542, 740], "dims": 4, "stddev": 0.5, "noise": 0.0},
    "inspection": {"counts": [2215, 116], "dims": 2, "stddev": 0.45, "noise": 0.0},
    "noisy": {"counts": [2500, 100, 100, 100, 100, 100], "dims": 4, "stddev": 0.45, "noise": 0.1},
}

# Collapse maps used with f1-binary for the anomaly-style presets
PRESET_COLLAPSE: Dict[str, Dict[int, int]] = {
    "inspection": {0: 0, 1: 1},
    "noisy": {0: 0, 1: 1, 2: 1, 3: 1, 4: 1, 5: 1},
}


def preset_spec(name: str, scale: float = 1.0, seed: int = 0) -> MixtureSpec:
    """Mixture spec of a named regime with every class count multiplied by ``scale``"""
    if name not in PRESETS:
        raise DatasetError(f"unknown preset '{name}', expected one of {sorted(PRESETS)}")
    preset = PRESETS[name]
    counts = [max(2, int(round(count * scale))) for count in preset["counts"]]
    return grid_mixture_spec(
        class_count=len(counts),
        dims=preset["dims"],
        per_class_counts=counts,
        stddev=preset["stddev"],
        seed=seed,
        name=name,
    )


def preset_dataset(name: str, scale: float = 1.0, seed: int = 0) -> Dataset:
    """Generate a preset, applying its label noise"""
    dataset = generate_mixture(preset_spec(name, scale, seed))
    noise = PRESETS[name]["noise"]
    if noise > 0:
        dataset = inject_label_noise(dataset, noise, seed)
    return dataset
