"""
Resolve a DatasetSource into training and test datasets
"""

import logging
from typing import Tuple

from app.core.exceptions import DatasetError
from app.models.dataset import Dataset
from app.models.run import DatasetSource
from app.pooldata.generators import PRESETS, generate_mixture, inject_label_noise, preset_spec
from app.pooldata.pool import reduce_dataset, split
from app.pooldata.tables import load_table

logger = logging.getLogger(__name__)


def label_noise_for(source: DatasetSource) -> float:
    """Explicit ``label_noise`` wins, even 0; otherwise the preset's own noise"""
    if source.label_noise is not None:
        return source.label_noise
    if source.preset is not None:
        return PRESETS.get(source.preset, {}).get("noise", 0.0)
    return 0.0


def load_source(source: DatasetSource) -> Tuple[Dataset, Dataset]:
    """Generate or read the data, split it, then reduce and corrupt the training part"""
    noise = label_noise_for(source)
    if source.mixture is not None:
        full = generate_mixture(source.mixture)
    elif source.preset is not None:
        full = generate_mixture(preset_spec(source.preset, source.scale, source.preset_seed))
    else:
        full = load_table(source.path)

    if source.test_path is not None:
        train, test = full, load_table(source.test_path)
        if test.class_count != train.class_count or test.dims != train.dims:
            raise DatasetError("test table must match the training table's classes and columns")
    else:
        train, test = split(full, source.train_fraction, source.split_seed)

    if source.reduce_to is not None:
        train = reduce_dataset(train, source.reduce_to, source.split_seed)
    if noise > 0:
        # only training labels are noisy; evaluation stays clean
        train = inject_label_noise(train, noise, source.noise_seed)

    logger.info(
        f"Prepared {train.name}: {train.size} train / {test.size} test samples, "
        f"class counts {train.class_counts().tolist()}"
    )
    return train, test
