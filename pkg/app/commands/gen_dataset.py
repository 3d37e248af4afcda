"""
gen-dataset command: write a generated dataset in the tabular format
"""

import logging
from pathlib import Path
from typing import Optional

from app.core.config import settings
from app.core.config_file import parse_config_file
from app.core.exceptions import ConfigurationError
from app.pooldata.generators import generate_mixture, inject_label_noise, preset_dataset, preset_spec
from app.pooldata.sources import label_noise_for
from app.pooldata.tables import save_table

logger = logging.getLogger(__name__)


def cmd_gen_dataset(
    config_path: Optional[str] = None,
    preset: Optional[str] = None,
    scale: float = 1.0,
    seed: int = 0,
    out: Optional[str] = None,
) -> int:
    """Generate from a preset or from the [dataset] section of a benchmark file"""
    if (config_path is None) == (preset is None):
        raise ConfigurationError("gen-dataset needs exactly one of --config or --preset")

    if preset is not None:
        dataset = preset_dataset(preset, scale, seed)
    else:
        source = parse_config_file(config_path).dataset
        if source.mixture is not None:
            dataset = generate_mixture(source.mixture)
        elif source.preset is not None:
            dataset = generate_mixture(preset_spec(source.preset, source.scale, source.preset_seed))
        else:
            raise ConfigurationError("gen-dataset needs a generated dataset, not a file path")
        noise = label_noise_for(source)
        if noise > 0:
            dataset = inject_label_noise(dataset, noise, source.noise_seed)

    path = Path(out) if out else Path(settings.DEFAULT_OUTPUT_DIR) / f"{dataset.name}.csv"
    save_table(dataset, path)
    logger.info(
        f"Generated {dataset.size} samples of {dataset.class_count} classes",
        extra={"path": str(path)},
    )
    return 0
