"""
verify command: queries come from a model trained on all training data
"""

import logging

from app.commands.run import execute
from app.models.run import Overrides, RunMode

logger = logging.getLogger(__name__)


def cmd_verify(config_path: str, overrides: Overrides) -> int:
    suites = execute(config_path, overrides, mode=RunMode.VERIFICATION)
    for suite in suites:
        logger.info(
            "Fully-trained oracle performance",
            extra={
                "strategy": suite.strategy,
                "metric": round(suite.oracle_metric, 6),
                "mode": suite.mode.value,
            },
        )
    return 0
