"""
run command: every configured strategy over one dataset, results written to disk
"""

import logging
import time
from pathlib import Path
from typing import List, Optional

from app.core.config import settings
from app.core.config_file import build_run_configs, parse_config_file
from app.loop.runner import run_suite
from app.models.run import Overrides, RunMode, SuiteResult
from app.pooldata.sources import load_source
from app.report.writer import write_results

logger = logging.getLogger(__name__)


def execute(config_path: str, overrides: Overrides, mode: Optional[RunMode] = None) -> List[SuiteResult]:
    """Parse, run every strategy's suite on a shared dataset and write the results"""
    start_time = time.time()
    plan = parse_config_file(config_path)
    configs = build_run_configs(plan, overrides, mode=mode)
    data = load_source(plan.dataset)

    suites = []
    for cfg in configs:
        logger.info(
            f"Running {len(cfg.seeds)} seeds x {cfg.cycles} cycles",
            extra={"strategy": cfg.strategy.name.value, "mode": cfg.mode.value},
        )
        suites.append(run_suite(cfg, data))

    out_dir = Path(overrides.out or plan.output_dir or settings.DEFAULT_OUTPUT_DIR)
    provenance = {
        "command": (mode or RunMode.STANDARD).value,
        "config": str(config_path),
        "overrides": overrides.given(),
    }
    write_results(suites, out_dir, provenance=provenance)

    logger.info(
        f"Finished {len(suites)} strategies",
        extra={"path": str(out_dir), "elapsed_sec": round(time.time() - start_time, 3)},
    )
    return suites


def cmd_run(config_path: str, overrides: Overrides) -> int:
    execute(config_path, overrides)
    return 0
