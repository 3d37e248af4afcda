"""
plot command: comparison chart from an existing results directory
"""

import logging
from pathlib import Path
from typing import Optional

from app.core.exceptions import ReportError
from app.report.plot import render_curves
from app.report.writer import CURVES_FILE, PLOT_FILE, read_curves

logger = logging.getLogger(__name__)


def cmd_plot(results_dir: str, out: Optional[str] = None) -> int:
    """Render curves.csv of ``results_dir``; 2 when it is missing or malformed"""
    try:
        curves = read_curves(Path(results_dir) / CURVES_FILE)
    except ReportError as error:
        logger.error(f"Cannot plot: {error}", extra={"path": error.path})
        return 2

    render_curves(curves, Path(out) if out else Path(results_dir) / PLOT_FILE)
    return 0
