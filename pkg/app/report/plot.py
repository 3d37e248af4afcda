"""
SVG rendering of learning curves
"""

import logging
from pathlib import Path
from typing import Mapping, Sequence, Union

import matplotlib

matplotlib.use("Agg")

from matplotlib import rcParams  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from app.core.exceptions import ContractViolation, ReportError  # noqa: E402
from app.models.report import Curve  # noqa: E402

logger = logging.getLogger(__name__)

# Fixed salt keeps generated element ids stable between runs
SVG_HASH_SALT = "active-learning-curves"
CURVE_GID_PREFIX = "curve-"


def render_curves(
    curves: Union[Mapping[str, Curve], Sequence[Curve]],
    out: Union[str, Path],
    metric_label: str = "metric",
) -> Path:
    """Line chart with one polyline per curve, written as a standalone SVG"""
    if isinstance(curves, Mapping):
        curves = [curve.model_copy(update={"name": name}) for name, curve in curves.items()]
    curves = list(curves)
    if not curves:
        raise ContractViolation("no curves to render")
    if any(not curve.points for curve in curves):
        raise ContractViolation("every curve needs at least one point")

    out = Path(out)
    rcParams["svg.hashsalt"] = SVG_HASH_SALT
    rcParams["svg.fonttype"] = "none"

    figure = Figure(figsize=(7, 4.5))
    axes = figure.add_subplot()
    for curve in curves:
        (line,) = axes.plot(curve.counts, curve.values, marker="o", markersize=3, label=curve.name)
        line.set_gid(f"{CURVE_GID_PREFIX}{curve.name}")
    axes.set_xlabel("annotated samples")
    axes.set_ylabel(metric_label)
    axes.set_ylim(0, 1)
    axes.grid(True, alpha=0.3)
    axes.legend(loc="lower right")
    figure.tight_layout()

    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        figure.savefig(out, format="svg", metadata={"Date": None})
    except OSError as error:
        raise ReportError(str(error), str(out)) from error

    logger.info(f"Rendered {len(curves)} curves", extra={"path": str(out)})
    return out
