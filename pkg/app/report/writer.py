"""
Result files: curves.csv, labeled_hist.csv, summary.json and curves.svg
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from app.core.exceptions import ContractViolation, ReportError
from app.models.report import Curve
from app.models.run import SuiteResult
from app.report.metrics import annotation_savings, aubc
from app.report.plot import render_curves

logger = logging.getLogger(__name__)

CURVES_FILE = "curves.csv"
HISTOGRAM_FILE = "labeled_hist.csv"
SUMMARY_FILE = "summary.json"
PLOT_FILE = "curves.svg"

CURVES_COLUMNS = ["strategy", "seed", "cycle", "labeled_count", "metric", "value"]
HISTOGRAM_COLUMNS = ["strategy", "seed", "cycle", "class", "count"]


def mean_curve(suite: SuiteResult) -> Curve:
    """Seed-averaged learning curve of one suite"""
    return Curve(name=suite.strategy, points=list(zip(suite.labeled_counts, suite.mean_curve)))


def _aubc_or_none(curve: Curve) -> Optional[float]:
    return aubc(curve) if len(curve.points) >= 2 else None


def curves_frame(suites: Sequence[SuiteResult]) -> pd.DataFrame:
    rows = [
        (suite.strategy, run.seed, record.cycle, record.labeled_count, suite.metric.value, record.metric_value)
        for suite in suites
        for run in suite.runs
        for record in run.records
    ]
    return pd.DataFrame(rows, columns=CURVES_COLUMNS)


def histogram_frame(suites: Sequence[SuiteResult]) -> pd.DataFrame:
    rows = [
        (suite.strategy, run.seed, record.cycle, label, count)
        for suite in suites
        for run in suite.runs
        for record in run.records
        for label, count in enumerate(record.per_class_labeled)
    ]
    return pd.DataFrame(rows, columns=HISTOGRAM_COLUMNS)


def summarize(suites: Sequence[SuiteResult], provenance: Optional[dict] = None) -> dict:
    """Content of summary.json"""
    curves = {suite.strategy: mean_curve(suite) for suite in suites}
    strategies = {}
    for suite in suites:
        per_class = np.array([[record.per_class_labeled for record in run.records] for run in suite.runs])
        strategies[suite.strategy] = {
            "mode": suite.mode.value,
            "metric": suite.metric.value,
            "seeds": suite.seeds,
            "labeled_counts": suite.labeled_counts,
            "mean_curve": suite.mean_curve,
            "aubc": _aubc_or_none(curves[suite.strategy]),
            "aubc_per_seed": {
                str(run.seed): _aubc_or_none(
                    Curve(points=[(record.labeled_count, record.metric_value) for record in run.records])
                )
                for run in suite.runs
            },
            "mean_per_class_labeled": per_class.mean(axis=0).tolist(),
            "oracle_metric": suite.oracle_metric,
            "oracle_metric_per_seed": {
                str(run.seed): run.oracle_metric for run in suite.runs if run.oracle_metric is not None
            },
            "config": suite.config,
        }
    return {
        "strategies": strategies,
        "annotation_savings": annotation_savings(curves),
        "provenance": provenance or {},
    }


def write_results(
    suites: Union[SuiteResult, Sequence[SuiteResult]],
    out_dir: Union[str, Path],
    provenance: Optional[dict] = None,
) -> List[Path]:
    """Write every result file for ``suites`` into ``out_dir``; returns the written paths"""
    if isinstance(suites, SuiteResult):
        suites = [suites]
    suites = list(suites)
    if not suites:
        raise ContractViolation("no suite results to write")
    names = [suite.strategy for suite in suites]
    if len(set(names)) != len(names):
        raise ContractViolation(f"strategies must be unique, got {names}")

    out_dir = Path(out_dir)
    paths = [out_dir / name for name in (CURVES_FILE, HISTOGRAM_FILE, SUMMARY_FILE)]
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        curves_frame(suites).to_csv(paths[0], index=False, lineterminator="\n")
        histogram_frame(suites).to_csv(paths[1], index=False, lineterminator="\n")
        paths[2].write_text(json.dumps(summarize(suites, provenance), indent=2, sort_keys=True) + "\n")
    except OSError as error:
        raise ReportError(str(error), str(out_dir)) from error

    curves = {suite.strategy: mean_curve(suite) for suite in suites}
    paths.append(render_curves(curves, out_dir / PLOT_FILE, metric_label=suites[0].metric.value))

    logger.info(f"Wrote results for {len(suites)} strategies", extra={"path": str(out_dir)})
    return paths


def read_curves(path: Union[str, Path]) -> Dict[str, Curve]:
    """Seed-averaged curves per strategy from a curves.csv file"""
    path = Path(path)
    if not path.is_file():
        raise ReportError("curves file not found", str(path))
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as error:
        raise ReportError(f"malformed curves file: {error}", str(path)) from error

    missing = [column for column in CURVES_COLUMNS if column not in frame.columns]
    if missing:
        raise ReportError(f"missing columns {missing}", str(path))
    if frame.empty:
        raise ReportError("curves file has no rows", str(path))
    for column in ("seed", "cycle", "labeled_count", "value"):
        try:
            frame[column] = pd.to_numeric(frame[column], errors="raise")
        except (ValueError, TypeError) as error:
            raise ReportError(f"non-numeric {column} values", str(path)) from error

    curves = {}
    # sort=False keeps strategies in file order
    for strategy, rows in frame.groupby("strategy", sort=False):
        means = rows.groupby("cycle").agg(labeled_count=("labeled_count", "mean"), value=("value", "mean"))
        try:
            curves[str(strategy)] = Curve(
                name=str(strategy),
                points=[(int(row.labeled_count), float(row.value)) for row in means.itertuples()],
            )
        except ValueError as error:
            raise ReportError(f"invalid curve for {strategy}: {error}", str(path)) from error
    return curves
