"""
Tabular dataset files.

Format: a header line ``# classes=<K>``, then one sample per line as
comma-separated reals followed by an integer label. UTF-8, ``.`` decimal
separator. Blank lines are ignored.
"""

import logging
import math
import re
from pathlib import Path
from typing import List, Union

import numpy as np

from app.core.exceptions import ReportError, TableParseError
from app.models.dataset import Dataset

logger = logging.getLogger(__name__)

HEADER_PATTERN = re.compile(r"^#\s*classes\s*=\s*(\d+)\s*$")
# plain decimal or exponent notation; no digit grouping
FEATURE_PATTERN = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$|^[+-]?(nan|inf|infinity)$", re.IGNORECASE)
LABEL_PATTERN = re.compile(r"^[+-]?\d+$")


def load_table(path: Union[str, Path]) -> Dataset:
    """Parse a tabular dataset file; errors name the offending line"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise TableParseError("file not found", str(path))
    except (OSError, UnicodeDecodeError) as error:
        raise TableParseError(f"cannot read file: {error}", str(path))

    lines = text.splitlines()
    if not lines:
        raise TableParseError("missing '# classes=<K>' header", str(path), 1)
    header = HEADER_PATTERN.match(lines[0].strip())
    if not header:
        raise TableParseError("first line must be '# classes=<K>'", str(path), 1)
    class_count = int(header.group(1))
    if class_count < 2:
        raise TableParseError("class count must be at least 2", str(path), 1)

    rows: List[List[float]] = []
    labels: List[int] = []
    width = None
    for line_number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        tokens = [token.strip() for token in line.split(",")]
        if len(tokens) < 2:
            raise TableParseError("expected at least one feature and a label", str(path), line_number)
        if width is None:
            width = len(tokens)
        elif len(tokens) != width:
            raise TableParseError(f"expected {width} columns, found {len(tokens)}", str(path), line_number)

        if not all(FEATURE_PATTERN.match(token) for token in tokens[:-1]):
            raise TableParseError("malformed feature value", str(path), line_number)
        values = [float(token) for token in tokens[:-1]]
        if not all(math.isfinite(value) for value in values):
            raise TableParseError("non-finite feature value", str(path), line_number)

        if not LABEL_PATTERN.match(tokens[-1]):
            raise TableParseError(f"label '{tokens[-1]}' is not an integer", str(path), line_number)
        label = int(tokens[-1])
        if not 0 <= label < class_count:
            raise TableParseError(f"label {label} outside [0, {class_count})", str(path), line_number)

        rows.append(values)
        labels.append(label)

    if not rows:
        raise TableParseError("no samples", str(path))

    logger.info(f"Loaded {len(rows)} samples", extra={"path": str(path)})
    return Dataset(features=np.asarray(rows), labels=np.asarray(labels), class_count=class_count, name=path.stem)


def save_table(ds: Dataset, path: Union[str, Path]) -> Path:
    """Write ``ds`` in the tabular format with round-trip float precision"""
    path = Path(path)
    lines = [f"# classes={ds.class_count}"]
    for row, label in zip(ds.features, ds.labels):
        lines.append(",".join(repr(float(value)) for value in row) + f",{int(label)}")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as error:
        raise ReportError(f"cannot write table: {error}", str(path))

    logger.info(f"Wrote {ds.size} samples", extra={"path": str(path)})
    return path
