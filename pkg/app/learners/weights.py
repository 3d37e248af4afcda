"""
Pretrained weights blob.

Layout, all little-endian:
    5 bytes   magic ``ALQW1`` (format version 1)
    3 x u32   feature_dim d, embedding_dim h, class_count K
    f64[d*h]  lift_weights, row-major (d, h)
    f64[h]    lift_bias
    f64[h*K]  head_weights, row-major (h, K)
    f64[K]    head_bias

Standardization statistics are not stored; they always come from the
training pool the blob is used with.
"""

import logging
from pathlib import Path
from typing import Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from app.core.exceptions import LearnerError
from app.models.learner import FittedModel, LearnerKind

logger = logging.getLogger(__name__)

MAGIC = b"ALQW1"
_HEADER = np.dtype("<u4")
_VALUES = np.dtype("<f8")


class PretrainedWeights(BaseModel):
    """Parameter matrices read from a blob"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    lift_weights: np.ndarray
    lift_bias: np.ndarray
    head_weights: np.ndarray
    head_bias: np.ndarray

    @property
    def feature_dim(self) -> int:
        return int(self.lift_weights.shape[0])

    @property
    def embedding_dim(self) -> int:
        return int(self.lift_weights.shape[1])

    @property
    def class_count(self) -> int:
        return int(self.head_weights.shape[1])


def save_weights(model: FittedModel) -> bytes:
    """Serialize the parameter matrices of a logistic model"""
    if model.kind != LearnerKind.LOGISTIC:
        raise LearnerError("only multinomial-logistic models have a weights blob")
    header = np.array([model.feature_dim, model.embedding_dim, model.class_count], dtype=_HEADER)
    parts = [MAGIC, header.tobytes()]
    for array in (model.lift_weights, model.lift_bias, model.head_weights, model.head_bias):
        parts.append(np.ascontiguousarray(array, dtype=_VALUES).tobytes())
    return b"".join(parts)


def load_weights(blob: bytes) -> PretrainedWeights:
    """Parse a blob written by ``save_weights``"""
    if not blob.startswith(MAGIC):
        raise LearnerError("weights blob does not start with ALQW1")
    offset = len(MAGIC)
    if len(blob) < offset + 3 * _HEADER.itemsize:
        raise LearnerError("weights blob header is truncated")
    d, h, k = (int(v) for v in np.frombuffer(blob, dtype=_HEADER, count=3, offset=offset))
    offset += 3 * _HEADER.itemsize

    shapes = [(d, h), (h,), (h, k), (k,)]
    expected = offset + sum(int(np.prod(shape)) for shape in shapes) * _VALUES.itemsize
    if len(blob) != expected:
        raise LearnerError(f"weights blob has {len(blob)} bytes, expected {expected}")

    arrays = []
    for shape in shapes:
        count = int(np.prod(shape))
        values = np.frombuffer(blob, dtype=_VALUES, count=count, offset=offset).reshape(shape)
        arrays.append(values.astype(np.float64))
        offset += count * _VALUES.itemsize
    if not all(np.all(np.isfinite(array)) for array in arrays):
        raise LearnerError("weights blob contains non-finite values")

    return PretrainedWeights(
        lift_weights=arrays[0], lift_bias=arrays[1], head_weights=arrays[2], head_bias=arrays[3]
    )


def read_weights_file(path: Union[str, Path]) -> PretrainedWeights:
    try:
        blob = Path(path).read_bytes()
    except OSError as error:
        raise LearnerError(f"cannot read weights blob {path}: {error}")
    logger.debug("Loaded pretrained weights", extra={"path": str(path)})
    return load_weights(blob)
