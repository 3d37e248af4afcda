"""
Reporting data models
"""

from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator


class CollapseMap(BaseModel):
    """Many-to-binary class mapping for anomaly-style F1"""
    model_config = ConfigDict(frozen=True)

    mapping: Dict[int, int] = Field(description="Class id -> 0 (normal) or 1 (anomaly)")

    @field_validator("mapping")
    @classmethod
    def _check_sides(cls, value):
        if any(side not in (0, 1) for side in value.values()):
            raise ValueError("classes must map to 0 or 1")
        if set(value.values()) != {0, 1}:
            raise ValueError("at least one class must map to each side")
        return value

    @classmethod
    def identity(cls) -> "CollapseMap":
        return cls(mapping={0: 0, 1: 1})

    def covers(self, class_count: int) -> bool:
        return all(label in self.mapping for label in range(class_count))


class Curve(BaseModel):
    """Metric as a function of the number of annotated samples"""
    model_config = ConfigDict(frozen=True)

    name: str = Field(default="curve", description="Legend label")
    points: List[Tuple[int, float]] = Field(description="(labeled_count, metric_value) pairs")

    @field_validator("points")
    @classmethod
    def _check_points(cls, value):
        counts = [count for count, _ in value]
        if any(later <= earlier for earlier, later in zip(counts, counts[1:])):
            raise ValueError("labeled counts must be strictly increasing")
        if any(not 0 <= metric <= 1 for _, metric in value):
            raise ValueError("metric values must lie in [0, 1]")
        return value

    @property
    def counts(self) -> List[int]:
        return [count for count, _ in self.points]

    @property
    def values(self) -> List[float]:
        return [metric for _, metric in self.points]
