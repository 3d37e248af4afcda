"""
Experiment protocol data models
"""

from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.dataset import MixtureSpec
from app.models.learner import LearnerConfig
from app.models.strategy import StrategyConfig

SCHEDULE_TOLERANCE = 1e-9


class Metric(str, Enum):
    """Test metric"""
    ACCURACY = "accuracy"
    F1_BINARY = "f1-binary"


class RunMode(str, Enum):
    """Standard cycle protocol or the fully-trained-oracle verification variant"""
    STANDARD = "standard"
    VERIFICATION = "verification"


class DatasetSource(BaseModel):
    """Where the training and test data come from"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    mixture: Optional[MixtureSpec] = Field(default=None, description="Gaussian mixture generator spec")
    preset: Optional[str] = Field(default=None, description="Named dataset-regime preset")
    scale: float = Field(default=1.0, gt=0, description="Count multiplier for presets")
    preset_seed: int = Field(default=0, ge=0, description="Generator seed for presets")
    path: Optional[str] = Field(default=None, description="Tabular file with the training (or full) data")
    test_path: Optional[str] = Field(default=None, description="Tabular file with held-out test data")
    train_fraction: float = Field(default=0.8, gt=0, lt=1, description="Stratified split when no test file")
    split_seed: int = Field(default=0, ge=0, description="Seed of the train/test split")
    reduce_to: Optional[int] = Field(default=None, ge=2, description="Stratified reduction of the training part")
    label_noise: Optional[float] = Field(
        default=None, ge=0, le=1, description="Fraction of training labels flipped; None uses the preset's noise"
    )
    noise_seed: int = Field(default=0, ge=0, description="Seed of the label flips")

    @model_validator(mode="after")
    def _one_source(self):
        given = [name for name in ("mixture", "preset", "path") if getattr(self, name) is not None]
        if len(given) != 1:
            raise ValueError("exactly one of mixture, preset or path is required")
        if self.test_path is not None and self.path is None:
            raise ValueError("test_path requires path")
        return self


class RunConfig(BaseModel):
    """One strategy evaluated under the cycle protocol"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    dataset: DatasetSource
    strategy: StrategyConfig
    learner: LearnerConfig = Field(default_factory=LearnerConfig)
    oracle_learner: Optional[LearnerConfig] = Field(
        default=None, description="Learner of the verification oracle; defaults to learner"
    )
    budget_fraction: float = Field(default=0.1, gt=0, le=1, description="Share of the training data queried per cycle")
    cycles: int = Field(default=10, ge=1, description="Number of cycles C")
    seeds: List[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4], description="Master seeds")
    metric: Metric = Field(default=Metric.ACCURACY, description="Test metric")
    collapse_map: Optional[Dict[int, int]] = Field(default=None, description="Class -> {0 normal, 1 anomaly}")
    mode: RunMode = Field(default=RunMode.STANDARD, description="standard or verification")

    @field_validator("seeds")
    @classmethod
    def _check_seeds(cls, value):
        if not value:
            raise ValueError("seeds must not be empty")
        if any(seed < 0 for seed in value):
            raise ValueError("seeds must be unsigned")
        if len(set(value)) != len(value):
            raise ValueError("seeds must be distinct")
        return value

    @model_validator(mode="after")
    def _check_budget(self):
        if self.cycles * self.budget_fraction > 1 + SCHEDULE_TOLERANCE:
            raise ValueError("cycles x budget_fraction exceeds the training data")
        return self

    @property
    def query_learner(self) -> LearnerConfig:
        return self.oracle_learner or self.learner


class CycleRecord(BaseModel):
    """Measurements after one cycle"""
    model_config = ConfigDict(frozen=True)

    cycle: int = Field(ge=0)
    labeled_count: int = Field(ge=0, description="|L_c| after the commit")
    metric_value: float = Field(ge=0, le=1, description="Test metric of the model trained on L_c")
    per_class_labeled: Tuple[int, ...] = Field(description="Labeled samples per class")
    queried_indices: Tuple[int, ...] = Field(description="Q_c in selection order")

    @model_validator(mode="after")
    def _check_counts(self):
        if sum(self.per_class_labeled) != self.labeled_count:
            raise ValueError("per-class counts must sum to labeled_count")
        return self


class SeedRun(BaseModel):
    """Cycle records of one seed"""
    model_config = ConfigDict(frozen=True)

    seed: int
    records: List[CycleRecord]
    oracle_metric: Optional[float] = Field(default=None, description="Test metric of the verification oracle")


class SuiteResult(BaseModel):
    """All seeds of one strategy, averaged per cycle"""
    model_config = ConfigDict(frozen=True)

    strategy: str
    mode: RunMode
    metric: Metric
    runs: List[SeedRun] = Field(description="One entry per seed, sorted by seed")
    labeled_counts: List[int] = Field(description="|L_c| per cycle, shared by all seeds")
    mean_curve: List[float] = Field(description="Arithmetic mean metric per cycle")
    config: dict = Field(description="Config snapshot")

    @model_validator(mode="after")
    def _check_lengths(self):
        lengths = {len(run.records) for run in self.runs}
        if len(lengths) != 1:
            raise ValueError("all seeds must produce the same number of cycles")
        if len(self.mean_curve) != lengths.pop() or len(self.labeled_counts) != len(self.mean_curve):
            raise ValueError("mean_curve must have one value per cycle")
        return self

    @property
    def seeds(self) -> List[int]:
        return [run.seed for run in self.runs]

    @property
    def per_seed(self) -> List[List[CycleRecord]]:
        return [run.records for run in self.runs]

    @property
    def oracle_metric(self) -> Optional[float]:
        values = [run.oracle_metric for run in self.runs if run.oracle_metric is not None]
        if not values:
            return None
        return sum(values) / len(values)


class BenchmarkPlan(BaseModel):
    """Parsed benchmark file: shared dataset and learners, one entry per strategy"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    dataset: DatasetSource
    learner: LearnerConfig = Field(default_factory=LearnerConfig)
    oracle_learner: Optional[LearnerConfig] = None
    strategies: List[StrategyConfig] = Field(description="Strategies in file order")
    protocol: Dict[str, object] = Field(default_factory=dict, description="RunConfig protocol fields")
    output_dir: Optional[str] = Field(default=None, description="Result directory")

    @field_validator("strategies")
    @classmethod
    def _check_strategies(cls, value):
        if not value:
            raise ValueError("at least one [strategy] section is required")
        names = [strategy.name for strategy in value]
        if len(set(names)) != len(names):
            raise ValueError("each strategy may appear once")
        return value


class Overrides(BaseModel):
    """Command-line values that take precedence over the benchmark file"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    seeds: Optional[List[int]] = None
    strategies: Optional[List[str]] = None
    cycles: Optional[int] = Field(default=None, ge=1)
    budget_fraction: Optional[float] = Field(default=None, gt=0, le=1)
    out: Optional[str] = None

    def given(self) -> dict:
        return self.model_dump(exclude_none=True)
