"""
Shared pytest fixtures for the active learning benchmark
"""

import numpy as np
import pytest

from app.models.dataset import Dataset, MixtureSpec
from app.models.learner import LearnerConfig, LearnerKind
from app.models.run import DatasetSource, RunConfig
from app.models.strategy import StrategyConfig
from app.pooldata.generators import generate_mixture, grid_mixture_spec
from app.pooldata.pool import split


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False, help="Run the long statistical checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long statistical acceptance checks (enable with --run-slow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def two_blob_spec() -> MixtureSpec:
    """Two well separated 2-D classes"""
    return MixtureSpec(
        class_count=2,
        dims=2,
        per_class_counts=[60, 60],
        class_means=[[-3.0, 0.0], [3.0, 0.0]],
        class_stddev=0.5,
        seed=7,
        name="two-blobs",
    )


@pytest.fixture
def two_blobs(two_blob_spec) -> Dataset:
    return generate_mixture(two_blob_spec)


@pytest.fixture
def grid_data():
    """Four-class grid mixture split into train and test"""
    spec = grid_mixture_spec(class_count=4, dims=2, per_class_counts=[50] * 4, stddev=0.3, seed=3, name="grid")
    return split(generate_mixture(spec), 0.8, seed=0)


@pytest.fixture
def fast_learner() -> LearnerConfig:
    return LearnerConfig(epochs=15, batch_size=20, embedding_dim=16)


@pytest.fixture
def centroid_learner() -> LearnerConfig:
    return LearnerConfig(kind=LearnerKind.NEAREST_CENTROID)


@pytest.fixture
def grid_source() -> DatasetSource:
    spec = grid_mixture_spec(class_count=4, dims=2, per_class_counts=[50] * 4, stddev=0.3, seed=3, name="grid")
    return DatasetSource(mixture=spec)


@pytest.fixture
def make_config(grid_source, fast_learner):
    """RunConfig factory over the grid mixture with a fast learner"""

    def _make(strategy: str = "random", **overrides) -> RunConfig:
        fields = {
            "dataset": grid_source,
            "strategy": StrategyConfig(name=strategy, mc_T=8),
            "learner": fast_learner,
            "cycles": 4,
            "budget_fraction": 0.1,
            "seeds": [0],
        }
        fields.update(overrides)
        return RunConfig(**fields)

    return _make


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
