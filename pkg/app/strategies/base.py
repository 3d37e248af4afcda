"""
Base class for query strategies
"""

from abc import ABC, abstractmethod
from typing import FrozenSet

from app.core.exceptions import ConfigurationError
from app.core.seeding import SeedLike
from app.models.dataset import PoolState, QueryBatch
from app.models.strategy import ModelView, StrategyConfig, StrategyName


class QueryStrategy(ABC):
    """Base class for query strategies.

    ``requires`` names the ModelView fields the strategy reads; the loop only
    computes those.
    """

    name: StrategyName
    requires: FrozenSet[str] = frozenset()

    def __init__(self, config: StrategyConfig):
        self.config = config

    def check_view(self, view: ModelView, pool: PoolState):
        missing = sorted(field for field in self.requires if getattr(view, field) is None)
        if missing:
            raise ConfigurationError(f"strategy '{self.name.value}' needs view fields {missing}")
        try:
            view.check_unlabeled_rows(len(pool.unlabeled))
        except ValueError as error:
            raise ConfigurationError(str(error))

    @abstractmethod
    def query(self, view: ModelView, pool: PoolState, b: int, seed: SeedLike, cycle: int = 0) -> QueryBatch:
        """Select b unlabeled indices"""
        pass
