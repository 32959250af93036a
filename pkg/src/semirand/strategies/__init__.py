"""Player strategies for the semi-random process."""
from .base import Strategy
from .degeneracy import DegeneracyBuilder, EmbeddingState
from .k6 import K6Builder
from .loose_cycle import LooseCycleBuilder
from .passive import PassiveStrategy
from .starplus import PhasePlan, StarplusBuilder, make_plan

__all__ = [
    "Strategy",
    "PassiveStrategy",
    "DegeneracyBuilder",
    "EmbeddingState",
    "StarplusBuilder",
    "PhasePlan",
    "make_plan",
    "K6Builder",
    "LooseCycleBuilder",
]
