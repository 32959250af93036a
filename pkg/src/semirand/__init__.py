"""Simulation and exact analysis of the semi-random (hyper)graph process."""
from .hypergraph import (
    EdgeRecord,
    Hypergraph,
    LeadingEdgeHypergraph,
    OrientedOrderedGraph,
    PatternFormatError,
    induced,
    load,
    parse,
    serialize,
)
from .process import ProcessConfig, ProcessState, RunResult, StrategyContractError, run, square_histogram

__version__ = "0.1.0"

__all__ = [
    "EdgeRecord",
    "Hypergraph",
    "LeadingEdgeHypergraph",
    "OrientedOrderedGraph",
    "PatternFormatError",
    "induced",
    "load",
    "parse",
    "serialize",
    "ProcessConfig",
    "ProcessState",
    "RunResult",
    "StrategyContractError",
    "run",
    "square_histogram",
    "__version__",
]
