"""The semi-random process: each round a uniform random r-set is drawn and the
strategy answers with s - r further vertices; their union becomes an edge.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, TextIO

import numpy as np

from .hypergraph import Hypergraph

if TYPE_CHECKING:
    from .strategies.base import Strategy

BATCH = 4096


class StrategyContractError(RuntimeError):
    """A strategy proposed a circle of the wrong size or with out-of-range vertices."""


@dataclass(frozen=True)
class ProcessConfig:
    n: int
    r: int
    s: int
    seed: int = 0
    t_max: int = 0

    def __post_init__(self):
        if not 1 <= self.r <= self.s <= self.n:
            raise ValueError(f"need 1 <= r <= s <= n, got r={self.r}, s={self.s}, n={self.n}")
        if self.t_max < 0:
            raise ValueError("t_max must be non-negative")


@dataclass
class ProcessState:
    hypergraph: Hypergraph
    round: int = 0
    square_counts: list[int] = field(default_factory=list)

    @classmethod
    def initial(cls, config: ProcessConfig) -> "ProcessState":
        return cls(Hypergraph(config.n, config.s, config.r), 0, [0] * (config.n + 1))

    @property
    def n(self) -> int:
        return self.hypergraph.n


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.PCG64(seed))


class RoundSampler:
    """Uniform r-subsets of ``1..n`` by a partial Fisher-Yates shuffle.

    The permutation array persists between rounds (a partial shuffle of any
    permutation is still uniform), and swap positions are drawn from the
    generator in batches.
    """

    def __init__(self, n: int, r: int, rng: np.random.Generator):
        if not 1 <= r <= n:
            raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
        self.n, self.r, self.rng = n, r, rng
        self._perm = list(range(1, n + 1))
        self._buf: list[list[int]] = []
        self._pos = BATCH

    def _refill(self):
        n = self.n
        self._buf = [(self.rng.integers(0, n - i, size=BATCH) + i).tolist() for i in range(self.r)]
        self._pos = 0

    def draw(self) -> tuple[int, ...]:
        if self._pos == BATCH:
            self._refill()
        p, perm = self._pos, self._perm
        for i in range(self.r):
            j = self._buf[i][p]
            perm[i], perm[j] = perm[j], perm[i]
        self._pos = p + 1
        return tuple(sorted(perm[: self.r]))


def draw_round(state: ProcessState, sampler: RoundSampler) -> tuple[int, ...]:
    return sampler.draw()


def step(state: ProcessState, strategy: "Strategy", sampler: RoundSampler) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Play one round in place; returns ``(U, V)``."""
    h = state.hypergraph
    square = sampler.draw()
    circle = tuple(strategy.propose(state, square))
    if len(circle) != h.s - h.r:
        raise StrategyContractError(
            f"{type(strategy).__name__} proposed {len(circle)} circle vertices, expected {h.s - h.r}"
        )
    for v in circle:
        if not 1 <= v <= h.n:
            raise StrategyContractError(f"{type(strategy).__name__} proposed vertex {v} outside 1..{h.n}")
    state.round += 1
    h.add_edge(square, circle, state.round)
    counts = state.square_counts
    for u in square:
        counts[u] += 1
    return square, circle


@dataclass
class RunResult:
    state: ProcessState
    success: bool
    rounds_used: int


def _fmt(vs: Iterable[int]) -> str:
    return "{" + ",".join(str(v) for v in vs) + "}"


def run(config: ProcessConfig, strategy: "Strategy", stop_on_success: bool = True,
        transcript: TextIO | None = None, rng: np.random.Generator | None = None) -> RunResult:
    """Play up to ``config.t_max`` rounds.

    ``rounds_used`` is the round at which success was first observed, or the
    number of rounds played when it never was. With ``stop_on_success=False``
    the full budget is played regardless.
    """
    state = ProcessState.initial(config)
    sampler = RoundSampler(config.n, config.r, rng if rng is not None else make_rng(config.seed))
    strategy.start(config)
    success = strategy.succeeded(state)
    first = 0 if success else None
    while state.round < config.t_max and not (success and stop_on_success):
        square, circle = step(state, strategy, sampler)
        if transcript is not None:
            transcript.write(f"{state.round} U:{_fmt(square)} V:{_fmt(circle)}\n")
        if not success and strategy.succeeded(state):
            success, first = True, state.round
    return RunResult(state, success, first if success else state.round)


def square_histogram(state: ProcessState) -> dict[int, int]:
    """``x -> number of vertices that have received exactly x squares``."""
    counts = np.bincount(np.asarray(state.square_counts[1:], dtype=np.int64), minlength=1)
    return {x: int(c) for x, c in enumerate(counts) if c}
