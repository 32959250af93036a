"""Common strategy interface."""
from __future__ import annotations

from ..hypergraph import Hypergraph
from ..process import ProcessConfig, ProcessState


class StrategyMismatch(ValueError):
    """The strategy cannot target this pattern or these process dimensions."""


class Strategy:
    """A deterministic player.

    ``start`` is called once per trial before the first round, ``propose``
    once per round with the freshly drawn square set, and ``succeeded`` after
    every round. Strategies keep whatever incremental state they need; the
    process state they are handed must be treated as read-only.
    """

    pattern: Hypergraph
    plan = None

    def start(self, config: ProcessConfig) -> None:
        self.config = config
        self.sink = tuple(range(1, config.s - config.r + 1))

    def wasted(self, square: tuple[int, ...]) -> tuple[int, ...]:
        """Answer for an unusable round: the lowest ``s - r`` ids outside ``square``.

        Skipping ids in ``square`` keeps every edge free of repeated vertices.
        """
        if self.sink and self.sink[-1] < square[0]:
            return self.sink
        out = []
        v = 1
        while len(out) < len(self.sink):
            if v not in square:
                out.append(v)
            v += 1
        return tuple(out)

    def propose(self, state: ProcessState, square: tuple[int, ...]) -> tuple[int, ...]:
        raise NotImplementedError

    def succeeded(self, state: ProcessState) -> bool:
        raise NotImplementedError

    def check_dimensions(self, config: ProcessConfig, r: int | None = None) -> None:
        if config.s != self.pattern.s:
            raise StrategyMismatch(f"{type(self).__name__}: process s={config.s} but pattern s={self.pattern.s}")
        if r is not None and config.r != r:
            raise StrategyMismatch(f"{type(self).__name__} needs r={r}, got r={config.r}")
