from __future__ import annotations

from ..hypergraph import Hypergraph
from ..oracle import HostIndex, contains_copy
from ..process import ProcessConfig, ProcessState
from .base import Strategy


class PassiveStrategy(Strategy):
    """Always answer with the lowest ``s - r`` vertex ids outside the square set.

    Success is detected by a containment search anchored at each new edge,
    so the check per round only explores copies through that edge.
    """

    def __init__(self, pattern: Hypergraph):
        self.pattern = pattern

    def start(self, config: ProcessConfig) -> None:
        super().start(config)
        self.check_dimensions(config)
        self._index = HostIndex()
        self._index.n = config.n
        self._seen = 0
        self._found = False

    def propose(self, state: ProcessState, square: tuple[int, ...]) -> tuple[int, ...]:
        return self.wasted(square)

    def succeeded(self, state: ProcessState) -> bool:
        if self._found:
            return True
        h = state.hypergraph
        if len(self.pattern) == 0:
            self._found = h.n >= self.pattern.n
            return self._found
        while self._seen < len(h):
            ms = h.multisets[self._seen]
            self._seen += 1
            self._index.add(ms)
            if contains_copy(h, self.pattern, anchor=ms, index=self._index):
                self._found = True
                break
        return self._found
