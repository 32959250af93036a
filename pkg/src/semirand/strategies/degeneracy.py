from __future__ import annotations

from dataclasses import dataclass, field

from ..hypergraph import Hypergraph
from ..process import ProcessConfig, ProcessState
from ..structure import degeneracy
from .base import Strategy


@dataclass
class EmbeddingState:
    """Partial copy of the pattern built so far."""

    ordering: list[int]
    images: dict[int, int] = field(default_factory=dict)
    phase: int = 0
    phase_start: int = 0
    pending: dict[int, int] = field(default_factory=dict)
    failed: bool = False

    @property
    def used(self) -> set[int]:
        return set(self.images.values())


class DegeneracyBuilder(Strategy):
    """Embed the pattern one vertex at a time along a degeneracy ordering (``r = 1``).

    The budget ``t`` is split into ``k`` phases of ``t // k`` rounds, each
    counted from the moment the previous phase completed. In the phase for
    pattern vertex ``v`` with back-edges ``f_1..f_h`` (edges whose other
    vertices are already embedded), a host vertex receiving its ``i``-th
    in-phase square is joined to the image of ``f_i - v``. The first host
    vertex to collect ``h`` squares becomes the image of ``v``.

    Squares on already embedded vertices, or arriving after a phase ran out
    of budget, are answered with the sink.
    """

    def __init__(self, pattern: Hypergraph):
        self.pattern = pattern
        self.d, self.ordering = degeneracy(pattern)
        pos = {v: i for i, v in enumerate(self.ordering)}
        self.back_edges: list[list[tuple[int, ...]]] = []
        for v in self.ordering:
            edges = []
            for e in pattern.multisets:
                if v in e and all(pos[u] <= pos[v] for u in e):
                    rest = list(e)
                    rest.remove(v)
                    edges.append(tuple(rest))
            self.back_edges.append(edges)

    def start(self, config: ProcessConfig) -> None:
        super().start(config)
        self.check_dimensions(config, r=1)
        if config.n < self.pattern.n:
            raise ValueError("host smaller than pattern")
        self.phase_budget = config.t_max // max(self.pattern.n, 1)
        self.emb = EmbeddingState(list(self.ordering))
        self._fresh = config.n
        self._advance(0)

    def _take_fresh(self) -> int:
        used = self.emb.used
        while self._fresh in used or self._fresh in self.emb.pending:
            self._fresh -= 1
        return self._fresh

    def _advance(self, now: int) -> None:
        """Close finished phases; phases with no back-edges are embedded at once."""
        emb = self.emb
        emb.phase_start = now
        emb.pending = {}
        while emb.phase < len(self.ordering) and not self.back_edges[emb.phase]:
            emb.images[self.ordering[emb.phase]] = self._take_fresh()
            emb.phase += 1

    def propose(self, state: ProcessState, square: tuple[int, ...]) -> tuple[int, ...]:
        emb = self.emb
        (u,) = square
        now = state.round
        if emb.phase >= len(self.ordering) or emb.failed:
            return self.wasted(square)
        if now - emb.phase_start >= self.phase_budget:
            emb.failed = True
            return self.wasted(square)
        if u in emb.used:
            return self.wasted(square)
        i = emb.pending.get(u, 0)
        targets = self.back_edges[emb.phase]
        circle = tuple(emb.images[x] for x in targets[i])
        emb.pending[u] = i + 1
        if i + 1 == len(targets):
            emb.images[self.ordering[emb.phase]] = u
            emb.phase += 1
            self._advance(now + 1)
        return circle

    def succeeded(self, state: ProcessState) -> bool:
        return self.emb.phase >= len(self.ordering)
