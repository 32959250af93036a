from __future__ import annotations

from ..patterns import loose_cycle
from ..process import ProcessConfig, ProcessState
from .base import Strategy


class _OutOfVertices(Exception):
    pass


class LooseCycleBuilder(Strategy):
    """Builds the loose cycle C_m^(s, overlap) with square sets of size ``r``.

    Two regimes are supported.

    ``r <= s - 2*overlap``: grow a loose path edge by edge, then close it.
    Each round needs a square set disjoint from everything built so far; any
    other draw is wasted. With fresh draws the cycle is done in ``m`` rounds.

    ``r == s - 2*overlap + 2``: build the path on ``m - 3`` edges and fix the
    sets ``L1``, ``L2`` of degree-one vertices at its ends (a single set
    ``L0`` when ``m == 3``). Until half the budget has elapsed, grow families
    ``E1``, ``E2`` of edges through ``L1``, ``L2`` on fresh vertices. Then
    wait for a square set meeting the phase-two vertices in exactly two
    places that can be joined by ``2*overlap - 2`` chosen vertices.
    """

    def __init__(self, s: int, overlap: int, m: int, r: int):
        if overlap < 2 or m < 3 or 2 * overlap > s:
            raise ValueError(f"need 2 <= overlap <= s/2 and m >= 3, got s={s}, overlap={overlap}, m={m}")
        if r > s - overlap:
            raise ValueError(f"need r <= s - overlap, got r={r}")
        if r <= s - 2 * overlap:
            self.mode = "direct"
        elif r == s - 2 * overlap + 2:
            self.mode = "three-phase"
        else:
            raise ValueError(f"no strategy for r={r}, s={s}, overlap={overlap}")
        self.s, self.ell, self.m, self.r = s, overlap, m, r
        self.pattern = loose_cycle(s, overlap, m)

    def start(self, config: ProcessConfig) -> None:
        super().start(config)
        self.check_dimensions(config, r=self.r)
        if config.n < self.pattern.n + self.s:
            raise ValueError("host too small")
        self.used: set[int] = set()
        self._fresh = config.n
        self.path: list[list[int]] = []
        self.start_side: list[int] = []
        self.end_side: list[int] = []
        self.path_target = self.m - 1 if self.mode == "direct" else self.m - 3
        self.sides: list[list[int]] = []
        self.families: list[list[list[int]]] = []
        self.owner: dict[int, tuple[int, int]] = {}
        self.core: set[int] = set()
        self.switch = config.t_max // 2
        self._done = False
        self._stuck = False
        if self.mode == "three-phase" and self.path_target == 0:
            self._fix_sides()

    def _take(self, count: int, avoid: tuple[int, ...]) -> list[int]:
        """``count`` unused vertices, scanning down from the top id."""
        out = []
        v = self._fresh
        while len(out) < count:
            if v < 1:
                raise _OutOfVertices
            if v not in self.used and v not in avoid:
                out.append(v)
            v -= 1
        self._fresh = v
        self.used.update(out)
        return out

    def _extend_path(self, square: tuple[int, ...]) -> list[int]:
        ell = self.ell
        self.used.update(square)
        if not self.path:
            edge = list(square) + self._take(self.s - self.r, square)
            self.start_side = edge[:ell]
            self.end_side = edge[ell:2 * ell]
        else:
            new = list(square) + self._take(self.s - ell - self.r, square)
            edge = self.end_side + new
            self.end_side = new[:ell]
        self.path.append(edge)
        return edge

    def _fix_sides(self) -> None:
        ell = self.ell
        if self.m == 3:
            self.sides = [self._take(ell, ())]
        elif self.m == 4:
            self.sides = [self.path[0][:ell], self.path[0][ell:2 * ell]]
        else:
            self.sides = [self.start_side, self.end_side]
        self.families = [[] for _ in self.sides]
        self.core = set(self.used)

    @staticmethod
    def _circle(edge: list[int], square: tuple[int, ...]) -> tuple[int, ...]:
        rest = list(edge)
        for u in square:
            rest.remove(u)
        return tuple(rest)

    def propose(self, state: ProcessState, square: tuple[int, ...]) -> tuple[int, ...]:
        if self._done or self._stuck:
            return self.wasted(square)
        try:
            return self._respond(state, square)
        except _OutOfVertices:
            self._stuck = True
            return self.wasted(square)

    def _respond(self, state: ProcessState, square: tuple[int, ...]) -> tuple[int, ...]:
        if len(self.path) < self.path_target:
            if not self.used.isdisjoint(square):
                return self.wasted(square)
            edge = self._extend_path(square)
            if self.mode == "three-phase" and len(self.path) == self.path_target:
                self._fix_sides()
            return self._circle(edge, square)
        if self.mode == "direct":
            if not self.used.isdisjoint(square):
                return self.wasted(square)
            self.used.update(square)
            edge = self.start_side + self.end_side + list(square)
            edge += self._take(self.s - 2 * self.ell - self.r, square)
            self._done = True
            return self._circle(edge, square)
        if state.round < self.switch:
            return self._grow(square)
        return self._close(square)

    def _grow(self, square: tuple[int, ...]) -> tuple[int, ...]:
        if not self.used.isdisjoint(square):
            return self.wasted(square)
        j = min(range(len(self.sides)), key=lambda i: (len(self.families[i]), i))
        self.used.update(square)
        new = list(square) + self._take(self.ell - 2, square)
        edge = self.sides[j] + new
        idx = len(self.families[j])
        self.families[j].append(edge)
        for v in new:
            self.owner[v] = (j, idx)
        return self._circle(edge, square)

    def _pick(self, j: int, idx: int, count: int, square: tuple[int, ...]) -> list[int]:
        side = set(self.sides[j])
        pool = [v for v in self.families[j][idx] if v not in side and v not in square]
        return pool[:count]

    def _close(self, square: tuple[int, ...]) -> tuple[int, ...]:
        if not self.core.isdisjoint(square):
            return self.wasted(square)
        hits = [self.owner[u] for u in square if u in self.owner]
        if len(hits) != 2:
            return self.wasted(square)
        ell = self.ell
        (j1, i1), (j2, i2) = hits
        if (j1, i1) != (j2, i2) and (j1 != j2 or len(self.sides) == 1):
            circle = self._pick(j1, i1, ell - 1, square) + self._pick(j2, i2, ell - 1, square)
        elif (j1, i1) == (j2, i2):
            other = 0 if len(self.sides) == 1 else 1 - j1
            options = [i for i in range(len(self.families[other])) if (other, i) != (j1, i1)]
            if not options:
                return self.wasted(square)
            circle = self._pick(j1, i1, ell - 2, square) + self._pick(other, options[0], ell, square)
        else:
            return self.wasted(square)
        self._done = True
        return tuple(circle)

    def succeeded(self, state: ProcessState) -> bool:
        return self._done
