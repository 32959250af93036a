from __future__ import annotations

import logging
import math
from collections import Counter, defaultdict
from itertools import combinations

from ..patterns import complete
from ..process import ProcessConfig, ProcessState
from .base import Strategy

log = logging.getLogger(__name__)


class K6Builder(Strategy):
    """Two-apex construction of K_6^(3) with ``r = 2``.

    The apexes are host vertices ``n - 1`` and ``n``. During phase one a pair
    inside ``1..n-2`` is joined to ``n - 1`` on its first hit and to ``n`` on
    its second. A 4-set all of whose pairs were hit twice (a double K4)
    already spans 12 triples of a K6 with the apexes. Double K4s sharing a
    pair with an earlier one are dropped. Phase two completes each kept
    double K4 ``a1 < a2 < a3 < a4``: pair ``{a_j, a_j+1}`` (cyclically) gets
    ``a_j+2``, and ``{a_j, apex}`` gets the other apex.
    """

    def __init__(self, omega: float = 8.0, t1: int | None = None):
        self.pattern = complete(6, 3)
        self.omega = omega
        self._t1 = t1

    def start(self, config: ProcessConfig) -> None:
        super().start(config)
        self.check_dimensions(config, r=2)
        n = config.n
        if n < 8:
            raise ValueError("K6Builder needs n >= 8")
        if self.omega > math.log(n):
            log.warning("omega=%s exceeds log n=%.2f", self.omega, math.log(n))
        self.t1 = self._t1 if self._t1 is not None else int(config.t_max * self.omega ** -1.5)
        self.a, self.b = n - 1, n
        self.hits: Counter = Counter()
        self.double: dict[int, set[int]] = defaultdict(set)
        self.kept: list[tuple[int, int, int, int]] = []
        self._kept_pairs: set[tuple[int, int]] = set()
        self.cycle_task: dict[tuple[int, int], tuple[int, int]] = {}
        self.apex_done: set[int] = set()
        self.apex_users: dict[int, list[int]] = defaultdict(list)
        self.remaining: list[int] = []
        self.phase = 1
        self._done = False

    def _new_double(self, x: int, y: int) -> None:
        self.double[x].add(y)
        self.double[y].add(x)
        common = sorted(self.double[x] & self.double[y])
        for z, w in combinations(common, 2):
            if w in self.double[z]:
                quad = tuple(sorted((x, y, z, w)))
                pairs = set(combinations(quad, 2))
                if pairs & self._kept_pairs:
                    continue
                self._kept_pairs |= pairs
                self.kept.append(quad)

    def _end_phase_one(self) -> None:
        self.phase = 2
        for ci, quad in enumerate(self.kept):
            for j in range(4):
                pair = tuple(sorted((quad[j], quad[(j + 1) % 4])))
                self.cycle_task[pair] = (ci, quad[(j + 2) % 4])
                self.apex_users[quad[j]].append(ci)
            self.remaining.append(8)

    def _tick(self, ci: int) -> None:
        self.remaining[ci] -= 1
        if self.remaining[ci] == 0:
            self._done = True

    def propose(self, state: ProcessState, square: tuple[int, ...]) -> tuple[int, ...]:
        if self.phase == 1 and state.round >= self.t1:
            self._end_phase_one()
        x, y = square
        a, b = self.a, self.b
        if self.phase == 1:
            if y >= a:
                return self.wasted(square)
            self.hits[square] += 1
            h = self.hits[square]
            if h == 1:
                return (a,)
            if h == 2:
                self._new_double(x, y)
                return (b,)
            return self.wasted(square)
        if y < a:
            task = self.cycle_task.pop(square, None)
            if task is None:
                return self.wasted(square)
            self._tick(task[0])
            return (task[1],)
        if x < a and x not in self.apex_done and self.apex_users.get(x):
            self.apex_done.add(x)
            for ci in self.apex_users[x]:
                self._tick(ci)
            return (b if y == a else a,)
        return self.wasted(square)

    def succeeded(self, state: ProcessState) -> bool:
        return self._done
