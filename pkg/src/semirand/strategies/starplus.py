from __future__ import annotations

import logging
import math
from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from ..hypergraph import Hypergraph
from ..process import ProcessConfig, ProcessState
from ..structure import exponent_starplus, find_starplus_center, starplus_excess_bound
from .base import Strategy

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PhasePlan:
    t: int
    t1: int
    t2: int
    omega: float
    omega1: float
    epsilon: float
    kappa: Fraction
    ell: int
    L: Fraction | None


def make_plan(r: int, s: int, k: int, ell: int, t: int, omega: float = 8.0, n: int | None = None) -> PhasePlan:
    """Split a budget of ``t`` rounds between clique building and surplus completion.

    Phase one gets everything when there is no surplus, half when the excess
    is strictly below its bound, and a ``1/omega``-ish sliver at the bound.
    """
    if omega <= 1:
        raise ValueError("omega must exceed 1")
    if n is not None and n > 1 and omega > math.log(n):
        log.warning("omega=%s exceeds log n=%.2f; the asymptotic regime assumes omega = o(log n)",
                    omega, math.log(n))
    q = k - s + r
    expo = Fraction(ell, 2 * math.comb(q, r))
    omega1 = omega ** float(expo)
    epsilon = omega ** (-1 - float(expo))
    bound = starplus_excess_bound(r, s, k) if k > s else None
    if ell == 0:
        t1 = t
    elif bound is not None and ell >= bound:
        t1 = int(epsilon * t)
    else:
        t1 = t // 2
    kappa = exponent_starplus(r, s, k, ell).exponent
    return PhasePlan(t, t1, t - t1, omega, omega1, epsilon, kappa, ell, bound)


def _designated(edge: tuple[int, ...], center: set[int], r: int) -> tuple[int, ...]:
    """Lexicographically smallest r-subset of ``edge`` avoiding ``center`` (any r-subset if impossible)."""
    outside = [v for v in edge if v not in center]
    if len(outside) >= r:
        return tuple(outside[:r])
    return tuple(edge[:r])


class StarplusBuilder(Strategy):
    """Two-phase construction of an (s, s-r)-starplus.

    Phase one reserves the top ``s - r`` host ids as the center and answers
    every square set disjoint from it with the center, so that each clique
    ``K_q^(r)`` (``q = k - s + r``) among the distinct hit r-sets carries a
    full star. At the end of phase one a family of r-set-disjoint cliques is
    kept greedily. Phase two waits, for each kept clique and each surplus
    edge, for the designated r-subset of that edge's image to be drawn and
    completes the edge.
    """

    def __init__(self, pattern: Hypergraph, r: int, omega: float = 8.0, t1: int | None = None):
        found = find_starplus_center(pattern, r)
        if found is None:
            raise ValueError("pattern is not a starplus for this r")
        center, surplus = found
        self.pattern, self.r, self.omega, self._t1 = pattern, r, omega, t1
        self.k, self.s = pattern.n, pattern.s
        self.q = self.k - self.s + r
        self.center = center
        self.surplus = surplus
        self.others = [v for v in range(1, self.k + 1) if v not in center]
        self.designated = [_designated(e, set(center), r) for e in surplus]

    @property
    def ell(self) -> int:
        return len(self.surplus)

    def start(self, config: ProcessConfig) -> None:
        super().start(config)
        self.check_dimensions(config, r=self.r)
        n, c = config.n, config.s - config.r
        if n < self.k + c:
            raise ValueError(f"n={n} too small for a starplus on {self.k} vertices")
        self.plan = make_plan(self.r, self.s, self.k, self.ell, config.t_max, self.omega, n)
        if self._t1 is not None:
            self.plan = PhasePlan(**{**self.plan.__dict__, "t1": self._t1, "t2": config.t_max - self._t1})
        self.host_center = tuple(range(n - c + 1, n + 1))
        self._center_set = set(self.host_center)
        self.hit: set[tuple[int, ...]] = set()
        self.link: dict[tuple[int, ...], set[int]] = defaultdict(set)
        self.cliques: list[tuple[int, ...]] = []
        self.kept: list[tuple[int, ...]] = []
        self.queues: dict[tuple[int, ...], deque] = {}
        self.missing: list[int] = []
        self.phase = 1
        self._done = False

    # phase one -------------------------------------------------------------

    def _record(self, rset: tuple[int, ...]) -> None:
        if rset in self.hit:
            return
        self.hit.add(rset)
        r = self.r
        for i in range(r):
            self.link[rset[:i] + rset[i + 1:]].add(rset[i])
        if self.q == r:
            self.cliques.append(rset)
            return
        common = set.intersection(*(self.link[rset[:i] + rset[i + 1:]] for i in range(r)))
        common.difference_update(rset)
        if len(common) < self.q - r:
            return
        for extra in combinations(sorted(common), self.q - r):
            clique = tuple(sorted(rset + extra))
            if all(sub in self.hit for sub in combinations(clique, r)):
                self.cliques.append(clique)

    def _end_phase_one(self) -> None:
        self.phase = 2
        used: set[tuple[int, ...]] = set()
        for clique in self.cliques:
            subs = set(combinations(clique, self.r))
            if subs & used:
                continue
            used |= subs
            self.kept.append(clique)
        for ci, clique in enumerate(self.kept):
            phi = dict(zip(self.others, clique))
            phi.update(zip(self.center, self.host_center))
            for e, m_pat in zip(self.surplus, self.designated):
                m = tuple(sorted(phi[x] for x in m_pat))
                rest = sorted(phi[x] for x in e)
                for v in m:
                    rest.remove(v)
                self.queues.setdefault(m, deque()).append((ci, tuple(rest)))
            self.missing.append(self.ell)

    # interface ------------------------------------------------------------

    def propose(self, state: ProcessState, square: tuple[int, ...]) -> tuple[int, ...]:
        if self.phase == 1 and state.round >= self.plan.t1:
            self._end_phase_one()
        if self.phase == 1:
            if self._center_set.isdisjoint(square):
                self._record(square)
                if self.ell == 0 and self.cliques:
                    self._done = True
                return self.host_center
            return self.wasted(square)
        queue = self.queues.get(square)
        if queue:
            ci, circle = queue.popleft()
            self.missing[ci] -= 1
            if self.missing[ci] == 0:
                self._done = True
            return circle
        return self.wasted(square)

    def succeeded(self, state: ProcessState) -> bool:
        return self._done
