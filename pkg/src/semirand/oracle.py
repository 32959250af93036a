"""Brute-force ground truth on host hypergraphs.

* :func:`contains_copy` decides whether a host contains a copy of a pattern.
* :func:`ordered_hom_sets` computes, for an ordered oriented pattern, the set
  of host vertices that can play each pattern vertex in a homomorphism whose
  edge images appear in the pattern's edge order.
* :func:`count_k_sets_with_j_edges` counts k-vertex sets spanning at least j
  host edges without enumerating all of ``C(n, k)``.

The remaining functions are the closed-form expectation bounds these
quantities are checked against.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb, factorial
from typing import Iterator, Sequence

from .hypergraph import Hypergraph, LeadingEdgeHypergraph, OrientedOrderedGraph
from .structure import hyper_weight_function, ordered_diameter, weight_function


class InfeasibleQuery(RuntimeError):
    """The requested enumeration exceeds the configured size cap."""


# ---------------------------------------------------------------------------
# containment

class HostIndex:
    """Multiset-edge index of a host, updatable one edge at a time."""

    def __init__(self, host: Hypergraph | None = None):
        self.count: Counter = Counter()
        self.by_vertex: dict[int, list[tuple[int, ...]]] = defaultdict(list)
        self.n = host.n if host is not None else 0
        if host is not None:
            for ms in host.multisets:
                self.add(ms)

    def add(self, multiset: Sequence[int]) -> None:
        key = tuple(sorted(multiset))
        if self.count[key] == 0:
            for v in set(key):
                self.by_vertex[v].append(key)
        self.count[key] += 1


def _match(p: tuple[int, ...], h: tuple[int, ...], phi: dict, used: set) -> Iterator[dict]:
    """Extensions of ``phi`` sending the pattern multiset ``p`` onto host multiset ``h``."""
    if len(p) == 1:
        x, y = p[0], h[0]
        if x in phi:
            if phi[x] == y:
                yield {}
        elif y not in used:
            yield {x: y}
        return
    pc, hc = Counter(p), Counter(h)
    free = []
    for x, cnt in pc.items():
        if x in phi:
            y = phi[x]
            if hc.get(y, 0) != cnt:
                return
            del hc[y]
        else:
            free.append(x)
    if len(free) != len(hc):
        return
    targets = list(hc)
    if any(y in used for y in targets):
        return
    for perm in permutations(targets):
        if all(pc[x] == hc[y] for x, y in zip(free, perm)):
            yield dict(zip(free, perm))


def contains_copy(host: Hypergraph, pattern: Hypergraph, anchor: Sequence[int] | None = None,
                  index: HostIndex | None = None) -> bool:
    """Whether ``host`` has a sub-hypergraph isomorphic to ``pattern``.

    Parallel host edges count once per copy of a simple pattern edge; a host
    edge with a repeated vertex can only be the image of a pattern edge with
    the same repetition pattern. With ``anchor`` (a host edge multiset) only
    copies using that edge are searched, which is how a monotone success test
    is run incrementally after each new edge.
    """
    if host.s != pattern.s:
        raise ValueError(f"uniformity mismatch: host s={host.s}, pattern s={pattern.s}")
    if pattern.n > host.n:
        return False
    if index is None:
        index = HostIndex(host)
    needed = Counter(pattern.multisets)
    p_edges = list(needed)
    isolated = pattern.n - len({v for e in p_edges for v in e})
    if not p_edges:
        return anchor is None
    if len(index.count) < len(p_edges):
        return False
    pdeg = Counter(v for e in p_edges for v in set(e))

    def fits(ext):
        # an image needs at least as many distinct host edges as its preimage has pattern edges
        return all(len(index.by_vertex.get(y, ())) >= pdeg[x] for x, y in ext.items())

    def candidates(p, phi):
        mapped = [phi[x] for x in set(p) if x in phi]
        if not mapped:
            return None
        return min((index.by_vertex.get(u, ()) for u in mapped), key=len)

    def extend(left, phi, used):
        if not left:
            return host.n - len(used) >= isolated
        # fully mapped edges are pure lookups; otherwise take the edge with the fewest candidates
        best, best_cands = None, None
        for i in left:
            p = p_edges[i]
            if all(x in phi for x in p):
                if index.count.get(tuple(sorted(phi[x] for x in p)), 0) < needed[p]:
                    return False
                continue
            cands = candidates(p, phi)
            if cands is not None and (best_cands is None or len(cands) < len(best_cands)):
                best, best_cands = i, cands
        rest = [i for i in left if not all(x in phi for x in p_edges[i])]
        if not rest:
            return host.n - len(used) >= isolated
        if best is None:
            best, best_cands = rest[0], list(index.count)
        p = p_edges[best]
        mult = needed[p]
        remaining = [i for i in rest if i != best]
        for h in best_cands:
            if len(h) != len(p) or index.count[h] < mult:
                continue
            for ext in _match(p, h, phi, used):
                if not fits(ext):
                    continue
                phi.update(ext)
                used.update(ext.values())
                if extend(remaining, phi, used):
                    return True
                for x, y in ext.items():
                    del phi[x]
                    used.discard(y)
        return False

    everything = list(range(len(p_edges)))
    if anchor is None:
        return extend(everything, {}, set())
    h = tuple(sorted(anchor))
    if index.count.get(h, 0) == 0:
        return False
    for i, p in enumerate(p_edges):
        if len(p) != len(h) or index.count[h] < needed[p]:
            continue
        others = [j for j in everything if j != i]
        for ext in _match(p, h, {}, set()):
            if fits(ext) and extend(others, dict(ext), set(ext.values())):
                return True
    return False


# ---------------------------------------------------------------------------
# ordered homomorphisms

@dataclass(frozen=True)
class HomQuery:
    pattern: OrientedOrderedGraph | LeadingEdgeHypergraph
    anchor: int
    host: Hypergraph

    def __post_init__(self):
        if not 1 <= self.anchor <= self.pattern.k:
            raise ValueError(f"anchor {self.anchor} not a pattern vertex")


def _lead_groups(pattern) -> list[tuple[int, tuple[int, ...]]]:
    if isinstance(pattern, OrientedOrderedGraph):
        return [(x, (y,)) for x, y in pattern.edges]
    groups = []
    for verts, lead in pattern.edges:
        rest = list(verts)
        rest.remove(lead)
        groups.append((lead, tuple(rest)))
    return groups


def ordered_hom_sets(pattern: OrientedOrderedGraph | LeadingEdgeHypergraph,
                     host: Hypergraph) -> dict[int, set[int]]:
    """Images of every pattern vertex over all order- and orientation-respecting homomorphisms.

    Each pattern edge ``x -> rest`` must map to a host edge whose square is
    the image of ``x`` and whose circle part is the image of ``rest``; edge
    images must have strictly increasing times in pattern order; the map is
    injective.

    Pattern edges are matched most-constrained first rather than in pattern
    order; the time order is enforced through a window ``(lo, hi)`` of
    admissible record positions derived from the edges already matched.
    """
    if host.r != 1:
        raise ValueError("ordered homomorphisms need a host with one square per edge")
    groups = _lead_groups(pattern)
    k, m = pattern.k, len(groups)
    records = host.edges
    total = len(records)
    by_square: dict[int, list[int]] = defaultdict(list)
    by_circle: dict[int, list[int]] = defaultdict(list)
    for i, rec in enumerate(records):
        by_square[rec.square[0]].append(i)
        for v in set(rec.circle):
            by_circle[v].append(i)
    circles = [tuple(sorted(rec.circle)) for rec in records]

    active = {x for x, rest in groups} | {v for _, rest in groups for v in rest}
    images: dict[int, set[int]] = {v: set() for v in active}
    common: set[int] | None = None
    found = False
    placed: list[int | None] = [None] * m

    def window(i):
        lo, hi = -1, total
        for j in range(m):
            pj = placed[j]
            if pj is not None:
                if j < i:
                    lo = max(lo, pj)
                elif j > i:
                    hi = min(hi, pj)
        return lo, hi

    def candidates(i, phi):
        x, rest = groups[i]
        lo, hi = window(i)
        if hi - lo <= 1:
            return []
        pools = [by_circle.get(phi[y], []) for y in rest if y in phi]
        if x in phi:
            pools.append(by_square.get(phi[x], []))
        if not pools:
            return range(lo + 1, hi)
        pool = min(pools, key=len)
        return pool[bisect_right(pool, lo):bisect_left(pool, hi)]

    def rec_search(depth, phi, used):
        nonlocal common, found
        if depth == m:
            found = True
            img = set(phi.values())
            common = img if common is None else common & img
            for v, u in phi.items():
                images[v].add(u)
            return
        i, cands = None, None
        for j in range(m):
            if placed[j] is None:
                cj = candidates(j, phi)
                if cands is None or len(cj) < len(cands):
                    i, cands = j, cj
                    if not cj:
                        return
        x, rest = groups[i]
        for idx in cands:
            u = records[idx].square[0]
            added_x = False
            if x in phi:
                if phi[x] != u:
                    continue
            else:
                if u in used:
                    continue
                phi[x] = u
                used.add(u)
                added_x = True
            placed[i] = idx
            for ext in _match(rest, circles[idx], phi, used):
                phi.update(ext)
                used.update(ext.values())
                rec_search(depth + 1, phi, used)
                for y, z in ext.items():
                    del phi[y]
                    used.discard(z)
            placed[i] = None
            if added_x:
                del phi[x]
                used.discard(u)

    rec_search(0, {}, set())
    out = {v: images.get(v, set()) for v in range(1, k + 1)}
    idle = [v for v in range(1, k + 1) if v not in active]
    if idle and host.n >= k and (found or m == 0):
        everything = set(host.vertices()) - (common or set())
        for v in idle:
            out[v] = everything
    return out


def ordered_hom_set(query: HomQuery) -> set[int]:
    return ordered_hom_sets(query.pattern, query.host)[query.anchor]


# ---------------------------------------------------------------------------
# k-sets spanning many edges

def count_k_sets_with_j_edges(host: Hypergraph, k: int, j: int, cap: int = 2_000_000) -> int:
    """Number of k-subsets of the host's vertex set spanning at least ``j`` edges.

    Parallel edges count separately. See :func:`k_set_edge_profile`.
    """
    return k_set_edge_profile(host, k, cap)(j)


def k_set_edge_profile(host: Hypergraph, k: int, cap: int = 2_000_000):
    """Return ``f`` with ``f(j)`` = number of k-sets spanning at least ``j`` edges.

    Every k-set ``W`` determines the union ``T`` of supports of the edges
    inside it; ``T`` is itself a union of supports with ``|T| <= k`` and
    ``e(W) = e(T)``. The unions are enumerated explicitly and the number of
    k-sets with a given ``T`` is obtained by Moebius inversion of
    ``#{W : W contains T} = C(n - |T|, k - |T|)`` over the union lattice.
    """
    n = host.n
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    mult: Counter = Counter(tuple(sorted(set(ms))) for ms in host.multisets)
    supports = [d for d in mult if len(d) <= k]
    incident: dict[int, list[tuple]] = defaultdict(list)
    by_size: dict[int, list[tuple]] = defaultdict(list)
    for d in supports:
        by_size[len(d)].append(d)
        for v in d:
            incident[v].append(d)

    family: set[tuple] = set(supports)
    frontier = list(supports)
    while frontier:
        nxt = []
        for S in frontier:
            room = k - len(S)
            if room == 0:
                continue
            inside = set(S)
            groups = [incident[v] for v in S]
            groups.extend(by_size.get(size, ()) for size in range(1, room + 1))
            for group in groups:
                for d in group:
                    extra = tuple(v for v in d if v not in inside)
                    if not extra or len(extra) > room:
                        continue
                    U = tuple(sorted(S + extra))
                    if U not in family:
                        family.add(U)
                        nxt.append(U)
            if len(family) > cap:
                raise InfeasibleQuery(f"more than {cap} candidate vertex sets")
        frontier = nxt

    # edges inside each closed set, and its closed proper subsets
    edges_in: dict[tuple, int] = {}
    below: dict[tuple, list[tuple]] = {}
    for T in family:
        total = mult[T]
        subs = []
        for size in range(1, len(T)):
            for sub in combinations(T, size):
                if sub in family:
                    subs.append(sub)
                    total += mult[sub]
        edges_in[T] = total
        below[T] = subs

    above: Counter = Counter()
    tally: Counter = Counter()
    for T in sorted(family, key=len, reverse=True):
        cnt = comb(n - len(T), k - len(T)) - above[T]
        if cnt:
            tally[edges_in[T]] += cnt
            for sub in below[T]:
                above[sub] += cnt
    levels = sorted(tally)

    def at_least(j: int) -> int:
        if j <= 0:
            return comb(n, k)
        return sum(tally[e] for e in levels if e >= j)

    return at_least


# ---------------------------------------------------------------------------
# closed-form bounds

def square_count_expectation(n: int, t: int, x: int) -> float:
    """Leading-order mean number of vertices holding exactly ``x`` squares after ``t`` rounds."""
    if x < 0:
        raise ValueError("x must be non-negative")
    return t ** x / (factorial(x) * float(n) ** (x - 1))


def hom_set_bound(pattern: OrientedOrderedGraph | LeadingEdgeHypergraph, v: int, t: int, n: int) -> float:
    """Strategy-independent ceiling on the mean size of the ordered homomorphism image set of ``v``.

    For leading-edge hypergraphs the ceiling carries an extra factor ``k``.
    """
    if not t < n / 2:
        raise ValueError(f"bound needs t < n/2, got t={t}, n={n}")
    if isinstance(pattern, OrientedOrderedGraph):
        w, factor = weight_function(pattern)[v], 1
    else:
        w, factor = hyper_weight_function(pattern)[v], pattern.k
    diam = ordered_diameter(pattern)
    return t ** w / float(n) ** (w - 1) * factor * (2 * factorial(w) ** diam - 1)


def k_set_count_bound(r: int, s: int, k: int, m: int, n: int, t: int, j: int) -> float:
    """Ceiling on the mean number of k-sets spanning at least ``j`` edges after ``t`` rounds."""
    if not 1 <= j <= m:
        raise ValueError(f"need 1 <= j <= m, got j={j}, m={m}")
    return float(t) ** j * float(k) ** (r * (j - 1)) * float(n) ** (k - s + r - r * j)
