"""Exact combinatorics of fixed patterns: degeneracy, cores, weight functions,
densities, and the closed-form threshold exponents.

Every exponent is a :class:`fractions.Fraction`; conversion to float happens
only at the CLI boundary.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Sequence, Union

import numpy as np

from .hypergraph import Hypergraph, LeadingEdgeHypergraph, OrientedOrderedGraph

AnyPattern = Union[Hypergraph, OrientedOrderedGraph, LeadingEdgeHypergraph]
WeightMap = dict  # vertex -> non-negative int

MAX_SUBSET_VERTICES = 24


@dataclass
class ThresholdReport:
    """An exponent ``kappa`` such that the property appears around ``t = n**kappa``.

    ``flags`` records what kind of statement the exponent is (``"lower"``,
    ``"upper"`` or ``"exact"``) plus any caveats.
    """

    exponent: Fraction
    source: str
    params: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "exponent": {"num": self.exponent.numerator, "den": self.exponent.denominator},
            "source": self.source,
            "params": dict(self.params),
            "flags": list(self.flags),
        }


# ---------------------------------------------------------------------------
# helpers

def _vertex_count_and_edges(g: AnyPattern) -> tuple[int, list[tuple[int, ...]]]:
    if isinstance(g, Hypergraph):
        return g.n, list(g.multisets)
    if isinstance(g, OrientedOrderedGraph):
        return g.k, [tuple(sorted((x, y))) for x, y in g.edges]
    if isinstance(g, LeadingEdgeHypergraph):
        return g.k, [verts for verts, _ in g.edges]
    raise TypeError(f"unsupported pattern type {type(g).__name__}")


def _degrees(vertices: Iterable[int], edges: Sequence[tuple[int, ...]]) -> dict[int, int]:
    deg = {v: 0 for v in vertices}
    for e in edges:
        for v in set(e):
            deg[v] += 1
    return deg


def min_degree(g: AnyPattern) -> int:
    k, edges = _vertex_count_and_edges(g)
    if k == 0:
        return 0
    return min(_degrees(range(1, k + 1), edges).values())


# ---------------------------------------------------------------------------
# degeneracy and cores

def degeneracy(g: AnyPattern) -> tuple[int, list[int]]:
    """Degeneracy ``d`` and an ordering ``v_1..v_k`` witnessing it.

    Each ``v_l`` has degree at most ``d`` in the sub-hypergraph induced by
    ``v_1..v_l``. Edge order and orientation are ignored. Ties between
    minimum-degree vertices go to the lowest id.
    """
    k, edges = _vertex_count_and_edges(g)
    alive = set(range(1, k + 1))
    incident: dict[int, list[int]] = {v: [] for v in alive}
    supports = [frozenset(e) for e in edges]
    for i, sup in enumerate(supports):
        for v in sup:
            incident[v].append(i)
    deg = {v: len(incident[v]) for v in alive}
    edge_alive = [True] * len(supports)
    removal = []
    d = 0
    while alive:
        v = min(alive, key=lambda u: (deg[u], u))
        d = max(d, deg[v])
        removal.append(v)
        alive.discard(v)
        for i in incident[v]:
            if edge_alive[i]:
                edge_alive[i] = False
                for u in supports[i]:
                    if u != v:
                        deg[u] -= 1
    return d, removal[::-1]


def d_core(g: AnyPattern, d: int) -> frozenset:
    """Vertex set of the d-core: the largest induced subgraph with minimum degree >= d."""
    if d < 0:
        raise ValueError("d must be non-negative")
    k, edges = _vertex_count_and_edges(g)
    alive = set(range(1, k + 1))
    supports = [frozenset(e) for e in edges]
    changed = True
    while changed:
        changed = False
        live_edges = [sup for sup in supports if sup <= alive]
        deg = _degrees(alive, live_edges)
        low = {v for v, x in deg.items() if x < d}
        if low:
            alive -= low
            changed = True
    return frozenset(alive)


# ---------------------------------------------------------------------------
# weight functions

def _groups(g: OrientedOrderedGraph | LeadingEdgeHypergraph) -> list[tuple[int, tuple[int, ...]]]:
    """(leading vertex, out-targets in the auxiliary digraph) per pattern edge."""
    if isinstance(g, OrientedOrderedGraph):
        return [(x, () if x == y else (y,)) for x, y in g.edges]
    return [(lead, tuple(sorted(set(verts) - {lead}))) for verts, lead in g.edges]


def _reachable(adj: dict[int, set], src: int) -> dict[int, int]:
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in adj.get(u, ()):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def _weights(k: int, groups: list[tuple[int, tuple[int, ...]]]) -> WeightMap:
    w = {v: 0 for v in range(1, k + 1)}
    adj: dict[int, set] = {}
    for x, targets in groups:
        adj.setdefault(x, set()).update(targets)
        w[x] += 1
        for v in _reachable(adj, x):
            if v != x and w[v] < w[x]:
                w[v] = w[x]
    return w


def weight_function(g: OrientedOrderedGraph) -> WeightMap:
    """Final weights of the edge-by-edge recursion on an ordered oriented graph.

    Adding ``x -> y`` bumps ``x`` by one, then lifts every vertex reachable
    from ``x`` to at least the new weight of ``x``.
    """
    return _weights(g.k, _groups(g))


def aux_digraph(g: LeadingEdgeHypergraph) -> OrientedOrderedGraph:
    """Directed edges ``lead -> u`` for every other vertex ``u`` of each hyperedge, in order."""
    return OrientedOrderedGraph(g.k, tuple((x, u) for x, targets in _groups(g) for u in targets))


def hyper_weight_function(g: LeadingEdgeHypergraph) -> WeightMap:
    """Weight recursion for leading-edge hypergraphs; reachability is taken in the aux digraph."""
    return _weights(g.k, _groups(g))


def ordered_diameter(g: OrientedOrderedGraph | LeadingEdgeHypergraph) -> int:
    """Largest directed diameter over all edge prefixes (0 for the empty graph)."""
    adj: dict[int, set] = {}
    best = 0
    for x, targets in _groups(g):
        adj.setdefault(x, set()).update(targets)
        for src in list(adj):
            best = max(best, max(_reachable(adj, src).values()))
    return best


# ---------------------------------------------------------------------------
# densities

def _edge_count_by_subset(k: int, edges: Sequence[tuple[int, ...]]) -> np.ndarray:
    """``out[mask]`` = number of edges whose support lies inside the vertex subset ``mask``."""
    if k > MAX_SUBSET_VERTICES:
        raise ValueError(f"subset enumeration limited to {MAX_SUBSET_VERTICES} vertices, got {k}")
    size = 1 << k
    counts = np.zeros(size, dtype=np.int64)
    for e in edges:
        mask = 0
        for v in e:
            mask |= 1 << (v - 1)
        counts[mask] += 1
    masks = np.arange(size)
    for bit in range(k):
        has = (masks >> bit) & 1 == 1
        counts[has] += counts[masks[has] ^ (1 << bit)]
    return counts


def _popcounts(k: int) -> np.ndarray:
    masks = np.arange(1 << k)
    pc = np.zeros(1 << k, dtype=np.int64)
    for bit in range(k):
        pc += (masks >> bit) & 1
    return pc


def max_density(g: Hypergraph, r: int) -> Fraction:
    """Maximum of ``e(W) / (|W| - s + r)`` over vertex subsets ``W`` with ``|W| >= s``.

    Restricting to induced subgraphs loses nothing: for a fixed vertex set the
    ratio only grows with more edges.
    """
    s, k = g.s, g.n
    if not 1 <= r <= s <= k:
        raise ValueError(f"need 1 <= r <= s <= k, got r={r}, s={s}, k={k}")
    counts = _edge_count_by_subset(k, g.multisets)
    sizes = _popcounts(k)
    ok = sizes >= s
    ratios = counts[ok] / (sizes[ok] - s + r)
    top = ratios.max()
    cand = np.flatnonzero(ratios >= top * (1 - 1e-12))
    return max(Fraction(int(counts[ok][i]), int(sizes[ok][i] - s + r)) for i in cand)


def max_codegree(g: AnyPattern, d: int) -> int:
    """Largest number of edges containing a common set of ``d`` vertices."""
    k, edges = _vertex_count_and_edges(g)
    if d < 1:
        raise ValueError("d must be positive")
    tally: Counter = Counter()
    for e in edges:
        for sub in combinations(sorted(set(e)), d):
            tally[sub] += 1
    return max(tally.values(), default=0)


def is_balanced(g: Hypergraph, r: int) -> bool:
    """Whether the whole pattern maximizes ``e/(v - s + r)`` among its subgraphs."""
    s, k = g.s, g.n
    if not 1 <= r <= s <= k:
        raise ValueError(f"need 1 <= r <= s <= k, got r={r}, s={s}, k={k}")
    counts = _edge_count_by_subset(k, g.multisets)
    sizes = _popcounts(k)
    ok = sizes >= s
    total, denom = len(g), k - s + r
    return bool(np.all(counts[ok] * denom <= total * (sizes[ok] - s + r)))


# ---------------------------------------------------------------------------
# closed-form exponents

def exponent_degeneracy(d: int) -> Fraction:
    if d < 1:
        raise ValueError("degeneracy must be at least 1")
    return Fraction(d - 1, d)


def exponent_lower(r: int, s: int, k: int, m: int) -> Fraction:
    """Edge-count lower bound ``r - (k - s + r)/m`` valid for every strategy."""
    if not (k >= s >= r >= 2 and m >= 1):
        raise ValueError(f"need k >= s >= r >= 2 and m >= 1, got r={r}, s={s}, k={k}, m={m}")
    return r - Fraction(k - s + r, m)


def starplus_excess_bound(r: int, s: int, k: int) -> Fraction:
    """Largest excess for which a starplus on ``k`` vertices has a known exact threshold."""
    if r < 2 or s <= r:
        raise ValueError(f"need r >= 2 and s > r, got r={r}, s={s}")
    if k <= s:
        raise ValueError(f"excess bound undefined for k <= s (k={k}, s={s})")
    q = k - s + r
    return Fraction(r * comb(q, r) - q, k - s)


def exponent_starplus(r: int, s: int, k: int, ell: int) -> ThresholdReport:
    q = k - s + r
    value = r - Fraction(q, comb(q, r) + ell)
    params = {"r": r, "s": s, "k": k, "ell": ell}
    if k == s:
        holds = ell == 0
        bound = None
    else:
        bound = starplus_excess_bound(r, s, k)
        holds = ell <= bound
    if bound is not None:
        params["L"] = str(bound)
    flags = ["exact", "excess-within-bound"] if holds else ["upper bound not guaranteed"]
    return ThresholdReport(value, "starplus", params, flags)


def generic_upper_bound(g: Hypergraph, r: int) -> ThresholdReport:
    """Upper bound from embedding ``g`` into the smallest admissible starplus."""
    s = g.s
    if not 2 <= r < s:
        raise ValueError(f"need 2 <= r < s, got r={r}, s={s}")
    ell = len(g) - max_codegree(g, s - r)
    if g.n <= s and ell == 0:
        k = s
    else:
        k = max(g.n, s + 1)
        while starplus_excess_bound(r, s, k) < ell:
            k += 1
    rep = exponent_starplus(r, s, k, ell)
    rep.source = "generic-starplus-upper"
    rep.flags = ["upper"]
    return rep


def partial_starplus_condition(r: int, k: int, ell1: int, ell2: int) -> bool:
    if ell2 < 2:
        raise ValueError("need ell2 >= 2")
    if k - 1 <= r:
        raise ValueError("need k - 1 > r")
    return Fraction(ell1 + ell2, ell2 - 1) <= Fraction(k - 1, k - 1 - r)


def loose_cycle_exponent(r: int, s: int, overlap: int, m: int = 3, kind: str | None = None) -> ThresholdReport:
    """Known threshold facts for the loose cycle C_m^(s, overlap)."""
    if overlap < 2 or m < 3:
        raise ValueError("need overlap >= 2 and m >= 3")
    if r > s - overlap:
        raise ValueError(f"need r <= s - overlap, got r={r}, s={s}, overlap={overlap}")
    params = {"r": r, "s": s, "overlap": overlap, "m": m}
    if r <= s - 2 * overlap:
        rep = ThresholdReport(Fraction(0), "loose-cycle", params, ["exact"])
    elif r == s - 2 * overlap + 2:
        rep = ThresholdReport(Fraction(2, 3), "loose-cycle", params, ["exact"])
    else:
        rep = ThresholdReport(Fraction(r - s + 2 * overlap, 3), "loose-cycle", params, ["lower"])
    if kind is not None and kind not in rep.flags:
        raise ValueError(f"only a {rep.flags[0]} value is known for these parameters")
    return rep


def k6_exponent() -> ThresholdReport:
    """Design exponent of the two-apex strategy for K_6^(3) with r = 2."""
    return ThresholdReport(Fraction(9, 5), "k6-strategy", {"r": 2, "s": 3, "k": 6}, ["upper"])


# ---------------------------------------------------------------------------
# pattern recognition

def find_starplus_center(g: Hypergraph, r: int) -> tuple[tuple[int, ...], list[tuple[int, ...]]] | None:
    """Locate a center ``C`` (``|C| = s - r``) whose full star lies in ``g``.

    Returns ``(center, surplus_edges)`` for the lexicographically first such
    center, or ``None``.
    """
    s, k = g.s, g.n
    c = s - r
    if c < 1 or k < s:
        return None
    present = g.edge_counter()
    for center in combinations(range(1, k + 1), c):
        rest = [v for v in range(1, k + 1) if v not in center]
        star = [tuple(sorted(center + sub)) for sub in combinations(rest, r)]
        if all(present[e] >= 1 for e in star):
            left = present.copy()
            left.subtract(star)
            surplus = sorted(left.elements())
            return center, surplus
    return None


def _is_k6_3(g: Hypergraph) -> bool:
    return g.s == 3 and g.n == 6 and sorted(g.multisets) == sorted(combinations(range(1, 7), 3))


def _loose_cycle_shape(g: Hypergraph) -> tuple[int, int] | None:
    from .oracle import contains_copy
    from .patterns import loose_cycle

    m, s = len(g), g.s
    for overlap in range(2, s // 2 + 1):
        if m >= 3 and (s - overlap) * m == g.n:
            cyc = loose_cycle(s, overlap, m)
            if contains_copy(g, cyc):
                return overlap, m
    return None


def analyze(g: Hypergraph, r: int) -> dict:
    """Every applicable structural quantity and exponent for pattern ``g`` at random-part size ``r``."""
    s, k, m = g.s, g.n, len(g)
    d, order = degeneracy(g)
    out: dict = {"k": k, "s": s, "m": m, "r": r, "degeneracy": d, "ordering": order}
    out["delta"] = {str(j): max_codegree(g, j) for j in range(1, s + 1)}
    reports: list[ThresholdReport] = []
    if r == 1:
        if d >= 1:
            reports.append(ThresholdReport(exponent_degeneracy(d), "degeneracy", {"d": d}, ["exact"]))
    elif 2 <= r <= s <= k and m >= 1:
        mval = max_density(g, r)
        out["mu"] = {"num": mval.numerator, "den": mval.denominator}
        out["balanced"] = is_balanced(g, r) if r < s else None
        reports.append(ThresholdReport(exponent_lower(r, s, k, m), "edge-count-lower",
                                       {"r": r, "s": s, "k": k, "m": m}, ["lower"]))
        reports.append(ThresholdReport(r - 1 / mval, "density-lower", {"r": r, "s": s}, ["lower"]))
        if r < s:
            reports.append(generic_upper_bound(g, r))
            found = find_starplus_center(g, r)
            if found is not None:
                center, surplus = found
                rep = exponent_starplus(r, s, k, len(surplus))
                rep.params["center"] = list(center)
                reports.append(rep)
            if r == 2 and _is_k6_3(g):
                reports.append(k6_exponent())
            shape = _loose_cycle_shape(g)
            if shape is not None and r <= s - shape[0]:
                reports.append(loose_cycle_exponent(r, s, shape[0], shape[1]))
    out["reports"] = [rep.to_dict() for rep in reports]
    return out
