"""Constructors for the standard target patterns (cliques, stars, starpluses, cycles)."""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .hypergraph import Hypergraph

# Lines of the Fano plane on points 1..7.
FANO_LINES = ((1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6))


def complete(k: int, s: int = 2) -> Hypergraph:
    """The clique K_k^(s)."""
    return Hypergraph.from_edges(k, s, combinations(range(1, k + 1), s))


def graph(k: int, edges: Iterable[Sequence[int]]) -> Hypergraph:
    return Hypergraph.from_edges(k, 2, edges)


def cycle(k: int) -> Hypergraph:
    return graph(k, [(i, i % k + 1) for i in range(1, k + 1)])


def path(k: int) -> Hypergraph:
    return graph(k, [(i, i + 1) for i in range(1, k)])


def full_star(k: int, s: int, c: int = 1) -> Hypergraph:
    """All s-sets of ``1..k`` containing the center ``{k-c+1, ..., k}``."""
    center = tuple(range(k - c + 1, k + 1))
    return Hypergraph.from_edges(
        k, s, (tuple(sorted(rest + center)) for rest in combinations(range(1, k - c + 1), s - c))
    )


def starplus(k: int, s: int, r: int, surplus: Iterable[Sequence[int]]) -> Hypergraph:
    """An (s, s-r)-starplus: the full (s-r)-star on ``1..k`` plus ``surplus`` edges.

    The center is ``{k-s+r+1, ..., k}``.
    """
    star = full_star(k, s, s - r)
    edges = list(star.multisets) + [tuple(sorted(e)) for e in surplus]
    return Hypergraph.from_edges(k, s, edges)


def fano_starplus() -> Hypergraph:
    """The 3-uniform full star on 8 vertices (center 8) topped with a Fano plane."""
    return starplus(8, 3, 2, FANO_LINES)


def tight_cycle(q: int, s: int, offset: int = 0) -> list[tuple[int, ...]]:
    """Edges of the tight cycle C_q^(s) on ``offset+1..offset+q``."""
    return [tuple(sorted(offset + (i + j) % q + 1 for j in range(s))) for i in range(q)]


def tight_cycle_starplus(r: int, s: int, q: int) -> Hypergraph:
    """Full (s-r)-star on q + s - r vertices whose surplus edges form C_q^(s) off the center."""
    return starplus(q + s - r, s, r, tight_cycle(q, s))


def loose_cycle(s: int, overlap: int, m: int) -> Hypergraph:
    """The loose cycle C_m^(s, overlap): m edges, consecutive ones sharing ``overlap`` vertices."""
    if not 1 <= overlap <= s // 2 or m < 3:
        raise ValueError(f"need 1 <= overlap <= s/2 and m >= 3, got s={s}, overlap={overlap}, m={m}")
    step = s - overlap
    k = step * m
    edges = [tuple(sorted((i * step + j) % k + 1 for j in range(s))) for i in range(m)]
    return Hypergraph.from_edges(k, s, edges)


def loose_path(s: int, overlap: int, m: int) -> Hypergraph:
    step = s - overlap
    k = step * m + overlap
    return Hypergraph.from_edges(k, s, [tuple(range(i * step + 1, i * step + s + 1)) for i in range(m)])


def disjoint_union(a: Hypergraph, b: Hypergraph) -> Hypergraph:
    if a.s != b.s:
        raise ValueError("uniformities differ")
    shifted = [tuple(v + a.n for v in e) for e in b.multisets]
    return Hypergraph.from_edges(a.n + b.n, a.s, list(a.multisets) + shifted)
