"""Empirical checks of the universal bounds, runnable from the ``verify`` command.

Each suite returns a JSON-ready dict with a boolean ``passed`` plus the
numbers it was decided on.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb, floor

import numpy as np

from .hypergraph import Hypergraph, LeadingEdgeHypergraph, OrientedOrderedGraph
from .oracle import hom_set_bound, k_set_count_bound, k_set_edge_profile, ordered_hom_sets, square_count_expectation
from .patterns import complete, full_star, starplus
from .process import ProcessConfig, ProcessState, RoundSampler, make_rng, run, square_histogram
from .stats import mean_and_sem
from .structure import (
    exponent_starplus,
    hyper_weight_function,
    is_balanced,
    max_density,
    min_degree,
    starplus_excess_bound,
    weight_function,
)


def square_counts(n: int = 2000, t: int = 500, x: int = 2, trials: int = 2000, seed: int = 0,
                  rel_tol: float = 0.10) -> dict:
    """Mean number of vertices with exactly ``x`` squares against its leading-order value."""
    values = []
    for i in range(trials):
        sampler = RoundSampler(n, 1, make_rng(np.random.SeedSequence(seed, spawn_key=(i,))))
        counts = [0] * (n + 1)
        for _ in range(t):
            (u,) = sampler.draw()
            counts[u] += 1
        state = ProcessState(Hypergraph(n, 2, 1), t, counts)
        values.append(square_histogram(state).get(x, 0))
    mean, sem = mean_and_sem(values)
    target = square_count_expectation(n, t, x)
    exact = n * comb(t, x) * (1 / n) ** x * (1 - 1 / n) ** (t - x)
    return {
        "passed": abs(mean - target) <= rel_tol * target,
        "mean": mean,
        "sem": sem,
        "leading_order": target,
        "exact_binomial_mean": exact,
        "rel_tol": rel_tol,
    }


# ---------------------------------------------------------------------------
# random patterns

def random_oriented_graph(rng: random.Random, max_k: int = 7, max_m: int = 10) -> OrientedOrderedGraph:
    """Random simple graph, random orientation of each edge, random edge order."""
    k = rng.randint(2, max_k)
    pairs = list(combinations(range(1, k + 1), 2))
    m = rng.randint(1, min(max_m, len(pairs)))
    chosen = rng.sample(pairs, m)
    edges = tuple((x, y) if rng.random() < 0.5 else (y, x) for x, y in chosen)
    return OrientedOrderedGraph(k, edges)


def random_leading_hypergraph(rng: random.Random, max_k: int = 7, max_m: int = 10) -> LeadingEdgeHypergraph:
    s = rng.randint(2, 4)
    k = rng.randint(s, max_k)
    sets = list(combinations(range(1, k + 1), s))
    m = rng.randint(1, min(max_m, len(sets)))
    chosen = rng.sample(sets, m)
    return LeadingEdgeHypergraph(k, s, tuple((e, rng.choice(e)) for e in chosen))


def weight_floor(count: int = 200, seed: int = 0) -> dict:
    """Minimum weight is at least the minimum degree, on random graphs and hypergraphs."""
    rng = random.Random(seed)
    bad = []
    for i in range(count):
        g = random_oriented_graph(rng)
        if min(weight_function(g).values()) < min_degree(g):
            bad.append({"kind": "graph", "k": g.k, "edges": [list(e) for e in g.edges]})
    for i in range(count):
        h = random_leading_hypergraph(rng)
        if min(hyper_weight_function(h).values()) < min_degree(h):
            bad.append({"kind": "hypergraph", "k": h.k, "s": h.s,
                        "edges": [{"verts": list(v), "lead": x} for v, x in h.edges]})
    return {"passed": not bad, "checked": 2 * count, "exceptions": bad}


# ---------------------------------------------------------------------------
# strategy-independent ceilings

def triangle_orders() -> list[OrientedOrderedGraph]:
    """All edge orders and orientations of the triangle (48 patterns)."""
    out = []
    for order in permutations([(1, 2), (1, 3), (2, 3)]):
        for flips in product((False, True), repeat=3):
            out.append(OrientedOrderedGraph(3, tuple((y, x) if f else (x, y) for (x, y), f in zip(order, flips))))
    return out


def empirical_ceilings(strategy_name: str = "degeneracy", n: int = 2000, t: int = 200, trials: int = 500,
                       seed: int = 0, patterns: list[OrientedOrderedGraph] | None = None,
                       sigmas: float = 3.0) -> dict:
    """Monte Carlo means of ordered-homomorphism image sizes and k-set counts against their ceilings.

    The host is the graph process (``r = 1``, ``s = 2``) played for the full
    ``t`` rounds against the triangle.
    """
    from .experiment import build_strategy

    target = complete(3)
    patterns = patterns if patterns is not None else triangle_orders()
    k, m = target.n, len(target)
    hom_sizes = [[[] for _ in range(k)] for _ in patterns]
    xj = [[] for _ in range(m)]
    for i in range(trials):
        strategy = build_strategy(strategy_name, target, 1)
        config = ProcessConfig(n=n, r=1, s=2, t_max=t)
        rng = make_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
        host = run(config, strategy, stop_on_success=False, rng=rng).state.hypergraph
        for p, g in enumerate(patterns):
            sets = ordered_hom_sets(g, host)
            for v in range(1, k + 1):
                hom_sizes[p][v - 1].append(len(sets[v]))
        profile = k_set_edge_profile(host, k)
        for j in range(1, m + 1):
            xj[j - 1].append(profile(j))
    checks, ok = [], True
    for p, g in enumerate(patterns):
        for v in range(1, k + 1):
            mean, sem = mean_and_sem(hom_sizes[p][v - 1])
            bound = hom_set_bound(g, v, t, n)
            good = mean - sigmas * sem <= bound
            ok &= good
            checks.append({"pattern": [list(e) for e in g.edges], "anchor": v, "mean": mean, "sem": sem,
                           "bound": bound, "passed": good})
    for j in range(1, m + 1):
        mean, sem = mean_and_sem(xj[j - 1])
        bound = k_set_count_bound(1, 2, k, m, n, t, j)
        good = mean - sigmas * sem <= bound
        ok &= good
        checks.append({"j": j, "mean": mean, "sem": sem, "bound": bound, "passed": good})
    return {"passed": ok, "strategy": strategy_name, "n": n, "t": t, "trials": trials, "checks": checks}


# ---------------------------------------------------------------------------
# starplus balancedness

def random_starplus(rng: random.Random, r: int, s: int, k: int, ell: int) -> Hypergraph:
    """Full (s-r)-star on ``1..k`` plus ``ell`` random surplus edges.

    Surplus edges are distinct non-star s-sets while there are enough of
    them; beyond that they are drawn with repetition (parallel edges).
    """
    star = set(full_star(k, s, s - r).multisets)
    pool = [e for e in combinations(range(1, k + 1), s) if e not in star]
    if ell <= len(pool):
        surplus = rng.sample(pool, ell)
    else:
        surplus = pool + [rng.choice(pool) for _ in range(ell - len(pool))]
    return starplus(k, s, r, surplus)


def starplus_balance(max_s: int = 4, max_k: int = 8, placements: int = 20, seed: int = 0) -> dict:
    """Starpluses within the excess bound are balanced and their exponent equals ``r - 1/mu``."""
    rng = random.Random(seed)
    failures, cells = [], 0
    for s in range(3, max_s + 1):
        for r in range(2, s):
            for k in range(s + 1, max_k + 1):
                bound = starplus_excess_bound(r, s, k)
                for ell in range(0, floor(bound) + 1):
                    cells += 1
                    for _ in range(placements):
                        g = random_starplus(rng, r, s, k, ell)
                        expo = exponent_starplus(r, s, k, ell).exponent
                        dens = max_density(g, r)
                        balanced = is_balanced(g, r)
                        if not balanced or expo != r - 1 / dens:
                            failures.append({"r": r, "s": s, "k": k, "ell": ell, "balanced": balanced,
                                             "exponent": str(expo), "r_minus_inv_mu": str(r - 1 / dens),
                                             "edges": [list(e) for e in g.multisets]})
    return {"passed": not failures, "cells": cells, "placements": placements, "failures": failures[:20]}


SUITES = {
    "square-counts": square_counts,
    "weights": weight_floor,
    "ceilings-degeneracy": lambda **kw: empirical_ceilings("degeneracy", **kw),
    "ceilings-passive": lambda **kw: empirical_ceilings("passive", **kw),
    "balance": starplus_balance,
}
