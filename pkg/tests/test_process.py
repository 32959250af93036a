import io
import math
import re
from collections import Counter
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semirand.hypergraph import Hypergraph
from semirand.oracle import contains_copy
from semirand.patterns import complete
from semirand.process import (
    ProcessConfig,
    ProcessState,
    RoundSampler,
    StrategyContractError,
    draw_round,
    make_rng,
    run,
    square_histogram,
    step,
)
from semirand.strategies import DegeneracyBuilder, PassiveStrategy
from semirand.strategies.base import Strategy


class Fixed(Strategy):
    """Answers every round with the same circle; never succeeds unless told to."""

    def __init__(self, circle=None, done=False):
        self.circle = circle
        self.done = done

    def propose(self, state, square):
        return self.circle if self.circle is not None else self.sink

    def succeeded(self, state):
        return self.done


def test_config_validation():
    for bad in ((5, 0, 2), (5, 3, 2), (2, 1, 3)):
        with pytest.raises(ValueError):
            ProcessConfig(*bad)
    with pytest.raises(ValueError):
        ProcessConfig(5, 1, 2, t_max=-1)


def test_single_square_is_a_vertex():
    sampler = RoundSampler(10, 1, make_rng(0))
    for _ in range(100):
        (u,) = sampler.draw()
        assert 1 <= u <= 10


def test_seeded_draws_repeat():
    a = RoundSampler(50, 3, make_rng(42))
    b = RoundSampler(50, 3, make_rng(42))
    assert [a.draw() for _ in range(5000)] == [b.draw() for _ in range(5000)]


def test_draw_round_uses_the_sampler():
    state = ProcessState.initial(ProcessConfig(10, 2, 3))
    assert len(draw_round(state, RoundSampler(10, 2, make_rng(1)))) == 2


def test_pair_frequencies_are_uniform():
    n, draws = 10, 100_000
    sampler = RoundSampler(n, 2, make_rng(3))
    freq = Counter(sampler.draw() for _ in range(draws))
    p = 1 / math.comb(n, 2)
    sd = math.sqrt(draws * p * (1 - p))
    assert len(freq) == 45
    assert all(abs(c - draws * p) <= 4 * sd for c in freq.values())


def test_consecutive_rounds_are_independent():
    # chi-square on the joint law of two consecutive edges of the pure random process
    n, pairs = 5, 40_000
    sampler = RoundSampler(n, 2, make_rng(11))
    cells = list(combinations(range(1, n + 1), 2))
    joint = Counter((sampler.draw(), sampler.draw()) for _ in range(pairs))
    expected = pairs / len(cells) ** 2
    chi2 = sum((joint[(a, b)] - expected) ** 2 / expected for a in cells for b in cells)
    df = len(cells) ** 2 - 1
    assert (chi2 - df) / math.sqrt(2 * df) < 5


def test_step_with_sink_strategy():
    config = ProcessConfig(20, 1, 3, t_max=5)
    state = ProcessState.initial(config)
    strat = Fixed()
    strat.start(config)
    square, circle = step(state, strat, RoundSampler(20, 1, make_rng(0)))
    assert circle == (1, 2)
    assert state.hypergraph.multisets == [tuple(sorted(square + circle))]
    assert state.round == 1 and len(state.hypergraph) == 1


def test_pure_random_step_when_r_equals_s():
    config = ProcessConfig(8, 3, 3, t_max=10)
    strat = Fixed()
    res = run(config, strat)
    assert all(rec.circle == () for rec in res.state.hypergraph.edges)
    assert all(len(set(e)) == 3 for e in res.state.hypergraph.multisets)


@pytest.mark.parametrize("circle", [(1,), (1, 2, 3), (0, 1), (1, 99)])
def test_contract_violations_abort(circle):
    with pytest.raises(StrategyContractError):
        run(ProcessConfig(20, 1, 3, t_max=3), Fixed(circle))


def test_zero_budget():
    res = run(ProcessConfig(10, 1, 2, t_max=0), PassiveStrategy(complete(3)))
    assert not res.success and res.rounds_used == 0
    empty = Hypergraph(3, 2)
    res = run(ProcessConfig(10, 1, 2, t_max=0), PassiveStrategy(empty))
    assert res.success


def test_always_true_uses_no_rounds():
    res = run(ProcessConfig(10, 1, 2, t_max=50), Fixed(done=True))
    assert res.success and res.rounds_used == 0 and res.state.round == 0


def test_full_budget_when_not_stopping():
    res = run(ProcessConfig(10, 1, 2, t_max=50), Fixed(done=True), stop_on_success=False)
    assert res.state.round == 50 and res.rounds_used == 0


def test_transcript_lines():
    buf = io.StringIO()
    run(ProcessConfig(10, 2, 3, seed=5, t_max=3), Fixed(), transcript=buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == 3
    for i, line in enumerate(lines, start=1):
        assert re.fullmatch(rf"{i} U:\{{\d+,\d+\}} V:\{{\d+\}}", line)


def test_degeneracy_success_is_confirmed():
    n = 10_000
    for seed in range(5):
        res = run(ProcessConfig(n, 1, 2, seed=seed, t_max=int(20 * math.sqrt(n))), DegeneracyBuilder(complete(3)))
        assert res.success == contains_copy(res.state.hypergraph, complete(3))


def test_histogram_edge_cases():
    config = ProcessConfig(10, 1, 2, t_max=1)
    assert square_histogram(ProcessState.initial(config)) == {0: 10}
    res = run(config, Fixed())
    assert square_histogram(res.state) == {0: 9, 1: 1}


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 30), st.data())
def test_round_invariants(n, data):
    s = data.draw(st.integers(1, min(n, 4)))
    r = data.draw(st.integers(1, s))
    t = data.draw(st.integers(0, 60))
    seed = data.draw(st.integers(0, 2 ** 32))
    res = run(ProcessConfig(n, r, s, seed=seed, t_max=t), Fixed())
    state = res.state
    assert len(state.hypergraph) == state.round == t
    assert sum(state.square_counts) == r * t
    hist = square_histogram(state)
    assert sum(hist.values()) == n
    assert sum(x * c for x, c in hist.items()) == r * t
    for rec in state.hypergraph.edges:
        assert len(set(rec.square)) == r and list(rec.square) == sorted(rec.square)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_transcript_is_determined_by_seed(seed):
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        run(ProcessConfig(200, 1, 2, seed=seed, t_max=120), DegeneracyBuilder(complete(3)), transcript=buf)
        outs.append(buf.getvalue())
    assert outs[0] == outs[1]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_success_never_reverts(seed):
    strat = PassiveStrategy(complete(3, 2))
    config = ProcessConfig(12, 1, 2, seed=seed, t_max=40)
    state = ProcessState.initial(config)
    sampler = RoundSampler(12, 1, make_rng(seed))
    strat.start(config)
    seen = False
    for _ in range(40):
        step(state, strat, sampler)
        now = strat.succeeded(state)
        assert now or not seen
        seen = now
        assert now == contains_copy(state.hypergraph, complete(3))


def test_sampler_rejects_bad_sizes():
    with pytest.raises(ValueError):
        RoundSampler(3, 4, make_rng(0))


def test_make_rng_accepts_seed_sequences():
    a = make_rng(np.random.SeedSequence(1, spawn_key=(2, 3))).integers(0, 10 ** 9)
    b = make_rng(np.random.SeedSequence(1, spawn_key=(2, 3))).integers(0, 10 ** 9)
    assert a == b
