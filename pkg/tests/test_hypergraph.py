from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from semirand.hypergraph import (
    Hypergraph,
    LeadingEdgeHypergraph,
    OrientedOrderedGraph,
    PatternFormatError,
    induced,
    parse,
    serialize,
)
from semirand.patterns import complete


@st.composite
def hosts(draw, max_n=8, max_m=12):
    n = draw(st.integers(3, max_n))
    s = draw(st.integers(1, 3))
    r = draw(st.integers(0, s))
    m = draw(st.integers(0, max_m))
    h = Hypergraph(n, s, r)
    for t in range(1, m + 1):
        square = draw(st.lists(st.integers(1, n), min_size=r, max_size=r))
        circle = draw(st.lists(st.integers(1, n), min_size=s - r, max_size=s - r))
        h.add_edge(square, circle, t)
    return h


def test_first_insertion():
    h = Hypergraph(5, 3, 2).add_edge((1, 2), (3,), 1)
    assert h.multisets == [(1, 2, 3)]
    assert h.degree(1) == 1


def test_parallel_edges_keep_multiplicity():
    h = Hypergraph(5, 3, 2).add_edge((1, 2), (3,), 1).add_edge((1, 2), (3,), 2)
    assert h.multiplicity((3, 2, 1)) == 2
    assert h.degree(2) == 2


def test_overlapping_square_and_circle_is_a_loop_edge():
    h = Hypergraph(5, 3, 2).add_edge((1, 2), (2,), 1)
    assert h.multisets == [(1, 2, 2)]
    assert h.degree(2) == 1


def test_repeated_vertex_counts_once():
    h = Hypergraph(4, 3).add_edge((), (1, 1, 2), 1)
    assert h.degree(1) == 1


@pytest.mark.parametrize("square,circle,time", [((1,), (3,), 2), ((1, 2), (3, 4), 2), ((1, 9), (3,), 2), ((1, 2), (3,), 1)])
def test_add_edge_rejects(square, circle, time):
    h = Hypergraph(5, 3, 2).add_edge((1, 2), (3,), 1)
    with pytest.raises(ValueError):
        h.add_edge(square, circle, time)


def test_degree_out_of_range():
    with pytest.raises(ValueError):
        Hypergraph(3, 2).degree(4)


def test_induced_examples():
    h = Hypergraph.from_edges(5, 3, [(1, 2, 3)])
    assert len(induced(h, {1, 2, 3})) == 1
    assert len(induced(h, {1, 2})) == 0
    assert len(induced(h, set())) == 0


def test_parse_plain_graph():
    g = parse('{"n":4,"s":2,"edges":[[1,2]]}')
    assert isinstance(g, Hypergraph) and g.multisets == [(1, 2)]


def test_k6_round_trip_is_identical_text():
    text = serialize(complete(6, 3))
    assert serialize(parse(text)) == text
    assert len(parse(text)) == 20


@pytest.mark.parametrize("text", [
    "not json",
    '{"n":4,"s":2}',
    '{"n":4,"s":2,"edges":[[1,2,3]]}',
    '{"n":"4","s":2,"edges":[]}',
    '{"k":3,"s":2,"edges":[{"verts":[1,2],"lead":3}]}',
    '{"k":3,"edges":[{"from":1}]}',
    '{"n":3,"s":2,"edges":[[1,5]]}',
])
def test_parse_errors(text):
    with pytest.raises(PatternFormatError):
        parse(text)


def test_leading_vertex_must_be_in_edge():
    with pytest.raises(ValueError):
        LeadingEdgeHypergraph(3, 2, (((1, 2), 3),))


# ---------------------------------------------------------------------------
# properties

@given(hosts())
def test_degree_sum_bounded_by_slots(h):
    total = sum(h.degree(v) for v in h.vertices())
    simple = all(len(set(e)) == len(e) for e in h.multisets)
    assert total <= h.s * len(h)
    assert (total == h.s * len(h)) == simple


@given(hosts())
def test_induced_on_everything_is_identity(h):
    assert induced(h, h.vertices()) == h


@given(hosts())
def test_edge_records_are_time_sorted(h):
    times = [rec.time for rec in h.edges]
    assert times == sorted(set(times))


@given(hosts(), st.data())
def test_induced_matches_edge_filter(h, data):
    w = set(data.draw(st.sets(st.integers(1, h.n))))
    assert induced(h, w).multisets == [e for e in h.multisets if set(e) <= w]


@given(hosts())
def test_hypergraph_round_trip(h):
    assert parse(serialize(h)) == h


@st.composite
def oriented(draw):
    k = draw(st.integers(2, 6))
    pairs = draw(st.lists(st.sampled_from(list(combinations(range(1, k + 1), 2))), unique=True, max_size=8))
    flips = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return OrientedOrderedGraph(k, tuple((b, a) if f else (a, b) for (a, b), f in zip(pairs, flips)))


@given(oriented())
def test_oriented_round_trip(g):
    assert parse(serialize(g)) == g


@given(st.integers(3, 6), st.data())
def test_leading_round_trip(k, data):
    sets = data.draw(st.lists(st.sampled_from(list(combinations(range(1, k + 1), 3))), max_size=6))
    edges = tuple((e, data.draw(st.sampled_from(e))) for e in sets)
    g = LeadingEdgeHypergraph(k, 3, edges)
    assert parse(serialize(g)) == g


@settings(max_examples=30)
@given(hosts())
def test_copy_is_independent(h):
    c = h.copy()
    c_len = len(c)
    h.add_edge(tuple([1] * (h.r or 0)), tuple([1] * (h.s - (h.r or 0))), (h.edges[-1].time + 1) if h.edges else 1)
    assert len(c) == c_len
