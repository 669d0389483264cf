from __future__ import annotations

import io
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import nx_min_ratio
from ratiocycle.graph import (
    Edge,
    InvalidGraph,
    InvalidParams,
    NoCycle,
    ParseError,
    RatioGraph,
    format_ratio_graph,
    gen_planted_ratio,
    gen_random_graph,
    parse_ratio_graph,
    parse_rational,
    require_cycle_graph,
    substitute_lambda,
    validate,
)


class TestParse:
    def test_two_cycle(self):
        g = parse_ratio_graph("p ratio 2 2\na 0 1 3 1\na 1 0 1 1")
        assert g.n == 2
        assert g.as_tuples() == [(0, 1, 3, 1), (1, 0, 1, 1)]

    def test_empty_edge_set(self):
        g = parse_ratio_graph("p ratio 1 0")
        assert (g.n, g.edges) == (1, ())

    def test_vertex_out_of_range_reports_line(self):
        with pytest.raises(ParseError) as err:
            parse_ratio_graph("p ratio 2 1\na 0 5 1 1")
        assert err.value.line == 2

    def test_comments_bytes_and_streams(self):
        text = b"c hello\np ratio 2 2\nc mid\na 0 1 3 1\na 1 0 1 1\n"
        assert parse_ratio_graph(text) == parse_ratio_graph(io.BytesIO(text))

    def test_parallel_edges_kept_in_order(self):
        g = parse_ratio_graph("p ratio 2 3\na 0 1 5 1\na 0 1 2 1\na 1 0 0 1\n")
        assert [e.cost for e in g.edges] == [5, 2, 0]

    def test_arbitrary_precision(self):
        big = 10**40
        g = parse_ratio_graph(f"p ratio 1 1\na 0 0 {big} 1\n")
        assert g.edges[0].cost == big

    @pytest.mark.parametrize(
        "text, line",
        [
            ("p ratio 2 1\na 0 1 x 1", 2),
            ("a 0 1 1 1\np ratio 2 1", 1),
            ("p ratio 2 2\na 0 1 1 1", 1),
            ("p ratio 2 1\na 0 1 1", 2),
            ("p ratio 2 1\nq 0 1 1 1", 2),
            ("", 1),
        ],
    )
    def test_malformed(self, text, line):
        with pytest.raises(ParseError) as err:
            parse_ratio_graph(text)
        assert err.value.line == line

    def test_format_round_trip(self):
        g = gen_random_graph(6, 11, seed=4)
        assert parse_ratio_graph(format_ratio_graph(g, ["x"])) == g


class TestValidate:
    def test_two_cycle_ok(self, fixture2cycle):
        rep = validate(fixture2cycle)
        assert rep.ok and rep.violations == []

    def test_zero_transit_cycle(self):
        g = RatioGraph.from_tuples(2, [(0, 1, 3, 0), (1, 0, 1, 0)])
        assert validate(g).codes == ["ZeroTransitCycle"]

    def test_path_is_acyclic(self):
        g = RatioGraph.from_tuples(3, [(0, 1, 1, 1), (1, 2, 1, 1)])
        assert validate(g).codes == ["Acyclic"]

    def test_bad_vertex_and_negative_transit(self):
        g = RatioGraph.from_tuples(2, [(0, 3, 1, 1), (0, 1, 1, -1), (1, 0, 1, 2)])
        assert validate(g).codes == ["BadVertexId", "NegativeTransit"]

    def test_zero_time_edge_on_positive_cycle_is_fine(self):
        g = RatioGraph.from_tuples(2, [(0, 1, 3, 0), (1, 0, 1, 1)])
        assert validate(g).ok

    def test_self_loop_is_a_cycle(self):
        assert validate(RatioGraph.from_tuples(1, [(0, 0, -1, 2)])).ok

    def test_require_cycle_graph(self):
        with pytest.raises(NoCycle):
            require_cycle_graph(RatioGraph.from_tuples(2, [(0, 1, 1, 1)]))
        with pytest.raises(InvalidGraph) as err:
            require_cycle_graph(RatioGraph.from_tuples(1, [(0, 0, 1, 0)]))
        assert err.value.report.codes == ["ZeroTransitCycle"]


class TestSubstitute:
    @pytest.mark.parametrize(
        "cost, time, lam, w",
        [(3, 1, 2, 1), (3, 2, Fraction(3, 2), 0), (1, 1, 2, -1)],
    )
    def test_examples(self, cost, time, lam, w):
        g = RatioGraph.from_tuples(1, [(0, 0, cost, time)])
        assert substitute_lambda(g, lam).edges == ((0, 0, w),)

    @settings(max_examples=50, deadline=None)
    @given(
        st.fractions(max_denominator=20),
        st.fractions(max_denominator=20),
        st.integers(0, 10**6),
    )
    def test_linear_in_lambda(self, l1, l2, seed):
        g = gen_random_graph(4, 9, seed=seed)
        w1 = substitute_lambda(g, l1).edges
        w2 = substitute_lambda(g, l2).edges
        for (a, b, x), (_, _, y), e in zip(w1, w2, g.edges):
            assert x - y == (l2 - l1) * e.time
            assert (a, b) == (e.src, e.dst)


@settings(max_examples=60, deadline=None)
@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50).filter(bool))
def test_rational_field_laws(a, b):
    assert (a + b) - b == a
    assert b * (1 / b) == 1
    assert (a < b) + (a == b) + (a > b) == 1


def test_parse_rational():
    assert parse_rational("-7/21") == Fraction(-1, 3)
    assert parse_rational(" 4 ") == 4
    for bad in ("0.5", "1e3", "x"):
        with pytest.raises(ValueError):
            parse_rational(bad)


class TestGenerators:
    def test_backbone_only(self):
        g = gen_random_graph(5, 5, (-3, 3), (1, 2), seed=1)
        assert g.n == 5 and g.m == 5 and validate(g).ok
        assert sorted(e.src for e in g.edges) == list(range(5))
        assert sorted(e.dst for e in g.edges) == list(range(5))
        assert all(-3 <= e.cost <= 3 and 1 <= e.time <= 2 for e in g.edges)

    def test_frozen_output(self):
        g = gen_random_graph(3, 4, seed=0)
        assert g.as_tuples() == [(0, 2, 7, 4), (2, 1, 3, 3), (1, 0, 6, 3), (0, 1, 9, 2)]

    def test_determinism(self):
        assert gen_random_graph(7, 20, seed=99) == gen_random_graph(7, 20, seed=99)
        assert gen_random_graph(7, 20, seed=99) != gen_random_graph(7, 20, seed=98)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n=2, m=1),
            dict(n=3, m=4, cost_range=(2, 1)),
            dict(n=3, m=4, time_range=(0, 2)),
            dict(n=3, m=4, time_range=(3, 2)),
        ],
    )
    def test_invalid_params(self, kwargs):
        with pytest.raises(InvalidParams):
            gen_random_graph(**kwargs)

    @pytest.mark.parametrize(
        "n, m, planted, seed",
        [(4, 4, Fraction(3, 2), 7), (6, 9, Fraction(-1, 2), 3), (8, 14, Fraction(-2, 3), 5)],
    )
    def test_planted_matches_independent_oracle(self, n, m, planted, seed):
        g, lam = gen_planted_ratio(n, m, planted, seed)
        assert lam == planted
        assert validate(g).ok
        assert nx_min_ratio(g) == planted

    def test_planted_zero_with_positive_costs(self):
        g, lam = gen_planted_ratio(5, 12, 0, seed=2, potential_range=0)
        assert lam == 0
        planted_edges = [e for e in g.edges if e.cost == 0]
        assert len(planted_edges) >= 5
        assert all(e.cost >= 0 for e in g.edges)
        assert nx_min_ratio(g) == 0

    def test_planted_invalid(self):
        with pytest.raises(InvalidParams):
            gen_planted_ratio(3, 2, 1)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 7), st.integers(0, 8), st.integers(0, 10**9))
    def test_generators_always_validate(self, n, extra, seed):
        assert validate(gen_random_graph(n, n + extra, seed=seed)).ok
        g, lam = gen_planted_ratio(n, n + extra, Fraction(seed % 7 - 3, seed % 4 + 1), seed)
        assert validate(g).ok
        assert nx_min_ratio(g) == lam


def test_edges_are_immutable():
    e = Edge(0, 1, 2, 3)
    with pytest.raises(Exception):
        e.cost = 5
