from __future__ import annotations

import json
import math

import numpy as np
import pytest

from qgraph.errors import InvalidGraph, ParseError, UnboundParameter
from qgraph.graph import (Edge, MetricGraph, ParamLength, bind, bonds,
                          canonical, from_dict, loads, normalize,
                          rational_structure, to_dict, validate)

from conftest import random_connected_graph


def codes(g):
    return [v.code for v in validate(g)]


class TestValidate:
    def test_single_edge_valid(self):
        assert codes(MetricGraph(2, (Edge(0, 1, 1.0),))) == []

    def test_negative_length(self):
        assert "NonPositiveLength" in codes(MetricGraph(2, (Edge(0, 1, -1.0),)))

    def test_two_disjoint_edges(self):
        g = MetricGraph(4, (Edge(0, 1, 1.0), Edge(2, 3, 1.0)))
        assert "Disconnected" in codes(g)

    def test_bad_endpoint(self):
        assert "BadEndpoint" in codes(MetricGraph(2, (Edge(0, 5, 1.0),)))

    def test_loop_rejected_by_default(self):
        assert "SelfLoop" in codes(MetricGraph(2, (Edge(0, 0, 1.0), Edge(0, 1, 1.0))))
        ok = MetricGraph(2, (Edge(0, 0, 1.0), Edge(0, 1, 1.0)), allow_loops=True)
        assert "SelfLoop" not in codes(ok)


class TestNormalize:
    def test_uniform_scaling(self):
        g = MetricGraph(3, tuple(Edge(i, (i + 1) % 3, math.pi) for i in range(3)))
        n = normalize(g)
        assert all(abs(float(e.length) - 1 / 3) < 1e-15 for e in n.edges)
        assert abs(n.total_length() - 1.0) <= 1e-12

    def test_parameterized_four_quarters(self):
        g = MetricGraph(4, (Edge(0, 1, ParamLength("c1")), Edge(1, 2, math.pi),
                            Edge(2, 0, ParamLength("c1")), Edge(0, 3, ParamLength("c2"))))
        n = normalize(g, {"c1": math.pi, "c2": math.pi})
        assert [float(e.length) for e in n.edges] == [0.25, 0.25, 0.25, 0.25]

    def test_single_edge(self):
        n = normalize(MetricGraph(2, (Edge(0, 1, 7.0),)))
        assert float(n.edges[0].length) == 1.0

    def test_idempotent_exactly(self):
        g = normalize(MetricGraph(3, (Edge(0, 1, 0.3), Edge(1, 2, 1.9))))
        again = normalize(g)
        assert [e.length for e in again.edges] == [e.length for e in g.edges]

    def test_unbound_parameter(self):
        g = MetricGraph(2, (Edge(0, 1, ParamLength("c2")),))
        with pytest.raises(UnboundParameter, match="c2"):
            normalize(g)


class TestBind:
    def test_zero_contracts_edge(self):
        g = MetricGraph(4, (Edge(0, 1, ParamLength("c1")), Edge(1, 2, math.pi),
                            Edge(2, 0, ParamLength("c1")), Edge(0, 3, ParamLength("c2"))))
        b = bind(g, {"c1": math.pi, "c2": 0.0}, allow_zero=True)
        assert b.num_vertices == 3
        assert b.num_edges == 3

    def test_zero_requires_flag(self):
        g = MetricGraph(2, (Edge(0, 1, ParamLength("c1")),))
        with pytest.raises(InvalidGraph):
            bind(g, {"c1": 0.0})

    def test_contraction_refuses_loop(self):
        g = MetricGraph(2, (Edge(0, 1, ParamLength("c1")), Edge(0, 1, 1.0)))
        with pytest.raises(InvalidGraph, match="loop"):
            bind(g, {"c1": 0.0}, allow_zero=True)

    def test_unknown_parameter_name(self):
        g = MetricGraph(2, (Edge(0, 1, 1.0),))
        with pytest.raises(InvalidGraph):
            bind(g, {"c9": 1.0})


class TestRationalStructure:
    def test_four_quarters(self):
        g = MetricGraph(4, tuple(Edge(i, (i + 1) % 4, 0.25) for i in range(4)))
        rs = rational_structure(g)
        assert rs is not None
        assert rs.multipliers == (1, 1, 1, 1)
        assert abs(rs.base_length - 0.25) < 1e-12
        assert abs(rs.period - 8 * math.pi) < 1e-10

    def test_one_to_two_ratio(self):
        g = MetricGraph(3, (Edge(0, 1, 1 / 3), Edge(1, 2, 2 / 3)))
        rs = rational_structure(g)
        assert rs.multipliers == (1, 2)
        assert abs(rs.period - 6 * math.pi) < 1e-10

    def test_irrational_ratio(self):
        g = MetricGraph(3, (Edge(0, 1, 1.0), Edge(1, 2, math.sqrt(2))))
        assert rational_structure(g) is None

    def test_reconstruction_bound(self):
        # Length denominators <= 12 give pairwise-ratio denominators <= 144.
        rng = np.random.default_rng(7)
        for _ in range(25):
            g = random_connected_graph(rng)
            rs = rational_structure(g, tol=1e-9, max_denominator=144)
            assert rs is not None
            lengths = g.concrete_lengths()
            for ln, p in zip(lengths, rs.multipliers):
                assert abs(p * rs.base_length - ln) <= 1e-9 * ln
            assert math.gcd(*rs.multipliers) == 1 if len(rs.multipliers) > 1 else True


class TestDegreesAndBonds:
    def test_path_middle_vertex(self):
        g = MetricGraph(3, (Edge(0, 1, 0.5), Edge(1, 2, 0.5)))
        assert g.degree(1) == 2

    def test_pendant_triangle_junction(self, pendant_tri):
        assert pendant_tri.degree(0) == 3

    def test_handshake(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            g = random_connected_graph(rng)
            assert sum(g.degrees()) == 2 * g.num_edges

    def test_bond_basis_reversal(self):
        g = MetricGraph(3, (Edge(0, 1, 0.5), Edge(1, 2, 0.5)))
        b = bonds(g)
        assert b.num_bonds == 4
        for i in range(4):
            assert b.reverse(b.reverse(i)) == i
            assert b.tails[b.reverse(i)] == b.heads[i]

    def test_incoming_matches_degree(self):
        rng = np.random.default_rng(11)
        g = random_connected_graph(rng)
        b = bonds(g)
        for v in range(g.num_vertices):
            assert len(b.incoming(v)) == g.degree(v)


class TestSerialization:
    def test_round_trip_triangle(self, triangle):
        g2 = from_dict(to_dict(triangle))
        assert g2 == triangle

    def test_round_trip_canonical_random(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            g = canonical(random_connected_graph(rng))
            assert canonical(from_dict(json.loads(json.dumps(to_dict(g))))) == g

    def test_parallel_edges_preserved(self):
        text = json.dumps({"vertices": 2, "edges": [
            {"u": 0, "v": 1, "len": 0.5}, {"u": 0, "v": 1, "len": 0.5}]})
        g = loads(text)
        assert g.num_edges == 2

    def test_param_length_round_trip(self):
        g = MetricGraph(2, (Edge(0, 1, ParamLength("c3", 2.5)),))
        g2 = from_dict(to_dict(g))
        assert g2.edges[0].length == ParamLength("c3", 2.5)

    def test_malformed_json(self):
        with pytest.raises(ParseError, match="line"):
            loads("{nope")

    def test_missing_field_named(self):
        with pytest.raises(ParseError, match="edge 0"):
            loads(json.dumps({"vertices": 2, "edges": [{"u": 0, "v": 1}]}))

    def test_bad_vertices_field(self):
        with pytest.raises(ParseError, match="vertices"):
            loads(json.dumps({"vertices": -1, "edges": []}))


def test_canonical_sorts_and_orients():
    g = MetricGraph(3, (Edge(2, 1, 0.7), Edge(1, 0, 0.2), Edge(2, 0, 0.1)))
    c = canonical(g)
    assert [(e.u, e.v) for e in c.edges] == [(0, 1), (0, 2), (1, 2)]
