from __future__ import annotations

import json
from fractions import Fraction

import pytest

from hyperctrl import data_path
from hyperctrl.hypergraph import (HypergraphError, TemporalHypergraph, adjacency_tensors, load, node_degrees,
                                  parse, serialize, to_dict)
from hyperctrl.poly import Poly
from hyperctrl.tensor import FACTORIAL

EX1 = {
    "nodes": 4,
    "hyperedges": [{"nodes": e, "weight": [{"pow": 1, "coef": "1"}]} for e in ([1, 2, 4], [1, 3, 4], [2, 3, 4])],
}


def test_parse_ex1():
    H = parse(json.dumps(EX1))
    assert (H.k, H.m, H.n) == (3, 3, 4)
    assert all(e.weight == Poly.t(4) for e in H.edges)


def test_bundled_inputs():
    ex1 = load(data_path("ex1.json"))
    a = load(data_path("eco_a.json"))
    b = load(data_path("eco_b.json"))
    assert (ex1.k, ex1.m) == (3, 3)
    assert (b.k, b.m) == (3, 6)
    assert b.label(5) == "s5"
    assert {j: len(T) for j, T in adjacency_tensors(a).items()} == {2: 2, 3: 2}


@pytest.mark.parametrize("doc, field", [
    ({"nodes": 3, "hyperedges": [{"nodes": [1, 1, 2]}]}, "duplicate node"),
    ({"nodes": 3, "hyperedges": [{"nodes": [1, 4]}]}, "out of range"),
    ({"nodes": 3, "hyperedges": [{"nodes": [1, 2], "weight": [{"pow": 0, "coef": "0"}]}]}, "zero weight"),
    ({"nodes": 3, "hyperedges": [{"nodes": [1, 2]}, {"nodes": [2, 1]}]}, "duplicate edge"),
    ({"nodes": 3, "hyperedges": [{"nodes": [1]}]}, "between 2"),
    ({"nodes": 0}, "nodes"),
    ({"nodes": 2, "labels": ["a"]}, "labels"),
    ({"nodes": 2, "normalization": "weird"}, "normalization"),
    ({"nodes": 2, "extra": 1}, "unknown field"),
    ({"nodes": 2, "hyperedges": [{"nodes": [1, 2], "weight": [{"pow": -1, "coef": "1"}]}]}, "pow"),
    ({"nodes": 2, "hyperedges": [{"nodes": [1, 2], "weight": [{"pow": 1, "coef": 0.5}]}]}, "coef"),
])
def test_validation_errors(doc, field):
    with pytest.raises(HypergraphError, match=field):
        parse(json.dumps(doc))


def test_malformed_json():
    with pytest.raises(ValueError):
        parse("{nodes: 3")


def test_omitted_weight_is_one():
    H = parse(json.dumps({"nodes": 2, "hyperedges": [{"nodes": [1, 2]}]}))
    assert H.edges[0].weight == Poly.const(2, 1)


def test_rational_weight_terms():
    H = parse(json.dumps({"nodes": 2, "hyperedges": [
        {"nodes": [1, 2], "weight": [{"pow": 2, "coef": "-1/2"}, {"pow": 0, "coef": "3"}]}]}))
    assert str(H.edges[0].weight.evaluate([0, 0, 2])) == "1"


def test_node_degrees():
    assert node_degrees(load(data_path("ex1.json"))) == [2, 2, 2, 3]
    assert node_degrees(TemporalHypergraph.build(3, [[1, 2]])) == [1, 1, 0]
    assert node_degrees(load(data_path("eco_b.json")))[4] == 4


def test_degree_sum_and_tensor_count():
    for name in ("ex1.json", "eco_a.json", "eco_b.json"):
        H = load(data_path(name))
        assert sum(node_degrees(H)) == sum(len(e.nodes) for e in H.edges)
        assert sum(len(T) for T in adjacency_tensors(H).values()) == H.m


def test_pairwise_only_gives_single_matrix_tensor():
    H = TemporalHypergraph.build(3, [[1, 2], [2, 3]])
    assert list(adjacency_tensors(H)) == [2]


def test_roundtrip():
    for name in ("ex1.json", "eco_a.json", "eco_b.json"):
        H = load(data_path(name))
        assert parse(serialize(H)) == H
        assert to_dict(parse(serialize(H))) == to_dict(H)
    H = TemporalHypergraph.build(3, [([1, 2, 3], Poly.time_poly(3, {0: "1/3", 2: -2}))],
                                 labels=["a", "b", "c"], normalization=FACTORIAL)
    assert parse(serialize(H)) == H


def test_with_normalization():
    H = load(data_path("ex1.json")).with_normalization(FACTORIAL)
    (T,) = adjacency_tensors(H).values()
    assert T[(1, 2, 4)] == Poly.t(4).scale(Fraction(1, 2))
