import itertools
import random

import pytest

from orient_rr import divisors
from orient_rr.errors import CapacityTooLarge, Infeasible, ParseError, WrongDegree
from orient_rr.flows import (
    FlowNetwork,
    base_orientation,
    break_divisor,
    is_orientable,
    is_partially_orientable,
    load_network,
    max_flow,
    mfmc_via_orientability,
    orient_via_flow,
    torsor_act,
)
from orient_rr.graph_core import Divisor, spanning_tree_count
from orient_rr.orientations import PartialOrientation, replay
from orient_rr.reversal_engine import equivalent

from conftest import FIXTURES, div, fixture_graph


def brute_min_cut(net):
    others = [v for v in range(net.n) if v not in (net.s, net.t)]
    best = None
    for mask in range(1 << len(others)):
        side = {net.s} | {v for k, v in enumerate(others) if mask >> k & 1}
        c = net.cut_capacity(side)
        best = c if best is None else min(best, c)
    return best


def test_max_flow_unit_triangle():
    net = load_network((FIXTURES / "c3.net").read_text(), "a", "b")
    flow, cut = max_flow(net)
    assert flow.value == 1
    assert cut == frozenset({"a"})
    assert mfmc_via_orientability(net)[0] == 1


def test_max_flow_cut_of_four():
    net = load_network((FIXTURES / "cut4.net").read_text(), "s", "t")
    flow, cut = max_flow(net)
    assert flow.value == brute_min_cut(net) == 4
    assert cut == frozenset({"s", "a", "b"})
    # arcs leaving the minimum cut are saturated
    for (u, v), f, c in zip(net.arcs, flow.values, net.capacity):
        if net.vertices[u] in cut and net.vertices[v] not in cut:
            assert f == c
    assert mfmc_via_orientability(net)[0] == 4


def test_zero_network():
    net = FlowNetwork.from_arcs([("s", "a", 0), ("a", "t", 0)], "s", "t")
    flow, cut = max_flow(net)
    assert flow.value == 0 and cut == frozenset({"s"})
    assert mfmc_via_orientability(net)[0] == 0


def test_network_parsing_errors():
    with pytest.raises(ParseError):
        load_network("s t\n", "s", "t")
    with pytest.raises(ParseError):
        load_network("s t -1\n", "s", "t")


def test_mfmc_capacity_cap(monkeypatch):
    net = FlowNetwork.from_arcs([("s", "t", 50)], "s", "t")
    monkeypatch.setenv("ORIENT_RR_CAPS", "mfmc_capacity=10")
    with pytest.raises(CapacityTooLarge):
        mfmc_via_orientability(net)


@pytest.mark.parametrize("seed", range(5))
def test_random_networks_against_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    triples = [(str(rng.randrange(n)), str(rng.randrange(n)), rng.randint(0, 4)) for _ in range(3 * n)]
    triples = [t for t in triples if t[0] != t[1]] + [("0", str(n - 1), 1)]
    net = FlowNetwork.from_arcs(triples, "0", str(n - 1))
    flow, _ = max_flow(net)
    assert flow.value == brute_min_cut(net) == mfmc_via_orientability(net)[0]


def test_orientability_examples(c3, k4):
    assert is_orientable(c3, div(c3, 0, 0, 0))
    assert not is_orientable(c3, div(c3, 2, -1, -1))
    heads = {tuple(o.divisor.values) for o in _full(k4)}
    assert is_orientable(k4, div(k4, 2, 0, 0, 0)) == ((2, 0, 0, 0) in heads)
    with pytest.raises(WrongDegree):
        is_orientable(c3, div(c3, 1, 0, 0))


def _full(g):
    for state in itertools.product((1, -1), repeat=g.m):
        yield PartialOrientation(g, state)


def test_orient_via_flow_exact(c3):
    base = PartialOrientation.from_arcs(c3, [("a", "b"), ("a", "c"), ("b", "c")])
    o = orient_via_flow(c3, div(c3, 0, 0, 0), base)
    assert o.divisor == div(c3, 0, 0, 0)
    same = orient_via_flow(c3, base.divisor, base)
    assert same == base
    with pytest.raises(Infeasible):
        orient_via_flow(c3, div(c3, 2, -1, -1))


def test_orient_via_flow_k4_pipeline(k4):
    base = base_orientation(k4)
    assert base.divisor == div(k4, -1, 0, 1, 2)
    target = div(k4, 1, 1, 0, 0)
    o = orient_via_flow(k4, target, base)
    assert o.divisor == target
    flipped = [e for e in range(k4.m) if o.state[e] != base.state[e]]
    assert len(flipped) == 3


def test_partial_orientability_examples(c3, b3, k4):
    assert is_partially_orientable(k4, Divisor.constant(k4, -1))
    assert not is_partially_orientable(b3, div(b3, 2, 0))
    assert is_partially_orientable(c3, div(c3, 0, 0, -1))
    witness = PartialOrientation.from_heads(c3, {0: "a", 1: "b"})
    assert witness.divisor == div(c3, 0, 0, -1)
    assert not is_partially_orientable(c3, div(c3, -2, 1, 0))


def test_partial_orientability_above_the_subset_cap(monkeypatch, k4):
    monkeypatch.setenv("ORIENT_RR_CAPS", "chi_vertices=1")
    for vals in itertools.product(range(-1, 3), repeat=4):
        d = Divisor(k4, vals)
        monkeypatch.setenv("ORIENT_RR_CAPS", "chi_vertices=1")
        fast = is_partially_orientable(k4, d)
        monkeypatch.delenv("ORIENT_RR_CAPS")
        assert fast == is_partially_orientable(k4, d)


@pytest.mark.parametrize("values, expected", [((1, 0, 0), (1, 0, 0)), ((-1, 1, 1), (1, 0, 0))])
def test_break_divisor_c3(c3, values, expected):
    assert break_divisor(c3, div(c3, *values)) == div(c3, *expected)


def test_break_divisor_image_on_c3(c3):
    image = set()
    for vals in itertools.product(range(-2, 3), repeat=3):
        if sum(vals) == 1:
            image.add(break_divisor(c3, Divisor(c3, vals)).values)
    assert image == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    assert len(image) == spanning_tree_count(c3)


def test_break_divisor_wrong_degree(c3):
    with pytest.raises(WrongDegree):
        break_divisor(c3, div(c3, 0, 0, 0))


def test_torsor_examples(c3):
    cyc = PartialOrientation.from_arcs(c3, [("a", "b"), ("b", "c"), ("c", "a")])
    out, cert = torsor_act(cyc, Divisor.zero(c3))
    assert equivalent(out, cyc) and cert.moves == ()
    z = Divisor.from_mapping(c3, {"b": 1, "a": -1})
    out, cert = torsor_act(cyc, z)
    assert divisors.linearly_equivalent(c3, out.divisor, div(c3, -1, 1, 0))
    assert replay(cert, cyc) == out
    back, _ = torsor_act(out, -z)
    assert equivalent(back, cyc)
    with pytest.raises(WrongDegree):
        torsor_act(cyc, div(c3, 1, 0, 0))
