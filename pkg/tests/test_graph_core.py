import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orient_rr import caps
from orient_rr.errors import Disconnected, EmptyGraph, EmptySubset, LoopEdge, ParseError, TooLarge, UnknownVertex
from orient_rr.graph_core import (
    Divisor,
    Multigraph,
    canonical_divisor,
    chi_global,
    chi_report,
    fire,
    fire_set,
    format_divisor,
    load_divisor,
    load_graph,
    spanning_tree_count,
)

from conftest import div, fixture_graph


def test_load_graph_keeps_declaration_order():
    g = load_graph("# comment\nb a\n\na c  # trailing\nb a\n")
    assert g.vertices == ("b", "a", "c")
    assert g.edges == ((0, 1), (1, 2), (0, 1))
    assert g.degrees == (2, 3, 1)


@pytest.mark.parametrize("text, err", [
    ("a a\n", LoopEdge),
    ("# nothing\n", EmptyGraph),
    ("a b c\n", ParseError),
    ("a b\nc d\n", Disconnected),
])
def test_load_graph_errors(text, err):
    with pytest.raises(err):
        load_graph(text)


@pytest.mark.parametrize("name, n, m, genus, trees", [
    ("p2", 2, 1, 0, 1),
    ("b2", 2, 2, 1, 2),
    ("b3", 2, 3, 2, 3),
    ("c3", 3, 3, 1, 3),
    ("c4", 4, 4, 1, 4),
    ("k4", 4, 6, 3, 16),
    ("c4chord", 4, 5, 2, 8),
])
def test_fixture_invariants(name, n, m, genus, trees):
    g = fixture_graph(name)
    assert (g.n, g.m, g.genus) == (n, m, genus)
    assert spanning_tree_count(g) == trees


def test_tree_count_matches_float_determinant(k4):
    lap = k4.laplacian()
    assert lap.sum(axis=1).tolist() == [0] * 4
    assert spanning_tree_count(k4) == round(np.linalg.det(lap[1:, 1:].astype(float)))


def test_canonical_divisor(k4):
    k = canonical_divisor(k4)
    assert k.values == (1, 1, 1, 1)
    assert k.degree == 2 * k4.genus - 2


def test_divisor_file_round_trip(c3):
    d = load_divisor(c3, "b 2\n# c is left at zero\na -1\n")
    assert d.values == (-1, 2, 0)
    assert load_divisor(c3, format_divisor(d)) == d
    with pytest.raises(UnknownVertex):
        load_divisor(c3, "z 1\n")
    with pytest.raises(ParseError):
        load_divisor(c3, "a 1\na 2\n")


def test_divisor_arithmetic(c3):
    d = div(c3, 2, -1, 0)
    assert d.degree == 1
    assert (d.deg_plus, d.deg_minus) == (2, 1)
    assert not d.is_effective()
    assert (d + div(c3, 0, 1, 0)).is_effective()
    assert div(c3, 0, 0, 0) <= div(c3, 0, 1, 0)
    assert not div(c3, 1, 0, 0) <= div(c3, 0, 1, 0)
    with pytest.raises(OverflowError):
        Divisor(c3, (2**63, 0, 0))


def test_fire_single_vertex(c3):
    assert fire(div(c3, 2, 0, 0), {"a": 1}) == div(c3, 0, 1, 1)
    assert fire_set(div(c3, -1, 1, 1), ["b", "c"]) == div(c3, 1, 0, 0)


@given(st.lists(st.integers(-5, 5), min_size=4, max_size=4),
       st.lists(st.integers(-3, 3), min_size=4, max_size=4),
       st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_firing_is_linear_and_degree_preserving(vals, f1, f2):
    g = fixture_graph("c4chord")
    d = Divisor(g, vals)
    both = [a + b for a, b in zip(f1, f2)]
    assert fire(fire(d, f1), f2) == fire(d, both)
    assert fire(d, f1).degree == d.degree
    # firing every vertex once does nothing
    assert fire(d, [1] * 4) == d


def test_chi_report_values(c3):
    rep = chi_report(c3, div(c3, 2, -1, -1), ["b", "c"])
    assert rep.subset == frozenset({"b", "c"})
    assert rep.chi == -1
    assert rep.chi_bar == 3 - 0 - 2 - (-2)
    with pytest.raises(EmptySubset):
        chi_report(c3, div(c3, 0, 0, 0), [])


def test_chi_global_matches_reports(b3):
    chi, chi_bar, w1, w2 = chi_global(b3, div(b3, 2, 0))
    assert chi_bar == -1
    assert chi_report(b3, div(b3, 2, 0), w2).chi_bar == chi_bar
    assert chi_report(b3, div(b3, 2, 0), w1).chi == chi


def test_chi_global_cap(monkeypatch):
    g = Multigraph.from_edges([(str(i), str(i + 1)) for i in range(5)])
    monkeypatch.setenv("ORIENT_RR_CAPS", "chi_vertices=4")
    with pytest.raises(TooLarge):
        chi_global(g, Divisor.zero(g))
    monkeypatch.setenv("ORIENT_RR_CAPS", "no_such_cap=1")
    with pytest.raises(ParseError):
        caps.get("chi_vertices")


@settings(max_examples=60)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4), st.integers(1, 14), st.integers(1, 14))
def test_chi_and_chi_bar_are_submodular(vals, a, b):
    g = fixture_graph("k4")
    d = Divisor(g, vals)
    sa = [v for v in range(4) if a >> v & 1]
    sb = [v for v in range(4) if b >> v & 1]
    union = sorted(set(sa) | set(sb))
    inter = sorted(set(sa) & set(sb))
    if not inter:
        return
    r = lambda s: chi_report(g, d, s)
    assert r(sa).chi + r(sb).chi >= r(union).chi + r(inter).chi
    assert r(sa).chi_bar + r(sb).chi_bar >= r(union).chi_bar + r(inter).chi_bar
