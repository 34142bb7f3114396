import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.core.backends import (
    FINGRPH,
    FINSET,
    FINSET2,
    enumerate_maps,
    finite_map,
    finite_object,
    finset,
    get_backend,
    graph,
    square_defect,
)
from app.core.carriers import FiniteObject, constant, tabulated
from app.core.errors import BoundsExceeded, InfinitePoints, ParseError
from app.core.monads import shared_monad

from .strategies import graphs


def test_get_backend_names_the_known_ones():
    assert get_backend("fingrph") is FINGRPH
    with pytest.raises(ParseError) as exc:
        get_backend("posets")
    assert exc.value.witness["known"] == ["fingrph", "finset", "finset2"]


def test_fingrph_derives_vertices_from_edges():
    assert FINGRPH.roots == ("E",)
    assert FINSET2.roots == ("0", "1")


def test_terminal_has_one_point(backends):
    for b in backends.values():
        one = b.terminal()
        assert one.parts[b.sorts[0]].elements == ("*",)
        assert len(b.points(one).enumerate(0)) == 1


def test_points_of_a_graph_are_its_loops():
    G = graph(["v", "w"], {"e": ("v", "v"), "f": ("v", "w")})
    assert FINGRPH.points(G).enumerate(0) == (("v", "e"),)


def test_pullback_of_sets():
    A = finset([0, 1, 2], "A")
    B = finset(["x"], "B")
    C = finset(["a", "b"], "C")
    f = finite_map(A, C, {"el": {0: "a", 1: "a", 2: "b"}}, "f")
    g = finite_map(B, C, {"el": {"x": "a"}}, "g")
    pb = FINSET.pullback(f, g)
    assert set(pb.apex.parts["el"].elements) == {("x", 0), ("x", 1)}
    assert square_defect(pb.proj1.at("el"), pb.proj0.at("el"), f.at("el"), g.at("el"), 3) is None


def test_square_defect_reports_a_non_bijective_comparison():
    A = FiniteObject("A", (0, 1))
    one = FiniteObject("1", ("*",))
    P = FiniteObject("P", ("p",))
    top = tabulated(P, A, {"p": 0})
    left = constant(P, one, "*")
    right = constant(A, one, "*")
    bottom = constant(one, one, "*")
    bad = square_defect(top, left, right, bottom, 3)
    assert bad["reason"] == "comparison map is not bijective"
    assert bad["preimages"] == 0


def test_finite_map_checks_naturality():
    G = graph(["v", "w"], {"e": ("v", "w")})
    H = graph(["u"], {"l": ("u", "u")})
    finite_map(G, H, {"V": {"v": "u", "w": "u"}, "E": {"e": "l"}})
    K = graph(["p", "q"], {"k": ("p", "p")})
    with pytest.raises(ParseError):
        finite_map(G, K, {"V": {"v": "p", "w": "q"}, "E": {"e": "k"}})


def test_is_discrete_on_graphs():
    assert FINGRPH.is_discrete(graph(["v"], {"e": ("v", "v")}), 3).passed
    lonely = FINGRPH.is_discrete(graph(["v", "w"], {"e": ("v", "v")}), 3)
    assert not lonely.passed
    assert lonely.failures[0].witness == {"sort": "V", "element": '"w"', "points": 0}
    twice = FINGRPH.is_discrete(graph(["v"], {"e": ("v", "v"), "f": ("v", "v")}), 3)
    assert twice.failures[0].witness["points"] == 2


@settings(max_examples=40, deadline=None)
@given(graphs())
def test_discrete_graphs_are_one_loop_per_vertex(G):
    src, tgt = G.op("src"), G.op("tgt")
    edges = G.parts["E"].elements
    expected = all(src(e) == tgt(e) for e in edges) and all(
        sum(1 for e in edges if src(e) == v) == 1 for v in G.parts["V"].elements
    )
    assert FINGRPH.is_discrete(G, 3).passed == expected


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=4), st.sampled_from([FINSET, FINGRPH]))
def test_copowers_are_discrete(n, backend):
    X = FiniteObject(str(n), tuple(range(n)))
    assert backend.is_discrete(backend.copower(X), 3).passed


def test_copowers_in_finset2_are_not_discrete():
    X = FiniteObject("2", (0, 1))
    report = FINSET2.is_discrete(FINSET2.copower(X), 3)
    assert not report.passed
    assert report.failures[0].witness["points"] == 2


def test_points_preserve_coproducts(loop):
    report = FINGRPH.connectedness_probe([loop, graph(["a", "b"], {"x": ("a", "a"), "y": ("b", "b")})])
    assert report.passed
    assert report.results[0].witness == {"points_of_sum": 3, "sum_of_points": 3}


def test_enumerate_maps_counts():
    assert len(enumerate_maps(finset([0, 1]), finset(["a", "b", "c"]))) == 9
    G = graph(["v"], {"e": ("v", "v")})
    assert len(enumerate_maps(G, G)) == 1
    two = graph(["v", "w"], {"e": ("v", "w")})
    # an edge must go to an edge with matching ends
    assert len(enumerate_maps(two, G)) == 1
    assert len(enumerate_maps(G, two)) == 0


def test_enumerate_maps_bounds():
    with pytest.raises(BoundsExceeded):
        enumerate_maps(finset([0, 1]), finset(["a", "b", "c"]), limit=5)
    lazy = shared_monad("free_monoid", FINSET).obj(finset(["a"]))
    with pytest.raises(InfinitePoints):
        enumerate_maps(lazy, lazy)


def test_finite_points_of_a_lazy_object():
    T1 = shared_monad("free_monoid", FINGRPH).obj(FINGRPH.terminal())
    with pytest.raises(InfinitePoints):
        FINGRPH.finite_points(T1)
    assert FINGRPH.finite_points(finite_object(FINGRPH, {"V": ["v"], "E": []})).elements == ()
