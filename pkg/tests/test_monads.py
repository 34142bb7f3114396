import pytest

from app.core.backends import FINGRPH, FINSET, FINSET2, finite_map, finset, graph
from app.core.carriers import FiniteObject
from app.core.errors import IncompleteTable, LawViolation, MixedBackends, ParseError
from app.core.monads import (
    FreeCategoryMonad,
    OperadicMonad,
    check_cartesian,
    check_monad,
    conjunction_morphisms,
    cyclic_operad,
    fiber_count_check,
    finite_monoid,
    identity_morphism,
    induced_monad_on_mat,
    lift_to_span,
    monad_from_spec,
    operad_transformation,
    shared_monad,
    table_operad,
    terminal_operad,
    unit_morphism,
)
from app.core.sampling import rng_for
from app.core.spans import span_samples

SPECS = [
    {"monad": "identity"},
    {"monad": "free_monoid"},
    {"monad": "monoid_product", "monoid": {"cyclic": 2}},
    {"monad": "operadic", "operad": "cyclic", "order": 2},
]


def _set_map():
    X, Y = finset([0, 1, 2], "X"), finset(["a", "b"], "Y")
    return X, Y, finite_map(X, Y, {"el": {0: "a", 1: "a", 2: "b"}}, "f")


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s["monad"])
def test_set_monads_are_cartesian(spec):
    T = monad_from_spec(spec, FINSET)
    X, Y, f = _set_map()
    report = check_cartesian(T, [X, Y], [f], depth=2)
    assert report.passed, report.to_text()


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s["monad"])
def test_graph_monads_are_cartesian(spec, loop):
    T = monad_from_spec(spec, FINGRPH)
    G = graph(["v", "w"], {"e": ("v", "w"), "l": ("w", "w")}, "G")
    f = finite_map(G, loop, {"V": {"v": "v", "w": "v"}, "E": {"e": "e", "l": "e"}}, "f")
    assert check_cartesian(T, [G], [f], depth=2).passed


def test_free_category_is_cartesian(loop):
    T = FreeCategoryMonad()
    path = graph([0, 1, 2], {"a": (0, 1), "b": (1, 2)}, "P")
    f = finite_map(path, loop, {"V": {0: "v", 1: "v", 2: "v"}, "E": {"a": "e", "b": "e"}}, "f")
    report = check_cartesian(T, [path, loop], [f], depth=2)
    assert report.passed, report.to_text()
    # an acyclic graph has finitely many paths: three identities, a, b and a·b
    assert len(T.obj(path).parts["E"].elements) == 6


def test_free_category_needs_graphs():
    with pytest.raises(MixedBackends):
        FreeCategoryMonad(FINSET)


@pytest.mark.parametrize("tag", ["free_monoid", "operadic"])
def test_fibers_match_enumeration(tag):
    _, _, f = _set_map()
    report = fiber_count_check(monad_from_spec({"monad": tag}, FINSET), f, depth=3)
    assert report.passed, report.to_text()


def test_unknown_monad_tags():
    with pytest.raises(ParseError):
        monad_from_spec({"monad": "powerset"}, FINSET)
    with pytest.raises(ParseError):
        monad_from_spec({"monad": "operadic", "operad": "braided"}, FINSET)


def test_describe_rebuilds_the_same_monad():
    for spec in SPECS:
        T = monad_from_spec(spec, FINSET2)
        again = monad_from_spec(T.describe(), FINSET2)
        assert type(again) is type(T)
        assert again.name == T.name


def test_finite_monoid_laws():
    table = {(a, b): max(a, b) for a in (0, 1) for b in (0, 1)}
    assert finite_monoid("max", [0, 1], 0, table).op(1, 0) == 1
    with pytest.raises(LawViolation):
        finite_monoid("max", [0, 1], 1, table)
    with pytest.raises(IncompleteTable):
        finite_monoid("partial", [0, 1], 0, {(0, 0): 0})
    broken = {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0, (0, 2): 2, (2, 0): 2, (1, 2): 2, (2, 1): 2, (2, 2): 1}
    with pytest.raises(LawViolation):
        finite_monoid("broken", [0, 1, 2], 0, broken)


def test_table_operad_checks_shapes_and_laws():
    O = table_operad("U", {1: ["u"]}, "u", {("u", ("u",)): "u"})
    assert O.compose("u", ("u",)) == "u"
    with pytest.raises(IncompleteTable):
        table_operad("U", {1: ["u", "v"]}, "u", {("u", ("u",)): "u"})
    swap = {
        ("u", ("u",)): "u",
        ("u", ("v",)): "v",
        ("v", ("u",)): "v",
        ("v", ("v",)): "v",
    }
    assert table_operad("V", {1: ["u", "v"]}, "u", swap).compose("v", ("v",)) == "v"
    with pytest.raises(LawViolation):
        table_operad("W", {1: ["u", "v"]}, "u", {**swap, ("v", ("u",)): "u"})


def test_operad_maps_preserve_structure():
    source = OperadicMonad(FINSET, cyclic_operad(2))
    target = OperadicMonad(FINSET, terminal_operad())
    tau = operad_transformation(source, target, lambda o: "*")
    X = finset(["x"], "X")
    assert tau.at(X)("el", (1, ("x", "x"))) == ("*", ("x", "x"))
    with pytest.raises(LawViolation):
        operad_transformation(source, OperadicMonad(FINSET, cyclic_operad(2)), lambda o: 1 - o)


def test_lifts_are_cached():
    T = shared_monad("free_monoid", FINSET)
    assert lift_to_span(T) is lift_to_span(T)
    assert lift_to_span(T).base is T
    assert induced_monad_on_mat(T) is induced_monad_on_mat(T)
    assert shared_monad("free_monoid", FINSET) is T


def test_lifted_free_monoid_is_a_monad_on_spans():
    M = lift_to_span(shared_monad("free_monoid", FINSET))
    samples = span_samples(M.dc, rng_for(0, "lift"), count=4, size=2)
    report = check_monad(M, samples, depth=2)
    assert report.passed, report.to_text()


def test_morphism_orientations():
    T = shared_monad("free_monoid", FINSET)
    M = lift_to_span(T)
    assert not identity_morphism(M).is_lax
    unit = unit_morphism(M)
    assert unit.is_lax
    assert unit.target.name == "Id"
    oplax, lax = conjunction_morphisms(T)
    assert (oplax.orientation, lax.orientation) == ("oplax", "lax")
    assert oplax.source is induced_monad_on_mat(T)
    assert lax.source is M


def _loops(x, n):
    """The point of 𝔉(X·1) winding ``n`` times round the loop at ``x``."""
    return (x, (x, (x,) * n))


def _repeat(w):
    """The point of (X·1)* spelling ``w`` on vertices and on edges."""
    return (w, w)


@pytest.mark.parametrize("size", [1, 2, 3, 4])
def test_free_category_induces_naturals_under_multiplication(size):
    Tbar = induced_monad_on_mat(shared_monad("free_category", FINGRPH))
    X = FiniteObject(f"X{size}", tuple(range(size)))
    assert set(Tbar.obj(X).enumerate(5)) == {_loops(x, n) for x in X.elements for n in range(6)}
    unit, mult = Tbar.e(X), Tbar.m(X)
    for x in X.elements:
        assert unit(x) == _loops(x, 1)
        for n in range(6):
            for m in range(6):
                outer = _loops(x, n)
                assert mult((outer, (outer, (outer,) * m))) == _loops(x, n * m)


@pytest.mark.parametrize("size", [1, 2, 3, 4])
def test_free_monoid_on_graphs_induces_the_free_monoid(size):
    Tbar = induced_monad_on_mat(shared_monad("free_monoid", FINGRPH))
    words = shared_monad("free_monoid", FINSET)
    X = FiniteObject(f"X{size}", tuple(range(size)))
    X1 = finset(X.elements, "X")
    assert set(Tbar.obj(X).enumerate(5)) == {_repeat(w) for w in words.obj(X1).parts["el"].enumerate(5)}
    unit, mult = Tbar.e(X), Tbar.m(X)
    for x in X.elements:
        assert unit(x) == _repeat((x,))
    inner = words.obj(X1).parts["el"].enumerate(3)
    for first in inner:
        for second in inner:
            joined = first + second
            outer = (_repeat(first), _repeat(second))
            assert mult(_repeat(outer)) == _repeat(joined)
