import pytest
from hypothesis import given, settings

from app.core.carriers import (
    EMPTY,
    FiniteObject,
    LazyObject,
    compose,
    constant,
    decode,
    dependent_sum,
    encode,
    identity,
    invert_map,
    list_carrier,
    product_carrier,
    tabulated,
    words,
)
from app.core.errors import ParseError

from .strategies import elements, functions


def test_encode_writes_tuples_as_arrays():
    assert encode((1, "a", (2,))) == '[1,"a",[2]]'
    assert decode('[1,"a",[2]]') == (1, "a", (2,))


@given(elements)
def test_decode_inverts_encode(el):
    assert decode(encode(el)) == el


def test_finite_object_rejects_duplicates():
    with pytest.raises(ValueError):
        FiniteObject("X", (1, 1))


def test_words_up_to_depth():
    X = FiniteObject("X", ("a", "b"))
    found = list(words(X, 2))
    assert len(found) == 7
    assert () in found
    assert ("b", "a") in found


def test_list_carrier_is_lazy_and_monotone():
    X = FiniteObject("X", ("a", "b"))
    W = list_carrier(X)
    assert isinstance(W, LazyObject)
    assert not W.is_finite
    assert W.contains(("a", "b", "a"))
    assert not W.contains(("c",))
    assert set(W.enumerate(1)) <= set(W.enumerate(2))


def test_product_of_a_lazy_factor_is_lazy():
    X = FiniteObject("X", (0, 1))
    assert product_carrier("X×X", [X, X]).is_finite
    lazy = product_carrier("X×X*", [X, list_carrier(X)])
    assert not lazy.is_finite
    assert lazy.contains((1, (0, 0)))


def test_dependent_sum_over_a_finite_base():
    base = FiniteObject("B", (1, 2))
    total = dependent_sum("Σ", base, lambda b: FiniteObject(f"F{b}", tuple(range(b))), lambda t: True)
    assert isinstance(total, FiniteObject)
    assert total.elements == ((1, 0), (2, 0), (2, 1))


def test_tabulated_needs_a_total_map_into_the_codomain():
    X, Y = FiniteObject("X", (0, 1)), FiniteObject("Y", ("a",))
    with pytest.raises(ParseError) as missing:
        tabulated(X, Y, {0: "a"})
    assert missing.value.witness["missing"] == ["1"]
    with pytest.raises(ParseError):
        tabulated(X, Y, {0: "a", 1: "b"})


@settings(max_examples=40, deadline=None)
@given(functions())
def test_fibers_partition_the_domain(f):
    sizes = 0
    for y in f.cod.elements:
        fiber = f.fiber(y).enumerate(0)
        assert all(f(x) == y for x in fiber)
        sizes += len(fiber)
    assert sizes == len(f.dom)


@settings(max_examples=30, deadline=None)
@given(functions(), functions())
def test_composite_fibers_match_direct_preimages(f, g):
    # precompose g with a map into its domain so the composite is defined
    if not g.dom.elements:
        return
    h = tabulated(f.dom, g.dom, {x: g.dom.elements[hash(x) % len(g.dom)] for x in f.dom.elements}, "h")
    gh = compose(g, h)
    for z in g.cod.elements:
        direct = {x for x in h.dom.elements if g(h(x)) == z}
        assert set(gh.fiber(z).enumerate(0)) == direct


def test_identity_and_constant_fibers():
    X = FiniteObject("X", (0, 1, 2))
    assert identity(X).fiber(1).enumerate(0) == (1,)
    assert identity(X).fiber(7) is EMPTY
    c = constant(X, FiniteObject("1", ("*",)), "*")
    assert c.fiber("*") is X


def test_invert_map_of_a_bijection():
    X, Y = FiniteObject("X", (0, 1, 2)), FiniteObject("Y", ("a", "b", "c"))
    f = tabulated(X, Y, {0: "b", 1: "c", 2: "a"})
    inverse = invert_map(f, 0)
    assert inverse is not None
    assert [inverse(y) for y in ("a", "b", "c")] == [2, 0, 1]


def test_invert_map_refuses_a_non_injective_map():
    X, Y = FiniteObject("X", (0, 1)), FiniteObject("Y", ("a", "b"))
    assert invert_map(tabulated(X, Y, {0: "a", 1: "a"}), 0) is None
