import pytest

from app.core.backends import FINSET
from app.core.errors import IncompleteTable, LawViolation, ParseError
from app.core.hla import (
    change_of_base,
    check_hla,
    check_hla_morphism,
    companion_data,
    enumerate_hla_morphisms,
    free_multicategory,
    identity_hla_morphism,
    morphism_diff,
    terminal_hla,
)
from app.core.monads import identity_morphism, induced_monad_on_mat, lift_to_span, shared_monad, unit_morphism
from app.models.structures import load_structure


def _multicategory(doc):
    return load_structure(doc).value


def test_two_object_multicategory_passes(multicategory_doc):
    h = _multicategory(multicategory_doc)
    report = check_hla(h, 3)
    assert report.passed, report.to_text()
    assert report.exact
    assert len(h.a.apex.parts["el"].elements) == 5


def test_corrupted_composite_breaks_associativity(multicategory_doc):
    # s∘(f) should be g; with f the composite s∘(s∘(g)) comes out as f instead of g
    rows = multicategory_doc["composition"]
    rows[rows.index(["s", ["f"], "g"])] = ["s", ["f"], "f"]
    with pytest.raises(LawViolation) as exc:
        load_structure(multicategory_doc)
    assert "associativity" in exc.value.witness["diagram"]


def test_missing_composite_is_incomplete(multicategory_doc):
    multicategory_doc["composition"].remove(["s", ["g"], "f"])
    with pytest.raises(IncompleteTable) as exc:
        load_structure(multicategory_doc)
    assert exc.value.witness == {"operation": '"s"', "children": '["g"]'}


def test_composite_with_the_wrong_profile(multicategory_doc):
    rows = multicategory_doc["composition"]
    rows[rows.index(["1b", ["f"], "f"])] = ["1b", ["f"], "s"]
    with pytest.raises(IncompleteTable):
        load_structure(multicategory_doc)


def test_identities_must_be_unary(multicategory_doc):
    multicategory_doc["identities"] = [["a", "1a"], ["b", "f"]]
    with pytest.raises(IncompleteTable):
        load_structure(multicategory_doc)


def test_terminal_internal_structure_is_the_associative_one():
    # one object, one operation in each arity
    h = terminal_hla(lift_to_span(shared_monad("free_monoid", FINSET)))
    report = check_hla(h, 3)
    assert report.passed, report.to_text()
    assert not report.exact
    assert h.a.apex.parts["el"].contains(("*", "*", "*"))


def test_terminal_enriched_structure():
    h = terminal_hla(induced_monad_on_mat(shared_monad("free_monoid", FINSET)))
    report = check_hla(h, 2)
    assert report.passed, report.to_text()


def test_free_multicategory_on_a_binary_generator():
    F = free_multicategory(["o"], {"m": (("o", "o"), "o")})
    report = check_hla(F, 3)
    assert report.passed, report.to_text()
    ops = F.a.apex.parts["el"]
    assert ops.contains(("m", (("|", "o"), ("m", (("|", "o"), ("|", "o"))))))
    assert not ops.contains(("m", (("|", "o"),)))
    # two bracketings of three inputs
    assert len(F.a.l.at("el").fiber(("o", "o", "o")).enumerate(3)) == 2


def test_free_multicategory_needs_arity_two():
    with pytest.raises(ParseError):
        free_multicategory(["o"], {"u": (("o",), "o")})


def test_change_of_base_along_the_identity(multicategory_doc):
    h = _multicategory(multicategory_doc)
    out = change_of_base(identity_morphism(h.monad), h)
    assert check_hla(out, 3).passed
    assert len(out.a.apex.parts["el"].elements) == len(h.a.apex.parts["el"].elements)


def test_change_of_base_along_the_unit_forgets_arities(multicategory_doc):
    h = _multicategory(multicategory_doc)
    mm = unit_morphism(h.monad)
    out = change_of_base(mm, h, companion_data(mm, 3))
    assert out.monad.name == "Id"
    assert check_hla(out, 3).passed


def test_hom_enumeration_finds_the_identity_and_the_swap(multicategory_doc):
    h = _multicategory(multicategory_doc)
    found = enumerate_hla_morphisms(h, h, depth=3)
    assert all(check_hla_morphism(m, 3).passed for m in found)
    ident = identity_hla_morphism(h)
    assert any(morphism_diff(m, ident, 3) is None for m in found)
    swaps = [m for m in found if m.cell.body("el", "f") == "g"]
    assert swaps
