import pytest

from app.core.backends import FINGRPH, FINSET, FINSET2
from app.core.carriers import decode
from app.core.embed import (
    COUNTEREXAMPLE,
    SET_BOUND,
    VERIFIED,
    counit_cartesian_check,
    counit_mono,
    criteria_agreement,
    discrete_at,
    embed,
    enrich,
    fibrewise_discrete,
    fibrewise_discrete_via,
    ff_probe,
    round_trip,
    sample_functions,
    shared_adjunction,
    split_epi_section,
    strong_conjoint_check,
    tau_fibre,
)
from app.core.errors import CounitNotMono, NotDiscreteObjects, NotStrongConjoint
from app.core.hla import (
    check_adjunction_triangles,
    check_hla,
    cob_data,
    check_hla_morphism,
    check_transposes,
    hom_transpose_flat,
    hom_transpose_sharp,
    identity_hla_morphism,
)
from app.core.adjunction import conjunction
from app.core.matrices import mat_samples
from app.core.monads import OperadicMonad, cyclic_operad, operad_transformation, shared_monad, terminal_operad
from app.core.sampling import rng_for
from app.core.spans import SpanDC
from app.models.structures import load_structure

# two vertices, one loop: vertex p has no loop
NOT_DISCRETE = {
    "kind": "internal",
    "name": "loose",
    "backend": "fingrph",
    "monad": {"monad": "free_monoid"},
    "objects": {"elements": {"V": ["o", "p"], "E": ["o"]}, "ops": {"src": [["o", "o"]], "tgt": [["o", "o"]]}},
    "apex": {"elements": {"V": ["io", "ip"], "E": ["l"]}, "ops": {"src": [["l", "io"]], "tgt": [["l", "io"]]}},
    "inputs": {"V": [["io", ["o"]], ["ip", ["p"]]], "E": [["l", ["o"]]]},
    "output": {"V": [["io", "o"], ["ip", "p"]], "E": [["l", "o"]]},
    "identity": {"V": [["o", "io"], ["p", "ip"]], "E": [["o", "l"]]},
    "composition": {"V": [["io", ["io"], "io"], ["ip", ["ip"], "ip"]], "E": [["l", ["l"], "l"]]},
}


@pytest.mark.parametrize(
    "tag, backend",
    [("identity", FINGRPH), ("free_monoid", FINGRPH), ("free_category", FINGRPH), ("free_monoid", FINSET)],
)
def test_fibrewise_discrete_monads(tag, backend):
    verdict = fibrewise_discrete(shared_monad(tag, backend), depth=3)
    assert verdict.status == VERIFIED
    assert verdict.verified
    assert verdict.checked > 0
    assert verdict.exact == (tag == "identity")


@pytest.mark.parametrize("tag", ["free_monoid", "free_category"])
def test_graph_monads_stay_discrete_at_depth_five(tag):
    verdict = fibrewise_discrete(shared_monad(tag, FINGRPH), depth=5)
    assert verdict.status == VERIFIED
    assert verdict.depth == 5
    assert verdict.set_bound == SET_BOUND
    assert verdict.capped


def test_free_monoid_on_pairs_of_sets_is_not_fibrewise_discrete():
    T = shared_monad("free_monoid", FINSET2)
    verdict = fibrewise_discrete(T, depth=5)
    assert verdict.status == COUNTEREXAMPLE
    witness = verdict.witness
    assert witness["X"] == 2
    assert decode(witness["p"]) == (("*",), ("*", "*"))
    assert witness["sizes"] == {"0": 2, "1": 4}
    assert not discrete_at(T, witness["X"], decode(witness["p"]), 5).passed
    assert "X=2" in verdict.to_text()


def test_the_witness_is_the_same_at_every_depth():
    T = shared_monad("free_monoid", FINSET2)
    shallow, deep = fibrewise_discrete(T, depth=3), fibrewise_discrete(T, depth=5)
    assert (shallow.witness["X"], shallow.witness["p"]) == (deep.witness["X"], deep.witness["p"])


def test_set_bound_defaults_below_the_depth_and_says_so():
    T = shared_monad("free_monoid", FINSET)
    capped = fibrewise_discrete(T, depth=4)
    assert capped.set_bound == SET_BOUND
    assert capped.capped
    assert capped.as_dict()["capped"] is True
    full = fibrewise_discrete(T, depth=4, set_bound=4)
    assert full.set_bound == 4
    assert not full.capped
    assert full.checked > capped.checked
    assert not fibrewise_discrete(T, depth=2).capped


def test_pairs_of_sets_fail_at_two_elements_with_word_lengths_one_and_two():
    T = shared_monad("free_monoid", FINSET2)
    p = (("*",), ("*", "*"))
    report = discrete_at(T, 2, p, 3)
    assert not report.passed
    assert report.data["sizes"] == {"0": 2, "1": 4}
    assert tau_fibre(T, 0, p).size(3) == {"0": 0, "1": 0}


def test_verdicts_transport_along_cartesian_transformations():
    source = OperadicMonad(FINGRPH, cyclic_operad(2))
    target = OperadicMonad(FINGRPH, terminal_operad())
    tau = operad_transformation(source, target, lambda o: "*")
    verdict = fibrewise_discrete_via(tau, fibrewise_discrete(target, depth=2), depth=2)
    assert verdict.verified
    assert verdict.via == tau.name


def test_counit_mono():
    assert counit_mono(shared_monad("free_monoid", FINGRPH), 3).passed
    report = counit_mono(shared_monad("free_monoid", FINSET2), 3)
    assert not report.passed
    assert report.failures[0].witness["sort"] == "0"


def test_free_category_counit_is_not_mono_on_vertices():
    # every loop^n sits over the one vertex and the one loop
    T = shared_monad("free_category", FINGRPH)
    report = counit_mono(T, 3)
    assert not report.passed
    assert report.failures[0].witness["sort"] == "V"
    with pytest.raises(CounitNotMono) as exc:
        counit_mono(T, 3, strict=True)
    assert exc.value.witness["sort"] == "V"


def test_enrich_then_embed(z2_doc):
    i = load_structure(z2_doc).value
    e = enrich(i)
    assert not isinstance(e.dc, SpanDC)
    assert check_hla(e, 3).passed
    out = embed(e, fibrewise_discrete(i.monad.base, depth=3))
    assert isinstance(out.dc, SpanDC)
    assert check_hla(out, 3).passed
    assert FINGRPH.is_discrete(out.x, 3).passed


def test_round_trip_is_invertible(enriched_doc):
    e = load_structure(enriched_doc).value
    unit, report = round_trip(e, 3)
    assert report.data["invertible"], report.to_text()
    assert report.data["inverse"] is not None
    assert unit.source is e


def test_embedding_is_fully_faithful_on_the_z2_structure(enriched_doc):
    e = load_structure(enriched_doc).value
    report = ff_probe(e, e, depth=3)
    assert report.passed, report.to_text()
    # the identity and the map sending both operations to 0
    assert report.data["enriched"] == report.data["internal"] == 2


def test_embed_refuses_a_counterexample():
    T = shared_monad("free_monoid", FINSET2)
    e = load_structure({"kind": "terminal", "backend": "finset2", "side": "enriched"}).value
    with pytest.raises(NotStrongConjoint) as exc:
        embed(e, fibrewise_discrete(T, depth=2))
    assert "X" in exc.value.witness


def test_split_section_on_discrete_objects(z2_doc):
    i = load_structure(z2_doc).value
    section = split_epi_section(i, 3)
    assert section.two_sided
    assert section.report.passed, section.report.to_text()
    assert section.enriched is not None
    assert section.report.data["counit_invertible"] is True


def test_split_section_needs_discrete_objects():
    i = load_structure(NOT_DISCRETE).value
    with pytest.raises(NotDiscreteObjects) as exc:
        split_epi_section(i, 3)
    assert exc.value.witness["element"] == '"p"'


def test_criteria_agree_on_sets():
    report = criteria_agreement(shared_monad("free_monoid", FINSET), depth=2, seed=0, count=1)
    assert report.passed, report.to_text()
    assert report.data["fibrewise_discrete"] is True


@pytest.mark.parametrize(
    "tag, backend",
    [
        ("identity", FINSET),
        ("free_monoid", FINSET),
        ("identity", FINGRPH),
        ("free_monoid", FINGRPH),
        ("free_category", FINGRPH),
    ],
)
def test_criteria_agree_on_connected_backends(tag, backend):
    report = criteria_agreement(shared_monad(tag, backend), depth=2, seed=1, count=2)
    assert report.passed, report.to_text()
    assert report.data["connected"] is True
    assert report.data["fibrewise_discrete"] is report.data["counit_cartesian"] is report.data["strong_conjoint"] is True


def test_criteria_on_pairs_of_sets_leave_the_counit_out():
    report = criteria_agreement(shared_monad("free_monoid", FINSET2), depth=2, seed=0, count=4)
    assert report.passed, report.to_text()
    assert report.data["connected"] is False
    assert report.data["fibrewise_discrete"] is False
    assert report.data["strong_conjoint"] is False
    assert report.data["strong_witness"]


def test_free_category_has_strong_conjoints():
    T = shared_monad("free_category", FINGRPH)
    samples = mat_samples(conjunction(FINGRPH).mat, rng_for(2, "mat"), count=4)
    report = strong_conjoint_check(T, samples, depth=2)
    assert report.passed, report.to_text()
    assert report.data["strong"] is True
    data = cob_data(shared_adjunction(T).oplax, samples, 2)
    assert data.report.passed, data.report.to_text()


def test_a_weak_conjoint_names_the_matrix_and_the_entry():
    T = shared_monad("free_monoid", FINSET2)
    samples = mat_samples(conjunction(FINSET2).mat, rng_for(0, "mat"), count=8)
    report = strong_conjoint_check(T, samples, depth=2)
    assert report.data["strong"] is False
    witness = report.failures[0].witness
    assert witness["frame"]
    assert set(witness) - {"diagram", "frame"}
    if witness["diagram"] == "n invertible":
        assert witness["hcell"] == witness["frame"]
    with pytest.raises(NotStrongConjoint) as exc:
        cob_data(shared_adjunction(T).oplax, samples, 2)
    assert exc.value.witness == witness


def test_full_faithfulness_on_the_terminal_structure():
    e = load_structure({"kind": "terminal", "backend": "finset", "side": "enriched"}).value
    report = ff_probe(e, e, depth=2)
    assert report.passed, report.to_text()
    assert report.data["enriched"] == report.data["internal"] == 1


def test_hom_transposes_are_inverse(enriched_doc):
    e = load_structure(enriched_doc).value
    adj = shared_adjunction(e.monad.base)
    lowered = adj.lower(e, check=False)
    unit = hom_transpose_flat(adj, identity_hla_morphism(lowered), e)
    assert check_hla_morphism(unit, 3).passed
    report = check_transposes(adj, unit, lowered, 3)
    assert report.passed, report.to_text()
    assert hom_transpose_sharp(adj, unit, lowered).target is lowered


def test_induced_adjunction_triangles(enriched_doc, z2_doc):
    e = load_structure(enriched_doc).value
    i = load_structure(z2_doc).value
    report = check_adjunction_triangles(shared_adjunction(i.monad.base), [e], [i], 3)
    assert report.passed, report.to_text()


def test_counit_is_cartesian_for_the_free_monoid_on_sets():
    report = counit_cartesian_check(shared_monad("free_monoid", FINSET), sample_functions(0, 2, max_size=2), depth=2)
    assert report.passed, report.to_text()
    assert len(report.results) == 2
