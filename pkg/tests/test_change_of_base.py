from hypothesis import HealthCheck, given, settings

from app.commands import monad_morphism
from app.core.backends import finite_map
from app.core.doublecat import Cell
from app.core.hla import (
    HLAMorphism,
    change_of_base,
    change_of_base_morphism,
    check_hla,
    check_hla_morphism,
    cob_data,
    companion_data,
    compose_hla_morphisms,
    morphism_diff,
)
from app.core.monads import identity_morphism, unit_morphism
from app.models.structures import load_structure

from .strategies import labelled_multicategories, multicategory_document, operadic_document

DEPTH = 2


def scaling(h, k: int, c: int) -> HLAMorphism:
    """Multiply every label by ``c`` modulo ``k``; objects stay put."""
    f = h.dc.vid(h.x)
    table = {}
    for op in h.a.apex.parts["el"].elements:
        profile, label = op.split(".")
        table[op] = f"{profile}.{(int(label) * c) % k}"
    body = finite_map(h.a.apex, h.a.apex, {"el": table}, f"×{c}")
    return HLAMorphism(f"×{c}", h, h, f, Cell(h.a, h.a, h.monad.vert(f), f, body, f"×{c}"))


def _transported(mm, h, data):
    out = change_of_base(mm, h, data)
    report = check_hla(out, DEPTH)
    assert report.passed, report.to_text()
    return out


def _functorial(mm, h, out, data, k):
    maps = [scaling(h, k, c) for c in range(k)]
    for m in maps:
        assert check_hla_morphism(m, DEPTH).passed
        image = change_of_base_morphism(mm, m, out, out, data)
        report = check_hla_morphism(image, DEPTH)
        assert report.passed, report.to_text()
    for m1, m2 in list(zip(maps, maps[1:] + maps[:1]))[:2]:
        whole = change_of_base_morphism(mm, compose_hla_morphisms(m2, m1), out, out, data)
        parts = compose_hla_morphisms(
            change_of_base_morphism(mm, m2, out, out, data),
            change_of_base_morphism(mm, m1, out, out, data),
        )
        assert morphism_diff(whole, parts, DEPTH) is None


@settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(labelled_multicategories())
def test_change_of_base_along_the_identity_and_the_unit(table):
    objects, profiles, k = table
    h = load_structure(multicategory_document(objects, profiles, k)).value
    assert check_hla(h, DEPTH).passed

    ident = identity_morphism(h.monad)
    data = cob_data(ident, depth=DEPTH)
    out = _transported(ident, h, data)
    assert len(out.a.apex.parts["el"].elements) == len(profiles) * k
    _functorial(ident, h, out, data, k)

    unit = unit_morphism(h.monad)
    lax = companion_data(unit, DEPTH)
    forgotten = _transported(unit, h, lax)
    assert forgotten.monad.name == "Id"
    _functorial(unit, h, forgotten, lax, k)


@settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(labelled_multicategories())
def test_operad_surjections_transport_structures(table):
    objects, profiles, k = table
    h = load_structure(operadic_document(objects, profiles, k)).value
    tau = {"kind": "operad_map", "name": "τ", "target": {"operad": "terminal"}, "labels": [[m, "*"] for m in range(k)]}
    mm = monad_morphism(tau, h)
    data = cob_data(mm, depth=DEPTH)
    out = _transported(mm, h, data)
    assert out.monad.base.operad.spec == {"operad": "terminal"}
    _functorial(mm, h, out, data, k)
