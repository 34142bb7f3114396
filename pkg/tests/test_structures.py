from pathlib import Path

import pytest

from app.core.doublecat import DoubleCategory, LaxFunctor
from app.core.errors import EngineError, ParseError
from app.core.hla import HLA, check_hla
from app.core.matrices import MatDC
from app.core.monads import LaxMonad
from app.core.spans import SpanDC
from app.models.structures import DOCUMENTS, dump_internal, dump_structure, load_path, load_structure, parse_document


def test_unknown_kind():
    with pytest.raises(ParseError) as exc:
        parse_document({"kind": "lattice"})
    assert "lattice" in exc.value.message
    assert "multicategory" in exc.value.witness["known"]


def test_documents_are_objects():
    with pytest.raises(ParseError):
        parse_document(["multicategory"])


def test_validation_errors_name_the_location():
    with pytest.raises(ParseError) as exc:
        parse_document({"kind": "equipment", "equipment": "profunctor"})
    assert exc.value.witness["location"] == "equipment"


def test_bad_json_reports_line_and_column(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "kind": "terminal",\n  oops\n}', encoding="utf-8")
    with pytest.raises(ParseError) as exc:
        load_path(path)
    assert exc.value.witness["line"] == 3
    assert exc.value.witness["column"] == 3


def test_missing_file(tmp_path):
    with pytest.raises(ParseError) as exc:
        load_path(tmp_path / "absent.json")
    assert exc.value.exit_code == 1


def test_unknown_backend_sort(z2_doc):
    z2_doc["objects"]["elements"]["F"] = ["x"]
    with pytest.raises(ParseError) as exc:
        load_structure(z2_doc)
    assert exc.value.witness["sorts"] == ["F"]


def test_rows_need_the_right_width(multicategory_doc):
    multicategory_doc["identities"].append(["a"])
    with pytest.raises(ParseError):
        load_structure(multicategory_doc)


@pytest.mark.parametrize(
    "doc, kind",
    [
        ({"kind": "equipment", "equipment": "span", "backend": "fingrph"}, SpanDC),
        ({"kind": "equipment", "equipment": "mat", "backend": "finset2"}, MatDC),
        ({"kind": "monad", "monad": {"monad": "free_monoid"}}, LaxMonad),
        ({"kind": "monad", "monad": {"monad": "free_category"}, "backend": "fingrph", "side": "enriched"}, LaxMonad),
        ({"kind": "functor", "functor": "points", "backend": "fingrph"}, LaxFunctor),
        ({"kind": "terminal", "backend": "fingrph"}, HLA),
    ],
)
def test_each_kind_loads(doc, kind):
    structure = load_structure(doc)
    assert isinstance(structure.value, kind)
    assert structure.document is doc
    assert structure.is_algebra == (kind is HLA)
    if kind in (SpanDC, MatDC):
        assert isinstance(structure.value, DoubleCategory)


def test_free_multicategory_document():
    doc = {"kind": "free_multicategory", "objects": ["o"], "generators": [["m", ["o", "o"], "o"]]}
    structure = load_structure(doc)
    assert structure.name == "F"
    assert check_hla(structure.value, 3).passed


def test_internal_document_loads(z2_doc):
    h = load_structure(z2_doc).value
    assert isinstance(h.dc, SpanDC)
    assert h.a.apex.parts["E"].elements == (0, 1)
    assert h.mult.body("E", (1, (1,))) == 0


def test_missing_composite_in_an_internal_document(z2_doc):
    z2_doc["composition"]["E"].pop()
    with pytest.raises(EngineError) as exc:
        load_structure(z2_doc)
    assert exc.value.exit_code == 2


def test_dumped_internal_structures_reload(z2_doc):
    h = load_structure(z2_doc).value
    dumped = dump_internal(h, depth=3)
    assert dumped["monad"] == {"monad": "free_monoid"}
    again = load_structure(dumped).value
    assert check_hla(again, 3).passed
    assert again.mult.body("V", (1, (1,))) == 0


def test_enriched_structures_are_written_through_their_document(enriched_doc):
    e = load_structure(enriched_doc).value
    with pytest.raises(ParseError):
        dump_structure(e)
    out = dump_structure(e, enriched_doc["internal"])
    assert out["kind"] == "enriched"
    assert out["internal"]["name"] == "z2"


SAMPLES = sorted(p for p in (Path(__file__).parent.parent / "samples").glob("*.json") if p.name != "tau-terminal.json")


@pytest.mark.parametrize("path", SAMPLES, ids=lambda p: p.stem)
def test_samples_load(path):
    assert load_path(path).document["kind"] in DOCUMENTS
