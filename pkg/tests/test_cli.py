import json

import pytest
from click.testing import CliRunner

from app.cli import cli
from app.commands import RunResult, run
from app.core.errors import NotStrongConjoint
from app.models.structures import load_path

FINSET2_TERMINAL = {"kind": "terminal", "backend": "finset2", "monad": {"monad": "free_monoid"}, "side": "enriched"}


@pytest.fixture
def runner():
    return CliRunner()


def test_check_passes(runner, write_doc, multicategory_doc):
    result = runner.invoke(cli, ["check", write_doc(multicategory_doc), "--depth", "3"])
    assert result.exit_code == 0, result.output
    assert "verified" in result.output


def test_check_without_inputs_passes(runner):
    assert runner.invoke(cli, ["check"]).exit_code == 0


def test_check_reports_json(runner, write_doc):
    path = write_doc({"kind": "equipment", "equipment": "mat", "backend": "finset"})
    result = runner.invoke(cli, ["check", path, "--samples", "4", "--report", "json"])
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.output)
    assert report["verdict"].startswith("verified")
    assert all(r["status"] == "pass" for r in report["results"])


def test_law_violations_exit_with_two(runner, write_doc, multicategory_doc):
    rows = multicategory_doc["composition"]
    rows[rows.index(["s", ["f"], "g"])] = ["s", ["f"], "f"]
    result = runner.invoke(cli, ["check", write_doc(multicategory_doc)])
    assert result.exit_code == 2


def test_parse_errors_exit_with_one(runner, tmp_path, write_doc):
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    result = runner.invoke(cli, ["check", str(broken)])
    assert result.exit_code == 1
    assert "invalid JSON" in result.stderr
    assert runner.invoke(cli, ["check", write_doc({"kind": "lattice"})]).exit_code == 1


def test_bad_options_exit_with_one(runner, write_doc, multicategory_doc):
    result = runner.invoke(cli, ["check", write_doc(multicategory_doc), "--depth", "0"])
    assert result.exit_code == 1
    assert "depth" in result.stderr


def test_embed_needs_a_strong_conjoint(runner, write_doc):
    result = runner.invoke(cli, ["embed", write_doc(FINSET2_TERMINAL), "--depth", "2"])
    assert result.exit_code == 3
    assert "witness" in result.stderr


def test_enrich_writes_the_output(runner, write_doc, z2_doc, tmp_path):
    out = tmp_path / "z2-enriched.json"
    result = runner.invoke(cli, ["enrich", write_doc(z2_doc), "--out", str(out)])
    assert result.exit_code == 0, result.stderr
    assert "two-sided: True" in result.output
    written = json.loads(out.read_text(encoding="utf-8"))
    assert written["kind"] == "enriched"
    assert load_path(out).is_algebra


def test_embed_round_trips(runner, write_doc, enriched_doc, tmp_path):
    out = tmp_path / "z2-internal.json"
    result = runner.invoke(cli, ["embed", write_doc(enriched_doc), "--out", str(out)])
    assert result.exit_code == 0, result.stderr
    assert "round trip invertible: True" in result.output
    assert json.loads(out.read_text(encoding="utf-8"))["kind"] == "internal"


def test_change_of_base_along_the_unit(runner, write_doc, multicategory_doc):
    result = runner.invoke(cli, ["cob", "--morphism", "unit", write_doc(multicategory_doc)])
    assert result.exit_code == 0, result.stderr


def test_mate_suite(runner, write_doc):
    result = runner.invoke(cli, ["mate", write_doc({"kind": "equipment"}), "--samples", "3"])
    assert result.exit_code == 0, result.stderr


def test_discreteness_verdicts(runner):
    ok = runner.invoke(cli, ["discreteness", "--monad", "free_category", "--depth", "3"])
    assert ok.exit_code == 0
    assert "verified-to-depth 3" in ok.output
    bad = runner.invoke(cli, ["discreteness", "--monad", "free_monoid", "--backend", "finset2", "--depth", "2"])
    assert bad.exit_code == 0
    assert "counterexample" in bad.output
    assert "X=2" in bad.output


def test_discreteness_reports_the_set_size_cap(runner):
    capped = runner.invoke(cli, ["discreteness", "--monad", "free_monoid", "--depth", "4"])
    assert capped.exit_code == 0
    assert "sets of size ≤ 3, capped below depth 4" in capped.output
    full = runner.invoke(cli, ["discreteness", "--monad", "free_monoid", "--depth", "4", "--set-bound", "4"])
    assert full.exit_code == 0
    assert "sets of size ≤ 4," in full.output
    assert "capped" not in full.output


def test_discreteness_needs_a_monad(runner):
    assert runner.invoke(cli, ["discreteness"]).exit_code != 0


def test_run_dispatches_documents(config, multicategory_doc, enriched_doc):
    result = run(config("check"), documents=[multicategory_doc])
    assert isinstance(result, RunResult)
    assert result.exit_code == 0
    assert result.report.data["inputs"] == 1
    with pytest.raises(NotStrongConjoint):
        run(config("embed", depth=2), document=FINSET2_TERMINAL)
    enriched = run(config("enrich"), document=enriched_doc["internal"])
    assert enriched.report.data["two_sided"] is True


def test_operad_maps_change_the_base(config):
    doc = {
        "kind": "internal",
        "name": "c2",
        "backend": "finset",
        "monad": {"monad": "operadic", "operad": "cyclic", "order": 2},
        "objects": {"elements": {"el": ["o"]}},
        "apex": {"elements": {"el": [0, 1]}},
        "inputs": {"el": [[m, [m, ["o"]]] for m in (0, 1)]},
        "output": {"el": [[0, "o"], [1, "o"]]},
        "identity": {"el": [["o", 0]]},
        "composition": {"el": [[m, [m, [k]], (m + k) % 2] for m in (0, 1) for k in (0, 1)]},
    }
    tau = {"kind": "operad_map", "name": "τ", "target": {"operad": "terminal"}, "labels": [[0, "*"], [1, "*"]]}
    result = run(config("cob"), document=doc, morphism=tau)
    assert result.passed, result.report.to_text()
    assert result.output["monad"]["operad"] == "terminal"
