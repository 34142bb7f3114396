import pytest
from fastapi.testclient import TestClient

from app.main import app


@pytest.fixture
def client():
    with TestClient(app) as c:
        yield c


def test_health(client):
    assert client.get("/health").json() == {"status": "ok"}
    assert client.head("/health").status_code == 200


def test_checks_pass_and_are_recorded(client, multicategory_doc):
    resp = client.post("/checks?depth=3", json=multicategory_doc)
    assert resp.status_code == 200, resp.text
    body = resp.json()
    assert body["passed"] is True
    assert body["exit_code"] == 0
    stored = client.get(f"/runs/{body['run_id']}")
    assert stored.status_code == 200
    assert stored.json()["command"] == "check"


def test_checks_accept_a_list(client, multicategory_doc):
    resp = client.post("/checks", json=[multicategory_doc, {"kind": "equipment", "backend": "fingrph"}], params={"samples": 3})
    assert resp.status_code == 200, resp.text
    assert resp.json()["report"]["data"]["inputs"] == 2


def test_violations_are_failed_runs(client, multicategory_doc):
    rows = multicategory_doc["composition"]
    rows[rows.index(["s", ["f"], "g"])] = ["s", ["f"], "f"]
    body = client.post("/checks", json=multicategory_doc).json()
    assert body["passed"] is False
    assert body["exit_code"] == 2


def test_parse_errors_are_bad_requests(client):
    resp = client.post("/checks", json={"kind": "lattice"})
    assert resp.status_code == 400
    assert resp.json()["detail"]["error"] == "ParseError"


def test_query_bounds(client, multicategory_doc):
    assert client.post("/checks?depth=0", json=multicategory_doc).status_code == 422


def test_discreteness(client):
    resp = client.post("/constructions/discreteness?depth=3", json={"monad": "free_monoid", "backend": "fingrph"})
    assert resp.status_code == 200, resp.text
    verdict = resp.json()["report"]["data"]["verdict"]
    assert verdict["status"] == "verified-to-depth"
    assert client.post("/constructions/discreteness", json={}).status_code == 400


def test_embed_without_a_strong_conjoint_conflicts(client):
    doc = {"kind": "terminal", "backend": "finset2", "side": "enriched"}
    resp = client.post("/constructions/embed?depth=2", json={"document": doc})
    assert resp.status_code == 409
    assert resp.json()["detail"]["error"] == "NotStrongConjoint"


def test_enrich_returns_the_output(client, z2_doc):
    resp = client.post("/constructions/enrich?depth=3", json={"document": z2_doc})
    assert resp.status_code == 200, resp.text
    body = resp.json()
    assert body["output"]["kind"] == "enriched"
    assert body["summary"] == "split section two-sided: True"


def test_unknown_commands_are_rejected(client):
    assert client.post("/constructions/sketch", json={}).status_code == 422


def test_runs_listing(client):
    client.post("/constructions/discreteness?depth=2", json={"monad": "identity"})
    runs = client.get("/runs", params={"command": "discreteness"}).json()
    assert runs
    assert all(r["command"] == "discreteness" for r in runs)


def test_unknown_run(client):
    assert client.get("/runs/00000000-0000-0000-0000-000000000000").status_code == 404
