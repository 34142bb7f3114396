import copy
import json
import os
import tempfile

import pytest
from hypothesis import settings

# HYPOTHESIS_PROFILE=ci runs the sampled suites at full scale
settings.register_profile("dev", deadline=None)
settings.register_profile("ci", deadline=None, print_blob=True)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))

# the app reads its settings at import time
_DB_DIR = tempfile.mkdtemp(prefix="engine-tests-")
os.environ.setdefault("DATABASE_URL", f"sqlite:///{os.path.join(_DB_DIR, 'runs.db')}")
os.environ.setdefault("ENGINE_DEPTH", "3")
os.environ.setdefault("ENGINE_SAMPLES", "25")

from app.config import RunConfig  # noqa: E402
from app.core.backends import FINGRPH, FINSET, FINSET2, graph  # noqa: E402

# a, b with a Z/2 action s on b and two binary operations f, g swapped by s
TWO_OBJECT_MULTICATEGORY = {
    "kind": "multicategory",
    "name": "M",
    "objects": ["a", "b"],
    "operations": [
        ["1a", ["a"], "a"],
        ["1b", ["b"], "b"],
        ["s", ["b"], "b"],
        ["f", ["a", "a"], "b"],
        ["g", ["a", "a"], "b"],
    ],
    "identities": [["a", "1a"], ["b", "1b"]],
    "composition": [
        ["1a", ["1a"], "1a"],
        ["1b", ["1b"], "1b"],
        ["1b", ["s"], "s"],
        ["1b", ["f"], "f"],
        ["1b", ["g"], "g"],
        ["s", ["1b"], "s"],
        ["s", ["s"], "1b"],
        ["s", ["f"], "g"],
        ["s", ["g"], "f"],
        ["f", ["1a", "1a"], "f"],
        ["g", ["1a", "1a"], "g"],
    ],
}

# one loop o, with operations 0 and 1 on it composing in Z/2
Z2_INTERNAL = {
    "kind": "internal",
    "name": "z2",
    "backend": "fingrph",
    "monad": {"monad": "free_monoid"},
    "objects": {"elements": {"V": ["o"], "E": ["o"]}, "ops": {"src": [["o", "o"]], "tgt": [["o", "o"]]}},
    "apex": {"elements": {"V": [0, 1], "E": [0, 1]}, "ops": {"src": [[0, 0], [1, 1]], "tgt": [[0, 0], [1, 1]]}},
    "inputs": {"V": [[0, ["o"]], [1, ["o"]]], "E": [[0, ["o"]], [1, ["o"]]]},
    "output": {"V": [[0, "o"], [1, "o"]], "E": [[0, "o"], [1, "o"]]},
    "identity": {"V": [["o", 0]], "E": [["o", 0]]},
    "composition": {
        s: [[m, [k], (m + k) % 2] for m in (0, 1) for k in (0, 1)]
        for s in ("V", "E")
    },
}


@pytest.fixture
def multicategory_doc():
    return copy.deepcopy(TWO_OBJECT_MULTICATEGORY)


@pytest.fixture
def z2_doc():
    return copy.deepcopy(Z2_INTERNAL)


@pytest.fixture
def enriched_doc(z2_doc):
    return {"kind": "enriched", "name": "z2̄", "internal": z2_doc}


@pytest.fixture
def write_doc(tmp_path):
    """Write a document to a file and return its path."""

    def write(doc, name="doc.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture
def config():
    def make(command="check", **overrides):
        values = {"depth": 3, "samples": 25, "seed": 0}
        values.update(overrides)
        return RunConfig(command=command, **values)

    return make


@pytest.fixture
def loop():
    return graph(["v"], {"e": ("v", "v")}, "loop")


@pytest.fixture
def backends():
    return {"finset": FINSET, "finset2": FINSET2, "fingrph": FINGRPH}
