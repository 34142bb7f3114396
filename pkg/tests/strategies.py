import os
from itertools import product

from hypothesis import strategies as st

from app.core.backends import FINGRPH, finite_object, finset
from app.core.carriers import FiniteObject, tabulated

FULL_SCALE = os.getenv("HYPOTHESIS_PROFILE") == "ci"


def scaled(dev: int, ci: int) -> int:
    """Example counts and sizes: small locally, the acceptance scale under the ci profile."""
    return ci if FULL_SCALE else dev


atoms = st.one_of(st.integers(min_value=-3, max_value=9), st.text(alphabet="abcxyz", min_size=1, max_size=3))

elements = st.recursive(atoms, lambda inner: st.lists(inner, max_size=3).map(tuple), max_leaves=6)


@st.composite
def finite_sets(draw, max_size=4, name="X"):
    n = draw(st.integers(min_value=0, max_value=max_size))
    return FiniteObject(name, tuple(range(n)))


@st.composite
def functions(draw, max_size=4):
    """A total function between two small sets; the codomain is nonempty."""
    X = draw(finite_sets(max_size, "X"))
    Y = draw(finite_sets(max_size, "Y").filter(lambda Y: len(Y) > 0))
    images = draw(st.lists(st.sampled_from(Y.elements), min_size=len(X), max_size=len(X)))
    return tabulated(X, Y, dict(zip(X.elements, images)), "f")


@st.composite
def set_maps(draw, max_size=4):
    f = draw(functions(max_size))
    X = finset(f.dom.elements, "X")
    Y = finset(f.cod.elements, "Y")
    return X, Y, f


@st.composite
def graphs(draw, max_vertices=3, max_edges=4, name="G"):
    n = draw(st.integers(min_value=1, max_value=max_vertices))
    vertices = list(range(n))
    m = draw(st.integers(min_value=0, max_value=max_edges))
    ends = draw(st.lists(st.tuples(st.sampled_from(vertices), st.sampled_from(vertices)), min_size=m, max_size=m))
    edges = {f"e{i}": st_pair for i, st_pair in enumerate(ends)}
    return finite_object(
        FINGRPH,
        {"V": vertices, "E": list(edges)},
        {"src": {e: p[0] for e, p in edges.items()}, "tgt": {e: p[1] for e, p in edges.items()}},
        name,
    )


seeds = st.integers(min_value=0, max_value=2**16)


@st.composite
def labelled_multicategories(draw, max_objects=3, max_arity=3, max_order=3):
    """``(objects, profiles, k)``: every profile carries the operations ``Z/k``, composing by addition.

    Inputs of the non-unary profiles are source objects, outputs the remaining objects, and
    each object has its unary profile, so substitution never leaves the listed profiles.
    """
    n = draw(st.integers(min_value=1, max_value=max_objects))
    objects = [f"o{i}" for i in range(n)]
    sources = objects[: draw(st.integers(min_value=1, max_value=n))]
    targets = [o for o in objects if o not in sources]
    profiles = [((o,), o) for o in objects]
    for t in targets:
        inputs = draw(
            st.lists(st.lists(st.sampled_from(sources), min_size=1, max_size=max_arity).map(tuple), max_size=2, unique=True)
        )
        profiles.extend((ins, t) for ins in inputs)
    k = draw(st.integers(min_value=1, max_value=max_order))
    return objects, profiles, k


def _op(index: int, label: int) -> str:
    return f"p{index}.{label}"


def _composites(profiles, k):
    """``(op, label, children, composite)`` for every composable shape."""
    index = {p: i for i, p in enumerate(profiles)}
    into: dict = {}
    for i, (_, out) in enumerate(profiles):
        into.setdefault(out, []).append(i)
    for i, (ins, out) in enumerate(profiles):
        for m in range(k):
            for choice in product(*(into[o] for o in ins)):
                for labels in product(range(k), repeat=len(ins)):
                    result = (tuple(x for c in choice for x in profiles[c][0]), out)
                    children = [_op(c, l) for c, l in zip(choice, labels)]
                    yield _op(i, m), m, children, _op(index[result], (m + sum(labels)) % k)


def multicategory_document(objects, profiles, k, name="R") -> dict:
    return {
        "kind": "multicategory",
        "name": name,
        "objects": objects,
        "operations": [[_op(i, m), list(ins), out] for i, (ins, out) in enumerate(profiles) for m in range(k)],
        "identities": [[o, _op(i, 0)] for i, o in enumerate(objects)],
        "composition": [[op, children, composite] for op, _, children, composite in _composites(profiles, k)],
    }


def operadic_document(objects, profiles, k, name="R") -> dict:
    """The same structure over the operad ``Z/k``, labels read off the operation names."""
    ops = [(i, m) for i in range(len(profiles)) for m in range(k)]
    return {
        "kind": "internal",
        "name": name,
        "backend": "finset",
        "monad": {"monad": "operadic", "operad": "cyclic", "order": k},
        "objects": {"elements": {"el": objects}},
        "apex": {"elements": {"el": [_op(i, m) for i, m in ops]}},
        "inputs": {"el": [[_op(i, m), [m, list(profiles[i][0])]] for i, m in ops]},
        "output": {"el": [[_op(i, m), profiles[i][1]] for i, m in ops]},
        "identity": {"el": [[o, _op(i, 0)] for i, o in enumerate(objects)]},
        "composition": {"el": [[op, [m, children], composite] for op, m, children, composite in _composites(profiles, k)]},
    }
