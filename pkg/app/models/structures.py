"""Structure documents: the JSON files read by the CLI and posted to the HTTP surface."""
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Literal, Optional, Union

from pydantic import ValidationError
from sqlmodel import Field, SQLModel

from ..core.adjunction import conjunction
from ..core.backends import Backend, VObject, finite_map, finite_object, get_backend
from ..core.carriers import from_json, to_json
from ..core.embed import enrich
from ..core.errors import IncompleteTable, ParseError
from ..core.hla import HLA, free_multicategory, mk_multicategory, span_algebra, terminal_hla
from ..core.monads import CartesianMonad, induced_monad_on_mat, lift_to_span, monad_from_spec, shared_monad
from ..core.spans import SpanDC

logger = logging.getLogger(__name__)


# ─────────────────────────────
#   SCHEMAS
# ─────────────────────────────


class ObjectDoc(SQLModel):
    elements: dict[str, list[Any]]
    ops: dict[str, list[list[Any]]] = Field(default_factory=dict)


class MulticategoryDoc(SQLModel):
    kind: Literal["multicategory"]
    name: str = "M"
    objects: list[Any]
    # [operation, [inputs], output]
    operations: list[list[Any]]
    # [object, identity operation]
    identities: list[list[Any]]
    # [operation, [children], composite]
    composition: list[list[Any]] = Field(default_factory=list)


class FreeMulticategoryDoc(SQLModel):
    kind: Literal["free_multicategory"]
    name: str = "F"
    objects: list[Any]
    generators: list[list[Any]]


class InternalDoc(SQLModel):
    kind: Literal["internal"]
    name: str = "a"
    backend: str = "finset"
    monad: dict[str, Any] = Field(default_factory=lambda: {"monad": "free_monoid"})
    objects: ObjectDoc
    apex: ObjectDoc
    inputs: dict[str, list[list[Any]]]
    output: dict[str, list[list[Any]]]
    identity: dict[str, list[list[Any]]]
    # per sort: [operation, children, composite]
    composition: dict[str, list[list[Any]]]


class TerminalDoc(SQLModel):
    kind: Literal["terminal"]
    backend: str = "finset"
    monad: dict[str, Any] = Field(default_factory=lambda: {"monad": "free_monoid"})
    side: Literal["internal", "enriched"] = "internal"


class EnrichedDoc(SQLModel):
    """An enriched structure given by the internal structure it is read off from."""

    kind: Literal["enriched"]
    name: Optional[str] = None
    internal: dict[str, Any]


class EquipmentDoc(SQLModel):
    kind: Literal["equipment"]
    equipment: Literal["span", "mat"] = "span"
    backend: str = "finset"


class MonadDoc(SQLModel):
    kind: Literal["monad"]
    backend: str = "finset"
    monad: dict[str, Any]
    side: Literal["internal", "enriched"] = "internal"


class FunctorDoc(SQLModel):
    kind: Literal["functor"]
    functor: Literal["copower", "points"] = "copower"
    backend: str = "finset"


Document = Union[
    MulticategoryDoc, FreeMulticategoryDoc, InternalDoc, TerminalDoc, EnrichedDoc, EquipmentDoc, MonadDoc, FunctorDoc
]

DOCUMENTS: dict[str, type[SQLModel]] = {
    "multicategory": MulticategoryDoc,
    "free_multicategory": FreeMulticategoryDoc,
    "internal": InternalDoc,
    "terminal": TerminalDoc,
    "enriched": EnrichedDoc,
    "equipment": EquipmentDoc,
    "monad": MonadDoc,
    "functor": FunctorDoc,
}


@dataclass
class Structure:
    kind: str
    name: str
    value: Any
    document: dict

    @property
    def is_algebra(self) -> bool:
        return isinstance(self.value, HLA)


# ─────────────────────────────
#   PARSING
# ─────────────────────────────


def parse_document(data: Any, source: str = "<document>") -> Document:
    if not isinstance(data, dict):
        raise ParseError(f"{source}: a structure document is a JSON object", {"path": source})
    kind = data.get("kind")
    if kind not in DOCUMENTS:
        raise ParseError(f"{source}: unknown kind {kind!r}", {"path": source, "known": sorted(DOCUMENTS)})
    try:
        return DOCUMENTS[kind].model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(p) for p in first["loc"])
        raise ParseError(
            f"{source}: {first['msg']} at {location}",
            {"path": source, "location": location, "errors": len(exc.errors())},
        ) from None


def read_document(path: Union[str, Path]) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}", {"path": str(path), "reason": exc.strerror}) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: invalid JSON", {"path": str(path), "line": exc.lineno, "column": exc.colno}
        ) from None


def load_path(path: Union[str, Path], check: bool = True) -> Structure:
    return load_structure(read_document(path), source=str(path), check=check)


def _pairs(rows: list, width: int, what: str) -> list:
    bad = [r for r in rows if len(r) != width]
    if bad:
        raise ParseError(f"{what} rows need {width} entries", {"row": bad[0]})
    return [tuple(from_json(v) for v in r) for r in rows]


def backend_monad(spec: dict, backend: Backend) -> CartesianMonad:
    # shared instances keep one induced adjunction per monad
    if set(spec) <= {"monad", "backend"}:
        return shared_monad(spec.get("monad"), backend)
    return monad_from_spec(spec, backend)


def _object(backend: Backend, doc: ObjectDoc, name: str) -> VObject:
    unknown = set(doc.elements) - set(backend.sorts)
    if unknown:
        raise ParseError(f"{name}: sorts not in {backend.title}", {"sorts": sorted(unknown)})
    elements = {s: [from_json(v) for v in vs] for s, vs in doc.elements.items()}
    ops = {op: dict(_pairs(rows, 2, f"{name}.{op}")) for op, rows in doc.ops.items()}
    return finite_object(backend, elements, ops, name)


def _internal(doc: InternalDoc, check: bool) -> HLA:
    b = get_backend(doc.backend)
    T = backend_monad(doc.monad, b)
    x = _object(b, doc.objects, f"{doc.name}₀")
    apex = _object(b, doc.apex, f"{doc.name}₁")
    inputs = finite_map(apex, T.obj(x), {s: dict(_pairs(doc.inputs.get(s, []), 2, f"in.{s}")) for s in b.sorts}, "in")
    output = finite_map(apex, x, {s: dict(_pairs(doc.output.get(s, []), 2, f"out.{s}")) for s in b.sorts}, "out")
    identity = finite_map(x, apex, {s: dict(_pairs(doc.identity.get(s, []), 2, f"id.{s}")) for s in b.sorts}, "id")
    table = {
        s: {(op, children): result for op, children, result in _pairs(doc.composition.get(s, []), 3, f"composition.{s}")}
        for s in b.sorts
    }

    def compose(s, op, children):
        try:
            return table[s][(op, tuple(children))]
        except KeyError:
            raise IncompleteTable(
                f"{doc.name} has no composite for a shape", {"sort": s, "operation": to_json(op), "children": to_json(children)}
            ) from None

    return span_algebra(lift_to_span(T), x, apex, inputs, output, identity, compose, doc.name, check=check)


def load_structure(data: Any, source: str = "<document>", check: bool = True) -> Structure:
    """Parse and build; law checks run when ``check`` is set."""
    doc = parse_document(data, source)
    logger.debug("loading %s from %s", doc.kind, source)
    if isinstance(doc, MulticategoryDoc):
        operations = {op: (inputs, output) for op, inputs, output in _pairs(doc.operations, 3, "operations")}
        identities = dict(_pairs(doc.identities, 2, "identities"))
        composition = {(op, tuple(children)): result for op, children, result in _pairs(doc.composition, 3, "composition")}
        value = mk_multicategory([from_json(o) for o in doc.objects], operations, composition, identities, doc.name)
        return Structure(doc.kind, doc.name, value, data)
    if isinstance(doc, FreeMulticategoryDoc):
        generators = {g: (tuple(inputs), output) for g, inputs, output in _pairs(doc.generators, 3, "generators")}
        return Structure(doc.kind, doc.name, free_multicategory([from_json(o) for o in doc.objects], generators, doc.name), data)
    if isinstance(doc, InternalDoc):
        return Structure(doc.kind, doc.name, _internal(doc, check), data)
    if isinstance(doc, TerminalDoc):
        T = backend_monad(doc.monad, get_backend(doc.backend))
        monad = lift_to_span(T) if doc.side == "internal" else induced_monad_on_mat(T)
        return Structure(doc.kind, "1", terminal_hla(monad), data)
    if isinstance(doc, EnrichedDoc):
        inner = load_structure(doc.internal, f"{source}:internal", check=check)
        if not isinstance(inner.value, HLA) or not isinstance(inner.value.dc, SpanDC):
            raise ParseError(f"{source}: enriched structures are read off internal ones", {"path": source})
        value = enrich(inner.value, check=check)
        return Structure(doc.kind, doc.name or value.name, value, data)
    if isinstance(doc, EquipmentDoc):
        conj = conjunction(get_backend(doc.backend))
        dc = conj.span if doc.equipment == "span" else conj.mat
        return Structure(doc.kind, dc.name, dc, data)
    if isinstance(doc, MonadDoc):
        T = backend_monad(doc.monad, get_backend(doc.backend))
        lax = lift_to_span(T) if doc.side == "internal" else induced_monad_on_mat(T)
        return Structure(doc.kind, lax.name, lax, data)
    conj = conjunction(get_backend(doc.backend))
    functor = conj.copower if doc.functor == "copower" else conj.points
    return Structure(doc.kind, functor.name, functor, data)


# ─────────────────────────────
#   WRITING
# ─────────────────────────────


def _elements(v: VObject, depth: int) -> dict:
    """Elements of each sort up to ``depth``, closed under the operations."""
    b = v.backend
    elements = {s: list(v.parts[s].enumerate(depth)) for s in b.sorts}
    for op in b.operations:
        images = [v.op(op.name)(e) for e in elements[op.source]]
        elements[op.target] = list(dict.fromkeys(elements[op.target] + images))
    return elements


def _dump_object(v: VObject, elements: dict) -> dict:
    b = v.backend
    return {
        "elements": {s: [to_json(e) for e in els] for s, els in elements.items()},
        "ops": {op.name: [[to_json(e), to_json(v.op(op.name)(e))] for e in elements[op.source]] for op in b.operations},
    }


def _monad_spec(h: HLA) -> dict:
    if h.monad.base is not None:
        return h.monad.base.describe()
    if h.monad.name == "Id":
        return {"monad": "identity"}
    raise ParseError(f"{h.name} is not over a backend monad", {"monad": h.monad.name})


def dump_internal(h: HLA, depth: int = 4) -> dict:
    """An internal structure as an ``internal`` document.

    Lazy apexes and the composites are tabulated over what enumerates to ``depth``.
    """
    if not isinstance(h.dc, SpanDC):
        raise ParseError(f"{h.name}: only internal structures are written out directly", {"structure": h.name})
    b = h.dc.backend
    a = h.a
    objects, apex = _elements(h.x, depth), _elements(a.apex, depth)

    def rows(elements: dict, fn) -> dict:
        return {s: [[to_json(e), to_json(fn(s, e))] for e in els] for s, els in elements.items()}

    top = h.mult.top.apex
    return {
        "kind": "internal",
        "name": h.name,
        "backend": b.name,
        "monad": _monad_spec(h),
        "objects": _dump_object(h.x, objects),
        "apex": _dump_object(a.apex, apex),
        "inputs": rows(apex, a.l),
        "output": rows(apex, a.r),
        "identity": rows(objects, h.unit.body),
        "composition": {
            s: [[to_json(t[0]), to_json(t[1]), to_json(h.mult.body(s, t))] for t in top.parts[s].enumerate(depth)]
            for s in b.sorts
        },
    }


def dump_structure(structure: HLA, document: Optional[dict] = None, depth: int = 4) -> dict:
    """Internal structures are tabulated; enriched ones are written through ``document``."""
    if isinstance(structure.dc, SpanDC):
        return dump_internal(structure, depth)
    if document is None:
        raise ParseError(f"{structure.name}: enriched structures need their internal presentation", {"structure": structure.name})
    return {"kind": "enriched", "name": structure.name, "internal": document}
