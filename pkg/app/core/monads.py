"""Cartesian monads on the backends, their lift to Span(V) and the induced monads on V-Mat.

A backend monad acts on objects and maps and carries fibers through its arrow action, so
pullback tests keep working on lazily enumerated ``T X``. ``lift_to_span`` applies it legwise;
``induced_monad_on_mat`` transports the lift along the copower ⊣ points conjunction.

Monad morphisms follow two orientations:

    oplax (F, φ): S → T   with φ: F∘S ⇒ T∘F
    lax   (G, ψ): T → S   with ψ: S∘G ⇒ G∘T
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cache
from itertools import product
from typing import Any, Callable, Mapping, Optional, Sequence

from .adjunction import Conjunction, conjunction
from .backends import FINGRPH, Backend, VMap, VObject, get_backend, vsquare_defect
from .carriers import (
    EMPTY,
    Carrier,
    Element,
    FiberedMap,
    FiniteObject,
    LazyObject,
    encode,
    filtered,
    image_of,
    list_carrier,
    product_carrier,
)
from .doublecat import (
    Cell,
    DoubleCategory,
    LaxFunctor,
    Samples,
    VerticalTransformation,
    as_lax,
    check_lax_functor,
    check_vertical_trans,
    compare,
    compose_functors,
    identity_functor,
    identity_vtrans,
)
from .errors import IncompleteTable, LawViolation, MixedBackends, ParseError
from .reports import Report
from .spans import Span

logger = logging.getLogger(__name__)


# backend monads


class CartesianMonad(ABC):
    """A monad on a backend whose arrow action keeps fibers computable."""

    tag = "monad"

    def __init__(self, backend: Backend, name: str):
        self.backend = backend
        self.name = name
        self._objects: dict = {}
        self._maps: dict = {}
        self._units: dict = {}
        self._mults: dict = {}
        self._lifts: dict = {}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name} on {self.backend.name})"

    def obj(self, X: VObject) -> VObject:
        if X not in self._objects:
            self._objects[X] = self._build_obj(X)
        return self._objects[X]

    def fmap(self, f: VMap) -> VMap:
        if f not in self._maps:
            self._maps[f] = self._build_fmap(f)
        return self._maps[f]

    def unit(self, X: VObject) -> VMap:
        """e_X : X → T X."""
        if X not in self._units:
            self._units[X] = self._build_unit(X)
        return self._units[X]

    def mult(self, X: VObject) -> VMap:
        """m_X : T T X → T X."""
        if X not in self._mults:
            self._mults[X] = self._build_mult(X)
        return self._mults[X]

    @abstractmethod
    def _build_obj(self, X: VObject) -> VObject: ...

    @abstractmethod
    def _build_fmap(self, f: VMap) -> VMap: ...

    @abstractmethod
    def _build_unit(self, X: VObject) -> VMap: ...

    @abstractmethod
    def _build_mult(self, X: VObject) -> VMap: ...

    @abstractmethod
    def zip(self, sort: str, tb: Element, ta: Element) -> Element:
        """``T B ×_{T C} T A → T(B ×_C A)``, inverse to the pair of projections."""

    @abstractmethod
    def unzip(self, sort: str, t: Element) -> tuple: ...

    def describe(self) -> dict:
        return {"monad": self.tag}


class IdentityMonad(CartesianMonad):
    tag = "identity"

    def __init__(self, backend: Backend):
        super().__init__(backend, "Id")

    def _build_obj(self, X):
        return X

    def _build_fmap(self, f):
        return f

    def _build_unit(self, X):
        return self.backend.identity(X)

    def _build_mult(self, X):
        return self.backend.identity(X)

    def zip(self, sort, tb, ta):
        return (tb, ta)

    def unzip(self, sort, t):
        return t


class SortwiseMonad(CartesianMonad):
    """A monad given by one carrier-level construction applied to every sort.

    Operations of the backend are lifted elementwise, so ``T`` of a graph applies the
    construction to vertices and edges separately.
    """

    @abstractmethod
    def carrier(self, C: Carrier) -> Carrier: ...

    @abstractmethod
    def apply(self, f: FiberedMap, t: Element) -> Element: ...

    @abstractmethod
    def lift_fiber(self, f: FiberedMap, t: Element) -> Carrier: ...

    @abstractmethod
    def unit_el(self, x: Element) -> Element: ...

    @abstractmethod
    def unit_fiber(self, C: Carrier, t: Element) -> Carrier: ...

    @abstractmethod
    def mult_el(self, t: Element) -> Element: ...

    @abstractmethod
    def zip_el(self, tb: Element, ta: Element) -> Element: ...

    @abstractmethod
    def unzip_el(self, t: Element) -> tuple: ...

    def _lift(self, f: FiberedMap, dom: Carrier, cod: Carrier, name: str) -> FiberedMap:
        fiber_fn = None
        if f.fibered:

            def fiber_fn(t):
                return self.lift_fiber(f, t)

        return FiberedMap(dom, cod, lambda t: self.apply(f, t), fiber_fn, name=name)

    def _build_obj(self, X):
        b = self.backend
        parts = {s: self.carrier(X.parts[s]) for s in b.sorts}
        ops = {
            op.name: self._lift(X.op(op.name), parts[op.source], parts[op.target], op.name)
            for op in b.operations
        }
        return b.obj(parts, ops, name=f"{self.name}({X.name})")

    def _build_fmap(self, f):
        TX, TY = self.obj(f.dom), self.obj(f.cod)
        name = f"{self.name}{f.name}"
        comps = {s: self._lift(f.at(s), TX.parts[s], TY.parts[s], name) for s in self.backend.sorts}
        return VMap(TX, TY, comps, name)

    def _build_unit(self, X):
        TX = self.obj(X)
        comps = {
            s: FiberedMap(
                X.parts[s],
                TX.parts[s],
                self.unit_el,
                lambda t, C=X.parts[s]: self.unit_fiber(C, t),
                name=f"e_{X.name}",
            )
            for s in self.backend.sorts
        }
        return VMap(X, TX, comps, f"e_{X.name}")

    def _build_mult(self, X):
        TX, TTX = self.obj(X), self.obj(self.obj(X))
        comps = {
            s: FiberedMap(TTX.parts[s], TX.parts[s], self.mult_el, name=f"m_{X.name}")
            for s in self.backend.sorts
        }
        return VMap(TTX, TX, comps, f"m_{X.name}")

    def zip(self, sort, tb, ta):
        return self.zip_el(tb, ta)

    def unzip(self, sort, t):
        return self.unzip_el(t)


def _is_word(t) -> bool:
    return isinstance(t, tuple)


class FreeMonoidMonad(SortwiseMonad):
    """Words: ``e x = (x,)``, ``m`` concatenates; the fiber of ``T f`` over a word is the
    product of the fibers of ``f`` over its letters."""

    tag = "free_monoid"

    def __init__(self, backend: Backend):
        super().__init__(backend, "(−)*")

    def carrier(self, C):
        return list_carrier(C, f"{C.name}*")

    def apply(self, f, w):
        return tuple(f(x) for x in w)

    def lift_fiber(self, f, w):
        if not _is_word(w):
            return EMPTY
        return product_carrier(f"{f.name}*^-1", [f.fiber(y) for y in w])

    def unit_el(self, x):
        return (x,)

    def unit_fiber(self, C, w):
        if _is_word(w) and len(w) == 1 and C.contains(w[0]):
            return FiniteObject("e^-1", (w[0],))
        return EMPTY

    def mult_el(self, ws):
        return tuple(x for w in ws for x in w)

    def zip_el(self, wb, wa):
        return tuple(zip(wb, wa))

    def unzip_el(self, w):
        return tuple(p[0] for p in w), tuple(p[1] for p in w)


@dataclass(frozen=True, eq=False)
class FiniteMonoid:
    name: str
    elements: FiniteObject
    unit: Element
    op: Callable[[Element, Element], Element]

    def describe(self) -> dict:
        els = self.elements.elements
        return {
            "name": self.name,
            "elements": list(els),
            "unit": self.unit,
            "table": [[self.op(a, b) for b in els] for a in els],
        }


def finite_monoid(name: str, elements: Sequence[Element], unit: Element, table: Mapping) -> FiniteMonoid:
    """A monoid from its multiplication table ``{(a, b): ab}``; checks closure and the laws."""
    carrier = FiniteObject(name, tuple(elements))
    els = carrier.elements
    missing = [(a, b) for a in els for b in els if (a, b) not in table]
    if missing:
        raise IncompleteTable(f"monoid {name} misses products", {"pairs": [encode(p) for p in missing[:5]]})
    stray = [encode(v) for v in table.values() if not carrier.contains(v)]
    if stray:
        raise IncompleteTable(f"monoid {name} leaves its elements", {"values": stray})
    if not carrier.contains(unit):
        raise IncompleteTable(f"unit of {name} is not an element", {"unit": encode(unit)})
    mul = dict(table)
    for a in els:
        if mul[(unit, a)] != a or mul[(a, unit)] != a:
            raise LawViolation(f"monoid {name}: unit law", {"law": "unit", "element": encode(a)})
    for a, b, c in product(els, repeat=3):
        if mul[(mul[(a, b)], c)] != mul[(a, mul[(b, c)])]:
            raise LawViolation(f"monoid {name}: associativity", {"law": "associativity", "triple": encode((a, b, c))})
    return FiniteMonoid(name, carrier, unit, lambda a, b: mul[(a, b)])


def cyclic_group(k: int) -> FiniteMonoid:
    if k < 1:
        raise ParseError("cyclic group needs a positive order", {"order": k})
    els = tuple(range(k))
    return FiniteMonoid(f"Z/{k}", FiniteObject(f"Z/{k}", els), 0, lambda a, b: (a + b) % k)


class ProductMonad(SortwiseMonad):
    """``M × −`` for a finite monoid M: ``e x = (1, x)``, ``m (a, (b, x)) = (ab, x)``."""

    tag = "monoid_product"

    def __init__(self, backend: Backend, monoid: FiniteMonoid):
        super().__init__(backend, f"{monoid.name}×−")
        self.monoid = monoid

    def carrier(self, C):
        return product_carrier(f"{self.monoid.name}×{C.name}", [self.monoid.elements, C])

    def apply(self, f, t):
        return (t[0], f(t[1]))

    def lift_fiber(self, f, t):
        if not (isinstance(t, tuple) and len(t) == 2):
            return EMPTY
        a, y = t
        return image_of(
            f"{self.monoid.name}×{f.name}^-1",
            f.fiber(y),
            lambda x: (a, x),
            lambda u: isinstance(u, tuple) and len(u) == 2 and u[0] == a and f.dom.contains(u[1]) and f(u[1]) == y,
        )

    def unit_el(self, x):
        return (self.monoid.unit, x)

    def unit_fiber(self, C, t):
        if isinstance(t, tuple) and len(t) == 2 and t[0] == self.monoid.unit and C.contains(t[1]):
            return FiniteObject("e^-1", (t[1],))
        return EMPTY

    def mult_el(self, t):
        a, (b, x) = t
        return (self.monoid.op(a, b), x)

    def zip_el(self, tb, ta):
        return (tb[0], (tb[1], ta[1]))

    def unzip_el(self, t):
        a, (b, x) = t
        return (a, b), (a, x)

    def describe(self):
        return {"monad": self.tag, "monoid": self.monoid.describe()}


# operads


@dataclass(frozen=True, eq=False)
class Operad:
    """Operations graded by arity with a unit in arity 1 and a composition.

    ``max_arity`` bounds the nonempty arities; None means every arity is inhabited.
    """

    name: str
    unit: Element
    ops_fn: Callable[[int], FiniteObject]
    compose_fn: Callable[[Element, tuple], Element]
    max_arity: Optional[int] = None
    spec: dict = field(default_factory=dict)

    def ops(self, n: int) -> FiniteObject:
        if n < 0 or (self.max_arity is not None and n > self.max_arity):
            return EMPTY
        return self.ops_fn(n)

    def compose(self, o: Element, children: tuple) -> Element:
        return self.compose_fn(o, tuple(children))

    def arities(self, depth: int) -> range:
        top = depth if self.max_arity is None else min(depth, self.max_arity)
        return range(top + 1)


def terminal_operad() -> Operad:
    """One operation per arity; its monad is the free monoid monad."""
    point = FiniteObject("O", ("*",))
    return Operad("Com", "*", lambda n: point, lambda o, cs: "*", spec={"operad": "terminal"})


def cyclic_operad(k: int) -> Operad:
    """``O_n = Z/k`` in every arity, composing by addition."""
    if k < 1:
        raise ParseError("cyclic operad needs a positive order", {"order": k})
    labels = FiniteObject(f"Z/{k}", tuple(range(k)))
    return Operad(
        f"Z/{k}",
        0,
        lambda n: labels,
        lambda o, cs: (o + sum(cs)) % k,
        spec={"operad": "cyclic", "order": k},
    )


def table_operad(name: str, arities: Mapping[int, Sequence[Element]], unit: Element, table: Mapping) -> Operad:
    """A truncated operad from ``{(o, children): composite}``.

    Every composable shape needs an entry landing in the operations of the summed arity;
    a shape whose summed arity exceeds the bound is reported as incomplete.
    """
    arities = {int(n): FiniteObject(f"{name}_{n}", tuple(labels)) for n, labels in arities.items()}
    bound = max(arities) if arities else 0
    if unit not in arities.get(1, EMPTY).elements:
        raise IncompleteTable(f"operad {name} needs its unit in arity 1", {"unit": encode(unit)})
    labelled = [(o, n) for n, c in arities.items() for o in c.elements]
    comp = dict(table)

    def ops(n):
        return arities.get(n, EMPTY)

    for n, carrier in arities.items():
        for o in carrier.elements:
            for children in product(labelled, repeat=n):
                total = sum(k for _, k in children)
                key = (o, tuple(c for c, _ in children))
                if key not in comp:
                    raise IncompleteTable(
                        f"operad {name} has no composite for a shape",
                        {"operation": encode(o), "children": encode(key[1]), "arity": total},
                    )
                if total > bound or not ops(total).contains(comp[key]):
                    raise IncompleteTable(
                        f"operad {name}: composite outside arity {total}",
                        {"operation": encode(o), "children": encode(key[1]), "composite": encode(comp[key])},
                    )

    def compose(o, cs):
        return comp[(o, tuple(cs))]

    for n, carrier in arities.items():
        for o in carrier.elements:
            if compose(unit, (o,)) != o or compose(o, (unit,) * n) != o:
                raise LawViolation(f"operad {name}: unit law", {"law": "unit", "operation": encode(o)})
    # associativity: o∘(o_i∘(o_ij)) = (o∘(o_i))∘(o_ij)
    for n, carrier in arities.items():
        for o in carrier.elements:
            for children in product(labelled, repeat=n):
                grand_choices = [product(labelled, repeat=k) for _, k in children]
                for grand in product(*grand_choices):
                    inner = tuple(compose(c, tuple(g for g, _ in gs)) for (c, _), gs in zip(children, grand))
                    lhs = compose(o, inner)
                    flat = tuple(g for gs in grand for g, _ in gs)
                    rhs = compose(compose(o, tuple(c for c, _ in children)), flat)
                    if lhs != rhs:
                        raise LawViolation(
                            f"operad {name}: associativity",
                            {"law": "associativity", "operation": encode(o), "children": encode(tuple(c for c, _ in children))},
                        )
    spec = {
        "operad": "table",
        "name": name,
        "arities": {str(n): list(c.elements) for n, c in arities.items()},
        "unit": unit,
        "compose": [[o, list(cs), v] for (o, cs), v in comp.items()],
    }
    return Operad(name, unit, ops, compose, max_arity=bound, spec=spec)


class OperadicMonad(SortwiseMonad):
    """``T_O X = Σ_n O_n × X^n`` with elements ``(o, word)``."""

    tag = "operadic"

    def __init__(self, backend: Backend, operad: Operad):
        super().__init__(backend, f"T_{operad.name}")
        self.operad = operad

    def _member(self, C: Carrier, t) -> bool:
        return (
            isinstance(t, tuple)
            and len(t) == 2
            and isinstance(t[1], tuple)
            and self.operad.ops(len(t[1])).contains(t[0])
            and all(C.contains(x) for x in t[1])
        )

    def carrier(self, C):
        O = self.operad

        def build(d):
            for n in O.arities(d):
                letters = C.enumerate(max(d - n, 0))
                for o in O.ops(n).elements:
                    for w in product(letters, repeat=n):
                        yield (o, w)

        name = f"{self.name}({C.name})"
        if C.is_finite and O.max_arity is not None:
            return FiniteObject(name, tuple(dict.fromkeys(build(O.max_arity))))
        return LazyObject(name, lambda t: self._member(C, t), build)

    def apply(self, f, t):
        return (t[0], tuple(f(x) for x in t[1]))

    def lift_fiber(self, f, t):
        if not (isinstance(t, tuple) and len(t) == 2 and isinstance(t[1], tuple)):
            return EMPTY
        o, w = t
        if not self.operad.ops(len(w)).contains(o):
            return EMPTY
        return image_of(
            f"{self.name}{f.name}^-1",
            product_carrier("^-1", [f.fiber(y) for y in w]),
            lambda ws: (o, ws),
            lambda u: self._member(f.dom, u) and u[0] == o and tuple(f(x) for x in u[1]) == w,
        )

    def unit_el(self, x):
        return (self.operad.unit, (x,))

    def unit_fiber(self, C, t):
        if isinstance(t, tuple) and len(t) == 2 and t[0] == self.operad.unit and isinstance(t[1], tuple) and len(t[1]) == 1 and C.contains(t[1][0]):
            return FiniteObject("e^-1", (t[1][0],))
        return EMPTY

    def mult_el(self, t):
        o, inner = t
        return (self.operad.compose(o, tuple(i[0] for i in inner)), tuple(x for i in inner for x in i[1]))

    def zip_el(self, tb, ta):
        return (tb[0], tuple(zip(tb[1], ta[1])))

    def unzip_el(self, t):
        o, w = t
        return (o, tuple(p[0] for p in w)), (o, tuple(p[1] for p in w))

    def describe(self):
        return {"monad": self.tag, **self.operad.spec}


# the free category monad on graphs


class FreeCategoryMonad(CartesianMonad):
    """𝔉 on FinGrph: vertices stay, edges become paths ``(start, edges)``."""

    tag = "free_category"

    def __init__(self, backend: Backend = FINGRPH):
        if backend is not FINGRPH:
            raise MixedBackends("the free category monad lives on FinGrph", {"backend": backend.name})
        super().__init__(backend, "𝔉")

    @staticmethod
    def _end(G: VObject, p) -> Element:
        start, es = p
        return G.op("tgt")(es[-1]) if es else start

    @staticmethod
    def _composable(G: VObject, start, es) -> bool:
        here = start
        for e in es:
            if G.op("src")(e) != here:
                return False
            here = G.op("tgt")(e)
        return True

    @staticmethod
    def _acyclic(G: VObject) -> bool:
        if not G.is_finite:
            return False
        src, tgt = G.op("src"), G.op("tgt")
        succ: dict = {}
        for e in G.parts["E"].elements:
            succ.setdefault(src(e), []).append(tgt(e))
        state: dict = {}

        def visit(v) -> bool:
            state[v] = "open"
            for w in succ.get(v, []):
                if state.get(w) == "open" or (w not in state and not visit(w)):
                    return False
            state[v] = "done"
            return True

        return all(visit(v) for v in G.parts["V"].elements if v not in state)

    def _paths(self, G: VObject, d: int):
        V, E = G.parts["V"], G.parts["E"]
        src, tgt = G.op("src"), G.op("tgt")
        frontier = [(v, (), v) for v in V.enumerate(d)]
        for length in range(d + 1):
            grown = []
            for start, es, end in frontier:
                yield (start, es)
                if length == d:
                    continue
                if src.fibered:
                    nexts = src.fiber(end).enumerate(d)
                else:
                    nexts = [e for e in E.enumerate(d) if src(e) == end]
                grown.extend((start, es + (e,), tgt(e)) for e in nexts)
            frontier = grown

    def _build_obj(self, G):
        b = self.backend
        V = G.parts["V"]
        name = f"𝔉({G.name})"

        def member(p):
            return (
                isinstance(p, tuple)
                and len(p) == 2
                and isinstance(p[1], tuple)
                and V.contains(p[0])
                and all(G.parts["E"].contains(e) for e in p[1])
                and self._composable(G, p[0], p[1])
            )

        if self._acyclic(G):
            n = len(V.elements) + 1
            paths: Carrier = FiniteObject(f"{name}.E", tuple(dict.fromkeys(self._paths(G, n))))
        else:
            paths = LazyObject(f"{name}.E", member, lambda d: self._paths(G, d))
        ops = {
            "src": FiberedMap(paths, V, lambda p: p[0], lambda v: filtered("src^-1", paths, lambda p: p[0] == v), name="src"),
            "tgt": FiberedMap(
                paths, V, lambda p: self._end(G, p), lambda v: filtered("tgt^-1", paths, lambda p: self._end(G, p) == v), name="tgt"
            ),
        }
        return b.obj({"V": V, "E": paths}, ops, name=name)

    def _build_fmap(self, f):
        G, H = f.dom, f.cod
        FG, FH = self.obj(G), self.obj(H)
        fV, fE = f.at("V"), f.at("E")

        def forward(p):
            return (fV(p[0]), tuple(fE(e) for e in p[1]))

        def fiber_fn(q):
            if not FH.parts["E"].contains(q):
                return EMPTY
            start, es = q
            if not es:
                return image_of("𝔉f^-1", fV.fiber(start), lambda v: (v, ()), lambda p: FG.parts["E"].contains(p) and forward(p) == q)
            choices = product_carrier("𝔉f^-1", [fE.fiber(e) for e in es])
            src = G.op("src")
            composable = filtered("𝔉f^-1", choices, lambda c: self._composable(G, src(c[0]), c))
            return image_of("𝔉f^-1", composable, lambda c: (src(c[0]), c), lambda p: FG.parts["E"].contains(p) and forward(p) == q)

        comps = {
            "V": fV,
            "E": FiberedMap(FG.parts["E"], FH.parts["E"], forward, fiber_fn if fV.fibered and fE.fibered else None, name=f"𝔉{f.name}"),
        }
        return VMap(FG, FH, comps, f"𝔉{f.name}")

    def _build_unit(self, G):
        FG = self.obj(G)
        src = G.op("src")

        def fiber_fn(p):
            if isinstance(p, tuple) and len(p) == 2 and len(p[1]) == 1 and G.parts["E"].contains(p[1][0]) and src(p[1][0]) == p[0]:
                return FiniteObject("e^-1", (p[1][0],))
            return EMPTY

        comps = {
            "V": FiberedMap(G.parts["V"], FG.parts["V"], lambda v: v, lambda v: FiniteObject("e^-1", (v,)) if G.parts["V"].contains(v) else EMPTY, name="e"),
            "E": FiberedMap(G.parts["E"], FG.parts["E"], lambda e: (src(e), (e,)), fiber_fn, name="e"),
        }
        return VMap(G, FG, comps, f"e_{G.name}")

    def _build_mult(self, G):
        FG, FFG = self.obj(G), self.obj(self.obj(G))
        comps = {
            "V": FiberedMap(FFG.parts["V"], FG.parts["V"], lambda v: v, name="m"),
            "E": FiberedMap(FFG.parts["E"], FG.parts["E"], lambda p: (p[0], tuple(e for q in p[1] for e in q[1])), name="m"),
        }
        return VMap(FFG, FG, comps, f"m_{G.name}")

    def zip(self, sort, tb, ta):
        if sort == "V":
            return (tb, ta)
        return ((tb[0], ta[0]), tuple(zip(tb[1], ta[1])))

    def unzip(self, sort, t):
        if sort == "V":
            return t
        (vb, va), es = t
        return (vb, tuple(e[0] for e in es)), (va, tuple(e[1] for e in es))


# transformations between backend monads


@dataclass(eq=False)
class CartesianTransformation:
    """τ: S ⇒ T between backend monads, componentwise ``τ_X: S X → T X``."""

    name: str
    source: CartesianMonad
    target: CartesianMonad
    component: Callable[[VObject], VMap]
    _memo: dict = field(default_factory=dict, repr=False)

    def at(self, X: VObject) -> VMap:
        if X not in self._memo:
            self._memo[X] = self.component(X)
        return self._memo[X]


def operad_transformation(source: OperadicMonad, target: OperadicMonad, label_map: Callable, name: str = "τ", depth: int = 3) -> CartesianTransformation:
    """The transformation ``T_O ⇒ T_O'`` induced by a map of operads, relabelling operations.

    The map is checked against units and compositions up to arity ``depth``.
    """
    if source.backend is not target.backend:
        raise MixedBackends("operad maps need one backend")
    O, P = source.operad, target.operad
    if label_map(O.unit) != P.unit:
        raise LawViolation(f"{name} does not preserve the unit", {"law": "unit"})
    for n in O.arities(depth):
        for o in O.ops(n).elements:
            if not P.ops(n).contains(label_map(o)):
                raise LawViolation(f"{name} changes arities", {"law": "arity", "operation": encode(o)})
            labels = tuple(dict.fromkeys(c for k in O.arities(depth) for c in O.ops(k).elements))
            for children in product(labels, repeat=n):
                lhs = label_map(O.compose(o, children))
                rhs = P.compose(label_map(o), tuple(label_map(c) for c in children))
                if lhs != rhs:
                    raise LawViolation(
                        f"{name} does not preserve composition",
                        {"law": "composition", "operation": encode(o), "children": encode(children)},
                    )

    def component(X: VObject) -> VMap:
        SX, TX = source.obj(X), target.obj(X)
        comps = {}
        for s in source.backend.sorts:

            def fiber_fn(u, SXs=SX.parts[s], TXs=TX.parts[s]):
                if not TXs.contains(u):
                    return EMPTY
                o2, w = u
                return FiniteObject("τ^-1", tuple((o, w) for o in O.ops(len(w)).elements if label_map(o) == o2))

            comps[s] = FiberedMap(SX.parts[s], TX.parts[s], lambda t: (label_map(t[0]), t[1]), fiber_fn, name=name)
        return VMap(SX, TX, comps, f"{name}_{X.name}")

    return CartesianTransformation(name, source, target, component)


# backend-level checks


def check_cartesian(T: CartesianMonad, objects: Sequence[VObject], maps: Sequence[VMap], depth: int = 3) -> Report:
    """Monad laws on objects and the pullback property of the naturality squares of e and m."""
    b = T.backend
    report = Report(f"cartesian monad {T.name} on {b.title}", depth=depth)
    for X in objects:
        TX = T.obj(X)
        ident = b.identity(TX)
        bad = b.maps_agree(b.compose(T.mult(X), T.fmap(T.unit(X))), ident, depth)
        report.record("m∘Te = id", bad is None, X.name, bad)
        bad = b.maps_agree(b.compose(T.mult(X), T.unit(TX)), ident, depth)
        report.record("m∘eT = id", bad is None, X.name, bad)
        bad = b.maps_agree(b.compose(T.mult(X), T.fmap(T.mult(X))), b.compose(T.mult(X), T.mult(TX)), depth)
        report.record("m∘Tm = m∘mT", bad is None, X.name, bad)
        report.exact = report.exact and TX.is_finite
    for f in maps:
        X, Y = f.dom, f.cod
        bad = b.naturality_defect(T.fmap(f), depth)
        report.record("T f is a backend map", bad is None, f.name, bad)
        bad = vsquare_defect(T.unit(X), f, T.fmap(f), T.unit(Y), depth)
        report.record("e square is a pullback", bad is None, f.name, bad)
        bad = vsquare_defect(T.mult(X), T.fmap(T.fmap(f)), T.fmap(f), T.mult(Y), depth)
        report.record("m square is a pullback", bad is None, f.name, bad)
    logger.info("%s: %d checks, passed=%s", report.title, len(report.results), report.passed)
    return report


def fiber_count_check(T: CartesianMonad, f: VMap, depth: int = 3) -> Report:
    """Fibers of ``T f`` computed structurally agree with direct enumeration of ``T X``."""
    report = Report(f"fibers of {T.name}{f.name}", depth=depth)
    Tf = T.fmap(f)
    for s in T.backend.sorts:
        comp = Tf.at(s)
        counts: dict = {}
        for t in comp.dom.enumerate(depth):
            counts[comp(t)] = counts.get(comp(t), 0) + 1
        for t in comp.cod.enumerate(depth):
            direct = counts.get(t, 0)
            structural = len(comp.fiber(t).enumerate(depth))
            if direct != structural:
                report.record("fiber size", False, s, {"element": encode(t), "direct": direct, "fiber": structural})
                break
        else:
            report.record("fiber size", True, s)
    report.exact = f.dom.is_finite and T.obj(f.dom).is_finite
    return report


# monads in the 2-category of double categories


@dataclass(eq=False)
class LaxMonad:
    """A monad ``(T, m, e)`` on a double category, T a lax functor."""

    name: str
    dc: DoubleCategory
    functor: LaxFunctor
    unit: VerticalTransformation
    mult: VerticalTransformation
    base: Optional[CartesianMonad] = None

    def obj(self, x):
        return self.functor.obj(x)

    def vert(self, f):
        return self.functor.vert(f)

    def hcell(self, p):
        return self.functor.hcell(p)

    def cell(self, c: Cell) -> Cell:
        return self.functor.cell(c)

    def e(self, x):
        return self.unit.at(x)

    def m(self, x):
        return self.mult.at(x)


def identity_monad(dc: DoubleCategory) -> LaxMonad:
    Id = identity_functor(dc)
    mult = VerticalTransformation("m", compose_functors(Id, Id), Id, dc.vid, dc.cell_id)
    return LaxMonad("Id", dc, Id, identity_vtrans(Id), mult)


def lift_to_span(T: CartesianMonad) -> LaxMonad:
    """T applied legwise to spans; comparisons are the canonical isos, so the lift is strong."""
    if "span" in T._lifts:
        return T._lifts["span"]
    span = conjunction(T.backend).span

    def on_hcell(p: Span) -> Span:
        return Span(T.obj(p.dom), T.obj(p.cod), T.obj(p.apex), T.fmap(p.l), T.fmap(p.r), f"{T.name}{p.name}")

    def on_cell(c: Cell) -> Cell:
        return Cell(F.hcell(c.top), F.hcell(c.bottom), T.fmap(c.left), T.fmap(c.right), T.fmap(c.body), f"{T.name}{c.name}")

    def unit(x):
        return span.iso_cell(span.hunit(T.obj(x)), F.hcell(span.hunit(x)), lambda s, t: t, lambda s, u: u, f"e^{T.name}_{x.name}")

    def unit_inv(x):
        return span.iso_cell(F.hcell(span.hunit(x)), span.hunit(T.obj(x)), lambda s, t: t, lambda s, u: u, f"e^{T.name}⁻¹_{x.name}")

    def mult(q, p):
        return span.iso_cell(
            span.hcomp(F.hcell(q), F.hcell(p)),
            F.hcell(span.hcomp(q, p)),
            lambda s, t: T.zip(s, t[0], t[1]),
            lambda s, u: T.unzip(s, u),
            f"m^{T.name}_{q.name},{p.name}",
        )

    def mult_inv(q, p):
        return span.iso_cell(
            F.hcell(span.hcomp(q, p)),
            span.hcomp(F.hcell(q), F.hcell(p)),
            lambda s, u: T.unzip(s, u),
            lambda s, t: T.zip(s, t[0], t[1]),
            f"m^{T.name}⁻¹_{q.name},{p.name}",
        )

    F = LaxFunctor(
        name=T.name,
        source=span,
        target=span,
        on_obj=T.obj,
        on_vert=T.fmap,
        on_hcell=on_hcell,
        on_cell=on_cell,
        unit=unit,
        mult=mult,
        flags=frozenset({"normal", "strong"}),
        unit_inv=unit_inv,
        mult_inv=mult_inv,
    )

    def unit_cell(p: Span) -> Cell:
        return Cell(p, F.hcell(p), T.unit(p.dom), T.unit(p.cod), T.unit(p.apex), f"e_{p.name}")

    def mult_cell(p: Span) -> Cell:
        return Cell(F.hcell(F.hcell(p)), F.hcell(p), T.mult(p.dom), T.mult(p.cod), T.mult(p.apex), f"m_{p.name}")

    e = VerticalTransformation("e", identity_functor(span), F, T.unit, cache(unit_cell))
    m = VerticalTransformation("m", compose_functors(F, F), F, T.mult, cache(mult_cell))
    lifted = LaxMonad(T.name, span, F, e, m, base=T)
    T._lifts["span"] = lifted
    logger.debug("lifted %r to %s", T, span.name)
    return lifted


@dataclass(eq=False)
class Adjunction:
    """``left ⊣ right`` between double categories with unit ``Id ⇒ right∘left`` and
    counit ``left∘right ⇒ Id``; both functors lax."""

    left: LaxFunctor
    right: LaxFunctor
    unit: VerticalTransformation
    counit: VerticalTransformation


_ADJUNCTIONS: dict = {}


def conjunction_adjunction(conj: Conjunction) -> Adjunction:
    """The copower ⊣ points conjunction, with the copower read as a lax functor."""
    key = conj.backend.name
    if key not in _ADJUNCTIONS:
        left = as_lax(conj.copower)
        unit = VerticalTransformation(
            "η̂", identity_functor(conj.mat), compose_functors(conj.points, left), conj.unit_at, conj.unit_cell
        )
        _ADJUNCTIONS[key] = Adjunction(left, conj.points, unit, conj.counit_transformation())
    return _ADJUNCTIONS[key]


def transfer_monad(adj: Adjunction, monad: LaxMonad, name: Optional[str] = None) -> LaxMonad:
    """``r t l`` with unit ``r e l ∘ η`` and multiplication ``r (m ∘ t ε t) l``."""
    l, r, t = adj.left, adj.right, monad.functor
    D, E = l.source, l.target
    Tbar = compose_functors(r, compose_functors(t, l))
    Tbar.name = name or f"{monad.name}̄"

    @cache
    def unit_at(x):
        return D.vcomp(r.vert(monad.e(l.obj(x))), adj.unit.at(x))

    @cache
    def unit_cell(p):
        return D.vcomp_cell(r.cell(monad.unit.cell(l.hcell(p))), adj.unit.cell(p))

    @cache
    def mult_at(x):
        tlx = t.obj(l.obj(x))
        return r.vert(E.vcomp(monad.m(l.obj(x)), t.vert(adj.counit.at(tlx))))

    @cache
    def mult_cell(p):
        tlp = t.hcell(l.hcell(p))
        return r.cell(E.vcomp_cell(monad.mult.cell(l.hcell(p)), t.cell(adj.counit.cell(tlp))))

    e = VerticalTransformation("ē", identity_functor(D), Tbar, unit_at, unit_cell)
    m = VerticalTransformation("m̄", compose_functors(Tbar, Tbar), Tbar, mult_at, mult_cell)
    return LaxMonad(Tbar.name, D, Tbar, e, m, base=monad.base)


def induced_monad_on_mat(T: CartesianMonad) -> LaxMonad:
    """T̄ = V(1, T(−·1)) on V-Mat."""
    if "mat" not in T._lifts:
        conj = conjunction(T.backend)
        T._lifts["mat"] = transfer_monad(conjunction_adjunction(conj), lift_to_span(T), f"{T.name}̄")
    return T._lifts["mat"]


# monad morphisms


@dataclass(eq=False)
class MonadMorphism:
    """``oplax``: (F, φ): S → T, φ: F∘S ⇒ T∘F.  ``lax``: (G, ψ): T → S, ψ: S∘G ⇒ G∘T.

    ``source`` is always the monad on the domain of ``functor``.
    """

    name: str
    orientation: str
    source: LaxMonad
    target: LaxMonad
    functor: LaxFunctor
    cell: VerticalTransformation

    @property
    def is_lax(self) -> bool:
        return self.orientation == "lax"


def identity_morphism(monad: LaxMonad) -> MonadMorphism:
    Id = identity_functor(monad.dc)
    T = monad.functor
    phi = VerticalTransformation(
        f"1_{monad.name}",
        compose_functors(Id, T),
        compose_functors(T, Id),
        lambda x: monad.dc.vid(T.obj(x)),
        lambda p: monad.dc.cell_id(T.hcell(p)),
    )
    return MonadMorphism(f"1_{monad.name}", "oplax", monad, monad, Id, phi)


def unit_morphism(monad: LaxMonad) -> MonadMorphism:
    """(id, e): T → Id as a lax morphism."""
    dc = monad.dc
    Id = identity_functor(dc)
    target = identity_monad(dc)
    psi = VerticalTransformation("e", compose_functors(target.functor, Id), compose_functors(Id, monad.functor), monad.unit.at, monad.unit.cell)
    return MonadMorphism(f"(id,e_{monad.name})", "lax", monad, target, Id, psi)


def conjunction_morphisms(T: CartesianMonad) -> tuple[MonadMorphism, MonadMorphism]:
    """``(−·1, ε̂_{T(−·1)}): T̄ → T`` (oplax) and ``(V(1,−), V(1, T ε̂)): T → T̄`` (lax)."""
    conj = conjunction(T.backend)
    adj = conjunction_adjunction(conj)
    lifted, induced = lift_to_span(T), induced_monad_on_mat(T)
    l, r, t = adj.left, adj.right, lifted.functor
    phi = VerticalTransformation(
        "ε̂T",
        compose_functors(l, induced.functor),
        compose_functors(t, l),
        lambda x: adj.counit.at(t.obj(l.obj(x))),
        lambda p: adj.counit.cell(t.hcell(l.hcell(p))),
    )
    psi = VerticalTransformation(
        "V(1,Tε̂)",
        compose_functors(induced.functor, r),
        compose_functors(r, t),
        cache(lambda a: r.vert(t.vert(adj.counit.at(a)))),
        cache(lambda s: r.cell(t.cell(adj.counit.cell(s)))),
    )
    oplax = MonadMorphism(f"(−·1,ε̂_{T.name})", "oplax", induced, lifted, l, phi)
    lax = MonadMorphism(f"(V(1,−),V(1,{T.name}ε̂))", "lax", lifted, induced, r, psi)
    return oplax, lax


def transformation_morphism(tau: CartesianTransformation) -> MonadMorphism:
    """(id, τ): S → T on spans for a cartesian transformation τ: S ⇒ T."""
    S, T = lift_to_span(tau.source), lift_to_span(tau.target)
    Id = identity_functor(S.dc)

    def cell(p: Span) -> Cell:
        return Cell(S.hcell(p), T.hcell(p), tau.at(p.dom), tau.at(p.cod), tau.at(p.apex), f"{tau.name}_{p.name}")

    phi = VerticalTransformation(tau.name, compose_functors(Id, S.functor), compose_functors(T.functor, Id), tau.at, cache(cell))
    return MonadMorphism(f"(id,{tau.name})", "oplax", S, T, Id, phi)


def _label(x) -> str:
    return getattr(x, "name", "?")


def check_monad(M: LaxMonad, samples: Samples, depth: int = 3, functor_checks: bool = True) -> Report:
    """Functor coherence, naturality of e and m, and the monad laws on 0-cells and 1-cells."""
    dc, T = M.dc, M.functor
    report = Report(f"monad {M.name} on {dc.name}", depth=depth)
    if functor_checks:
        report.extend(check_lax_functor(T, samples, depth), "T: ")
        report.extend(check_vertical_trans(M.unit, samples, depth), "e: ")
        report.extend(check_vertical_trans(M.mult, samples, depth), "m: ")
    for x in samples.objects:
        Tx = T.obj(x)
        ident = dc.vid(Tx)
        bad = dc.vdiff(dc.vcomp(M.m(x), T.vert(M.e(x))), ident, depth)
        report.record("m∘Te = id", bad is None, _label(x), bad)
        bad = dc.vdiff(dc.vcomp(M.m(x), M.e(Tx)), ident, depth)
        report.record("m∘eT = id", bad is None, _label(x), bad)
        bad = dc.vdiff(dc.vcomp(M.m(x), T.vert(M.m(x))), dc.vcomp(M.m(x), M.m(Tx)), depth)
        report.record("m∘Tm = m∘mT", bad is None, _label(x), bad)
    for p in samples.hcells:
        Tp = T.hcell(p)
        compare(report, dc, "m∘Te = id on 1-cells", _label(p), lambda: dc.vcomp_cell(M.mult.cell(p), T.cell(M.unit.cell(p))), lambda: dc.cell_id(Tp), depth)
        compare(report, dc, "m∘eT = id on 1-cells", _label(p), lambda: dc.vcomp_cell(M.mult.cell(p), M.unit.cell(Tp)), lambda: dc.cell_id(Tp), depth)
        compare(
            report, dc, "m∘Tm = m∘mT on 1-cells", _label(p),
            lambda: dc.vcomp_cell(M.mult.cell(p), T.cell(M.mult.cell(p))),
            lambda: dc.vcomp_cell(M.mult.cell(p), M.mult.cell(Tp)),
            depth,
        )
    logger.info("%s: %d checks, passed=%s", report.title, len(report.results), report.passed)
    return report


def check_monad_morphism(mm: MonadMorphism, samples: Samples, depth: int = 3, naturality: bool = True) -> Report:
    """The unit and multiplication coherence of a monad (op)lax morphism."""
    F = mm.functor
    E = F.target
    report = Report(f"{mm.orientation} monad morphism {mm.name}", depth=depth)
    if naturality:
        report.extend(check_vertical_trans(mm.cell, samples, depth), "cell: ")
    c = mm.cell
    if mm.is_lax:
        # ψ: S∘G ⇒ G∘T with T = source, S = target
        T, S = mm.source, mm.target
        for x in samples.objects:
            Gx = F.obj(x)
            bad = E.vdiff(E.vcomp(c.at(x), S.e(Gx)), F.vert(T.e(x)), depth)
            report.record("unit: ψ∘eG = Ge", bad is None, _label(x), bad)
            bad = E.vdiff(
                E.vcomp(c.at(x), S.m(Gx)),
                E.vcomp(F.vert(T.m(x)), E.vcomp(c.at(T.obj(x)), S.vert(c.at(x)))),
                depth,
            )
            report.record("mult: ψ∘mG = Gm∘ψT∘Sψ", bad is None, _label(x), bad)
        for p in samples.hcells:
            Gp = F.hcell(p)
            compare(
                report, E, "unit on 1-cells", _label(p),
                lambda: E.vcomp_cell(c.cell(p), S.unit.cell(Gp)),
                lambda: F.cell(T.unit.cell(p)),
                depth,
            )
            compare(
                report, E, "mult on 1-cells", _label(p),
                lambda: E.vcomp_cell(c.cell(p), S.mult.cell(Gp)),
                lambda: E.vchain(F.cell(T.mult.cell(p)), c.cell(T.hcell(p)), S.cell(c.cell(p))),
                depth,
            )
    else:
        # φ: F∘S ⇒ T∘F with S = source, T = target
        S, T = mm.source, mm.target
        for x in samples.objects:
            Fx = F.obj(x)
            bad = E.vdiff(E.vcomp(c.at(x), F.vert(S.e(x))), T.e(Fx), depth)
            report.record("unit: φ∘Fe = eF", bad is None, _label(x), bad)
            bad = E.vdiff(
                E.vcomp(c.at(x), F.vert(S.m(x))),
                E.vcomp(T.m(Fx), E.vcomp(T.vert(c.at(x)), c.at(S.obj(x)))),
                depth,
            )
            report.record("mult: φ∘Fm = mF∘Tφ∘φS", bad is None, _label(x), bad)
        for p in samples.hcells:
            Fp = F.hcell(p)
            compare(
                report, E, "unit on 1-cells", _label(p),
                lambda: E.vcomp_cell(c.cell(p), F.cell(S.unit.cell(p))),
                lambda: T.unit.cell(Fp),
                depth,
            )
            compare(
                report, E, "mult on 1-cells", _label(p),
                lambda: E.vcomp_cell(c.cell(p), F.cell(S.mult.cell(p))),
                lambda: E.vchain(T.mult.cell(Fp), T.cell(c.cell(p)), c.cell(S.hcell(p))),
                depth,
            )
    logger.info("%s: %d checks, passed=%s", report.title, len(report.results), report.passed)
    return report


# schema


def _operad_from_spec(data: Mapping[str, Any]) -> Operad:
    kind = data.get("operad", "terminal")
    if kind == "terminal":
        return terminal_operad()
    if kind == "cyclic":
        return cyclic_operad(int(data.get("order", 2)))
    if kind == "table":
        table = {}
        for entry in data.get("compose", []):
            try:
                o, children, value = entry
            except (TypeError, ValueError):
                raise ParseError("operad compose entries are [op, [children], result]", {"entry": entry}) from None
            table[(o, tuple(children))] = value
        return table_operad(data.get("name", "O"), {int(n): ls for n, ls in data.get("arities", {}).items()}, data.get("unit"), table)
    raise ParseError(f"unknown operad {kind!r}", {"known": ["terminal", "cyclic", "table"]})


def monad_from_spec(data: Mapping[str, Any], backend: Optional[Backend] = None) -> CartesianMonad:
    """Build a backend monad from ``{"monad": tag, ...}``."""
    if backend is None:
        backend = get_backend(data.get("backend", "finset"))
    tag = data.get("monad")
    if tag == "identity":
        return IdentityMonad(backend)
    if tag == "free_monoid":
        return FreeMonoidMonad(backend)
    if tag == "monoid_product":
        spec = data.get("monoid", {})
        if "cyclic" in spec:
            return ProductMonad(backend, cyclic_group(int(spec["cyclic"])))
        els = spec.get("elements", [])
        rows = spec.get("table", [])
        try:
            table = {(a, b): rows[i][j] for i, a in enumerate(els) for j, b in enumerate(els)}
        except IndexError:
            raise IncompleteTable("monoid table is not square", {"elements": len(els)}) from None
        return ProductMonad(backend, finite_monoid(spec.get("name", "M"), els, spec.get("unit"), table))
    if tag == "operadic":
        return OperadicMonad(backend, _operad_from_spec(data))
    if tag == "free_category":
        return FreeCategoryMonad(backend)
    raise ParseError(f"unknown monad {tag!r}", {"known": ["identity", "free_monoid", "monoid_product", "operadic", "free_category"]})


_SHARED: dict = {}


def shared_monad(tag: str, backend: Backend) -> CartesianMonad:
    """One instance per (tag, backend), so structures built separately share their monad."""
    key = (tag, backend.name)
    if key not in _SHARED:
        _SHARED[key] = monad_from_spec({"monad": tag}, backend)
    return _SHARED[key]
