"""Finite lextensive backends: presheaves on a finite shape.

FinSet has one sort, FinSet² two sorts and no operations, FinGrph the sorts V, E with
src, tgt: E → V. Objects are families of carriers, maps are families of fibered maps.
"""
import logging
import weakref
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Mapping, Optional, Sequence

from .carriers import (
    EMPTY,
    Carrier,
    Element,
    FiberedMap,
    FiniteObject,
    LazyObject,
    compose as compose_maps,
    constant,
    dependent_sum,
    encode,
    filtered,
    finite_or_lazy,
    first_disagreement,
    identity as identity_map,
    image_of,
    product_carrier,
    same_carrier,
    search,
    tabulated,
    union_of,
)
from .errors import (
    BoundsExceeded,
    FibreNotPullback,
    IndexNotPullback,
    InfinitePoints,
    MixedBackends,
    NonComposableCospan,
    ParseError,
    UncomputablePullback,
)
from .reports import Report

logger = logging.getLogger(__name__)

# depth used when a frame compatibility test has to look inside lazy carriers
PROBE_DEPTH = 3


@dataclass(frozen=True)
class Operation:
    name: str
    source: str
    target: str


@dataclass(frozen=True, eq=False)
class VObject:
    backend: "Backend"
    parts: Mapping[str, Carrier]
    ops: Mapping[str, FiberedMap]
    name: str = "V"

    def carrier(self, sort: str) -> Carrier:
        return self.parts[sort]

    def op(self, name: str) -> FiberedMap:
        return self.ops[name]

    @property
    def is_finite(self) -> bool:
        return all(c.is_finite for c in self.parts.values())

    def size(self, depth: int = 0) -> dict:
        return {s: len(c.enumerate(depth)) for s, c in self.parts.items()}


@dataclass(frozen=True, eq=False)
class VMap:
    dom: VObject
    cod: VObject
    comps: Mapping[str, FiberedMap]
    name: str = "f"

    def at(self, sort: str) -> FiberedMap:
        return self.comps[sort]

    def __call__(self, sort: str, el: Element) -> Element:
        return self.comps[sort](el)

    @property
    def fibered(self) -> bool:
        return all(c.fibered for c in self.comps.values())


@dataclass(frozen=True, eq=False)
class Pullback:
    """Apex elements are pairs ``(b, a)``: proj0 lands in B, proj1 in A."""

    f: VMap
    g: VMap
    apex: VObject
    proj1: VMap
    proj0: VMap

    def mediate(self, u: VMap, v: VMap, depth: int = PROBE_DEPTH) -> VMap:
        backend = self.apex.backend
        bad = backend.maps_agree(backend.compose(self.f, u), backend.compose(self.g, v), depth)
        if bad is not None:
            raise NonComposableCospan("cone does not commute", bad)
        comps = {
            s: FiberedMap(
                u.dom.parts[s],
                self.apex.parts[s],
                lambda z, s=s: (v(s, z), u(s, z)),
                name="<v,u>",
            )
            for s in backend.sorts
        }
        return VMap(u.dom, self.apex, comps, name="<v,u>")


@dataclass(frozen=True, eq=False)
class Coproduct:
    """Elements of the sum are ``(i, x)`` with ``i`` the position of the summand."""

    parts: tuple
    total: VObject
    injections: tuple

    def cotuple(self, maps: Sequence[VMap], target: Optional[VObject] = None) -> VMap:
        backend = self.total.backend
        if len(maps) != len(self.parts):
            raise MixedBackends("cotuple needs one map per summand")
        if target is None:
            if not maps:
                raise MixedBackends("empty cotuple needs an explicit target")
            target = maps[0].cod
        comps = {}
        for s in backend.sorts:
            fns = [m.at(s) for m in maps]
            fiber_fn = None
            if all(f.fibered for f in fns):

                def fiber_fn(z, fns=fns, s=s):
                    return union_of(
                        "[..]^-1",
                        FiniteObject("idx", tuple(range(len(fns)))),
                        lambda i: image_of("inj", fns[i].fiber(z), lambda x, i=i: (i, x), lambda t: True),
                        lambda t: self.total.parts[s].contains(t) and fns[t[0]](t[1]) == z,
                    )

            comps[s] = FiberedMap(
                self.total.parts[s],
                target.parts[s],
                lambda t, fns=fns: fns[t[0]](t[1]),
                fiber_fn,
                name="[..]",
            )
        return VMap(self.total, target, comps, name="[..]")


class Backend:
    def __init__(self, name: str, sorts: Sequence[str], operations: Sequence[Operation], title: str):
        self.name = name
        self.title = title
        self.sorts = tuple(sorts)
        self.operations = tuple(operations)
        targets = {op.target for op in self.operations}
        self.roots = tuple(s for s in self.sorts if s not in targets)
        self._deriving = {}
        for op in self.operations:
            if op.source in self.roots:
                self._deriving.setdefault(op.target, op)
        self._copowers: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()
        self._points: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()
        self._terminal: Optional[VObject] = None

    def __repr__(self) -> str:
        return f"Backend({self.name})"

    @property
    def single_sort(self) -> bool:
        return len(self.sorts) == 1

    # objects and maps

    def obj(self, parts: Mapping[str, Carrier], ops: Optional[Mapping[str, FiberedMap]] = None, name: str = "V") -> VObject:
        if set(parts) != set(self.sorts):
            raise ParseError(f"{self.name} objects need sorts {list(self.sorts)}", {"got": sorted(parts)})
        ops = dict(ops or {})
        if set(ops) != {op.name for op in self.operations}:
            raise ParseError(
                f"{self.name} objects need operations {[op.name for op in self.operations]}",
                {"got": sorted(ops)},
            )
        return VObject(self, dict(parts), ops, name)

    def vmap(self, dom: VObject, cod: VObject, comps: Mapping[str, FiberedMap], name: str = "f") -> VMap:
        if dom.backend is not self or cod.backend is not self:
            raise MixedBackends("map between objects of another backend")
        return VMap(dom, cod, dict(comps), name)

    def identity(self, v: VObject) -> VMap:
        return VMap(v, v, {s: identity_map(v.parts[s]) for s in self.sorts}, name=f"id_{v.name}")

    def compose(self, g: VMap, f: VMap) -> VMap:
        return VMap(f.dom, g.cod, {s: compose_maps(g.at(s), f.at(s)) for s in self.sorts}, name=f"{g.name}∘{f.name}")

    def naturality_defect(self, f: VMap, depth: int = PROBE_DEPTH) -> Optional[dict]:
        """First element where ``f`` fails to commute with an operation."""
        for op in self.operations:
            for x in f.dom.parts[op.source].enumerate(depth):
                if f(op.target, f.dom.op(op.name)(x)) != f.cod.op(op.name)(f(op.source, x)):
                    return {"operation": op.name, "element": encode(x)}
        return None

    def same_object(self, a: VObject, b: VObject, depth: int = PROBE_DEPTH) -> bool:
        return a is b or all(same_carrier(a.parts[s], b.parts[s], depth) for s in self.sorts)

    def maps_agree(self, f: VMap, g: VMap, depth: int = PROBE_DEPTH) -> Optional[dict]:
        for s in self.sorts:
            x = first_disagreement(f.at(s), g.at(s), depth)
            if x is not None:
                return {"sort": s, "element": encode(x), "left": encode(f(s, x)), "right": encode(g(s, x))}
        return None

    # limits and colimits

    def terminal(self) -> VObject:
        if self._terminal is None:
            point = FiniteObject("1", ("*",))
            self._terminal = VObject(
                self,
                {s: point for s in self.sorts},
                {op.name: constant(point, point, "*", name=op.name) for op in self.operations},
                name="1",
            )
        return self._terminal

    def initial(self) -> VObject:
        return VObject(
            self,
            {s: EMPTY for s in self.sorts},
            {op.name: FiberedMap(EMPTY, EMPTY, lambda x: x, name=op.name) for op in self.operations},
            name="0",
        )

    def to_terminal(self, v: VObject) -> VMap:
        one = self.terminal()
        return VMap(v, one, {s: constant(v.parts[s], one.parts[s], "*") for s in self.sorts}, name="!")

    def product(self, a: VObject, b: VObject, name: Optional[str] = None) -> VObject:
        """Binary product with elements ``(x, y)``."""
        parts = {s: product_carrier(f"{a.name}×{b.name}", [a.parts[s], b.parts[s]]) for s in self.sorts}
        ops = {}
        for op in self.operations:
            fa, fb = a.op(op.name), b.op(op.name)
            fiber_fn = None
            if fa.fibered and fb.fibered:

                def fiber_fn(t, fa=fa, fb=fb):
                    return product_carrier("×^-1", [fa.fiber(t[0]), fb.fiber(t[1])])

            ops[op.name] = FiberedMap(
                parts[op.source],
                parts[op.target],
                lambda t, fa=fa, fb=fb: (fa(t[0]), fb(t[1])),
                fiber_fn,
                name=op.name,
            )
        return VObject(self, parts, ops, name or f"{a.name}×{b.name}")

    def pullback(self, f: VMap, g: VMap) -> Pullback:
        if f.cod is not g.cod and not self.same_object(f.cod, g.cod):
            raise NonComposableCospan(
                "pullback legs have different codomains", {"f": f.name, "g": g.name}
            )
        A, B = f.dom, g.dom
        parts = {s: pair_carrier(f"{B.name}×{A.name}", f.at(s), g.at(s)) for s in self.sorts}
        ops = {}
        for op in self.operations:
            oa, ob = A.op(op.name), B.op(op.name)
            fs, gs = f.at(op.source), g.at(op.source)
            fiber_fn = None
            if oa.fibered and ob.fibered:

                def fiber_fn(t, oa=oa, ob=ob, fs=fs, gs=gs, src=parts[op.source]):
                    return finite_or_lazy(
                        "pb^-1",
                        [ob.fiber(t[0]), oa.fiber(t[1])],
                        lambda d: (
                            (b, a)
                            for b in ob.fiber(t[0]).enumerate(d)
                            for a in oa.fiber(t[1]).enumerate(d)
                            if fs(a) == gs(b)
                        ),
                        lambda p: src.contains(p) and ob(p[0]) == t[0] and oa(p[1]) == t[1],
                    )

            ops[op.name] = FiberedMap(
                parts[op.source],
                parts[op.target],
                lambda t, oa=oa, ob=ob: (ob(t[0]), oa(t[1])),
                fiber_fn,
                name=op.name,
            )
        apex = VObject(self, parts, ops, name=f"{B.name}×_{f.cod.name}{A.name}")
        proj1 = {}
        proj0 = {}
        for s in self.sorts:
            fs, gs, P = f.at(s), g.at(s), parts[s]
            fib1 = None
            if gs.fibered:

                def fib1(a, fs=fs, gs=gs, P=P):
                    return image_of("π1^-1", gs.fiber(fs(a)), lambda b: (b, a), P.contains)

            fib0 = None
            if fs.fibered:

                def fib0(b, fs=fs, gs=gs, P=P):
                    return image_of("π0^-1", fs.fiber(gs(b)), lambda a: (b, a), P.contains)

            proj1[s] = FiberedMap(P, A.parts[s], lambda t: t[1], fib1, name="π1")
            proj0[s] = FiberedMap(P, B.parts[s], lambda t: t[0], fib0, name="π0")
        return Pullback(f, g, apex, VMap(apex, A, proj1, "π1"), VMap(apex, B, proj0, "π0"))

    def coproduct(self, parts: Sequence[VObject]) -> Coproduct:
        parts = tuple(parts)
        if any(p.backend is not self for p in parts):
            raise MixedBackends("coproduct of objects from different backends")
        index = FiniteObject("idx", tuple(range(len(parts))))
        total = self.sum_over("+".join(p.name for p in parts) or "0", index, lambda i: parts[i])
        injections = []
        for i, p in enumerate(parts):
            comps = {
                s: FiberedMap(
                    p.parts[s],
                    total.parts[s],
                    lambda x, i=i: (i, x),
                    lambda t, i=i, s=s: FiniteObject("ι^-1", (t[1],)) if t[0] == i else EMPTY,
                    name=f"ι{i}",
                )
                for s in self.sorts
            }
            injections.append(VMap(p, total, comps, name=f"ι{i}"))
        return Coproduct(parts, total, tuple(injections))

    def sum_over(self, name: str, index: Carrier, family: Callable[[Element], VObject]) -> VObject:
        """Σ_{i ∈ index} family(i), elements ``(i, x)``; lazy when the index or a summand is."""
        cache: dict = {}

        def fam(i):
            if i not in cache:
                cache[i] = family(i)
            return cache[i]

        parts = {
            s: dependent_sum(
                name,
                index,
                lambda i, s=s: fam(i).parts[s],
                lambda t, s=s: isinstance(t, tuple) and len(t) == 2 and index.contains(t[0]) and fam(t[0]).parts[s].contains(t[1]),
            )
            for s in self.sorts
        }
        ops = {}
        for op in self.operations:
            ops[op.name] = FiberedMap(
                parts[op.source],
                parts[op.target],
                lambda t, n=op.name: (t[0], fam(t[0]).op(n)(t[1])),
                lambda t, n=op.name, src=parts[op.source]: image_of(
                    "Σ^-1", fam(t[0]).op(n).fiber(t[1]), lambda x, i=t[0]: (i, x), src.contains
                ),
                name=op.name,
            )
        return VObject(self, parts, ops, name)

    # copower ⊣ points

    def copower(self, X: Carrier) -> VObject:
        if X not in self._copowers:
            self._copowers[X] = VObject(
                self,
                {s: X for s in self.sorts},
                {op.name: identity_map(X) for op in self.operations},
                name=f"{X.name}·1",
            )
        return self._copowers[X]

    def copower_map(self, f: FiberedMap) -> VMap:
        return VMap(self.copower(f.dom), self.copower(f.cod), {s: f for s in self.sorts}, name=f"{f.name}·1")

    def component(self, p: Element, sort: str) -> Element:
        if self.single_sort:
            return p
        return p[self.sorts.index(sort)]

    def make_point(self, comps: Mapping[str, Element]) -> Element:
        if self.single_sort:
            return comps[self.sorts[0]]
        return tuple(comps[s] for s in self.sorts)

    def _assemble(self, v: VObject, roots: Mapping[str, Element]) -> Optional[Element]:
        values = dict(roots)
        for sort, op in self._deriving.items():
            values[sort] = v.op(op.name)(values[op.source])
        for op in self.operations:
            if v.op(op.name)(values[op.source]) != values[op.target]:
                return None
        return self.make_point(values)

    def _is_point(self, v: VObject, p: Element) -> bool:
        if self.single_sort:
            return v.parts[self.sorts[0]].contains(p)
        if not isinstance(p, tuple) or len(p) != len(self.sorts):
            return False
        if not all(v.parts[s].contains(self.component(p, s)) for s in self.sorts):
            return False
        return all(
            v.op(op.name)(self.component(p, op.source)) == self.component(p, op.target)
            for op in self.operations
        )

    def points(self, v: VObject) -> Carrier:
        """Global elements ``1 → v``; in FinGrph these are the loops ``(vertex, edge)``."""
        if self.single_sort:
            return v.parts[self.sorts[0]]
        if v not in self._points:

            def build(d):
                for combo in product(*(v.parts[r].enumerate(d) for r in self.roots)):
                    p = self._assemble(v, dict(zip(self.roots, combo)))
                    if p is not None:
                        yield p

            self._points[v] = finite_or_lazy(
                f"pt({v.name})", [v.parts[r] for r in self.roots], build, lambda p: self._is_point(v, p)
            )
        return self._points[v]

    def finite_points(self, v: VObject) -> FiniteObject:
        pts = self.points(v)
        if not pts.is_finite:
            raise InfinitePoints(f"points of {v.name} are not finite", {"object": v.name})
        return pts

    def points_map(self, f: VMap) -> FiberedMap:
        P, Q = self.points(f.dom), self.points(f.cod)

        def forward(p):
            return self.make_point({s: f(s, self.component(p, s)) for s in self.sorts})

        fiber_fn = None
        if all(f.at(r).fibered for r in self.roots):

            def fiber_fn(q):
                fibres = [f.at(r).fiber(self.component(q, r)) for r in self.roots]

                def build(d):
                    for combo in product(*(c.enumerate(d) for c in fibres)):
                        p = self._assemble(f.dom, dict(zip(self.roots, combo)))
                        if p is not None and forward(p) == q:
                            yield p

                return finite_or_lazy("pt^-1", fibres, build, lambda p: P.contains(p) and forward(p) == q)

        return FiberedMap(P, Q, forward, fiber_fn, name=f"pt({f.name})")

    def counit_obj(self, v: VObject) -> VMap:
        """ε̂_v : pt(v)·1 → v, sending a point to its component at each sort."""
        P = self.points(v)
        comps = {}
        for s in self.sorts:
            if self.roots == (s,):

                def fiber_fn(x, v=v, s=s):
                    p = self._assemble(v, {s: x}) if v.parts[s].contains(x) else None
                    return FiniteObject("ε̂^-1", (p,) if p is not None else ())

            else:

                def fiber_fn(x, s=s):
                    return filtered("ε̂^-1", P, lambda p: self.component(p, s) == x)

            comps[s] = FiberedMap(P, v.parts[s], lambda p, s=s: self.component(p, s), fiber_fn, name="ε̂")
        return VMap(self.copower(P), v, comps, name=f"ε̂_{v.name}")

    def unit_obj(self, X: Carrier) -> FiberedMap:
        """η̂_X : X → pt(X·1), the constant point at each element."""
        target = self.points(self.copower(X))

        def fiber_fn(p):
            comps = {self.component(p, s) for s in self.sorts}
            if len(comps) == 1:
                (x,) = comps
                if X.contains(x):
                    return FiniteObject("η̂^-1", (x,))
            return EMPTY

        return FiberedMap(X, target, lambda x: self.make_point({s: x for s in self.sorts}), fiber_fn, name=f"η̂_{X.name}")

    def is_discrete(self, v: VObject, depth: int) -> Report:
        """ε̂_v invertible, checked elementwise (exactly when v is finite)."""
        report = Report(f"is_discrete({v.name})", depth=depth, exact=v.is_finite)
        counit = self.counit_obj(v)
        for s in self.sorts:
            witness = None
            for x in v.parts[s].enumerate(depth):
                n = len(search(counit.at(s).fiber(x), lambda p: True, depth))
                if n != 1:
                    witness = {"sort": s, "element": encode(x), "points": n}
                    break
            report.record(f"counit bijective on {s}", witness is None, v.name, witness)
        return report

    def connectedness_probe(self, parts: Sequence[VObject], depth: int = PROBE_DEPTH) -> Report:
        """pt(Σ vᵢ) ≅ Σ pt(vᵢ), compared by size."""
        report = Report("connectedness", depth=depth, exact=all(p.is_finite for p in parts))
        total = self.coproduct(parts).total
        lhs = len(self.points(total).enumerate(depth))
        rhs = sum(len(self.points(p).enumerate(depth)) for p in parts)
        report.record(
            "points preserve coproducts",
            lhs == rhs,
            "+".join(p.name for p in parts),
            {"points_of_sum": lhs, "sum_of_points": rhs},
        )
        return report


def pair_carrier(name: str, f: FiberedMap, g: FiberedMap) -> Carrier:
    """Pullback of ``f: A → C`` and ``g: B → C`` as pairs ``(b, a)``."""
    A, B = f.dom, g.dom

    def member(t):
        return (
            isinstance(t, tuple)
            and len(t) == 2
            and B.contains(t[0])
            and A.contains(t[1])
            and g(t[0]) == f(t[1])
        )

    def over_a(d):
        for a in A.enumerate(d):
            for b in g.fiber(f(a)).enumerate(d):
                yield (b, a)

    def over_b(d):
        for b in B.enumerate(d):
            for a in f.fiber(g(b)).enumerate(d):
                yield (b, a)

    if A.is_finite and g.fibered:
        fibres = [g.fiber(f(a)) for a in A.elements]
        if all(c.is_finite for c in fibres):
            return FiniteObject(name, tuple((b, a) for a, c in zip(A.elements, fibres) for b in c.elements))
        return LazyObject(name, member, over_a)
    if B.is_finite and f.fibered:
        fibres = [f.fiber(g(b)) for b in B.elements]
        if all(c.is_finite for c in fibres):
            return FiniteObject(name, tuple((b, a) for b, c in zip(B.elements, fibres) for a in c.elements))
        return LazyObject(name, member, over_b)
    if g.fibered:
        return LazyObject(name, member, over_a)
    if f.fibered:
        return LazyObject(name, member, over_b)
    raise UncomputablePullback(
        "both legs are lazy and neither is fibered", {"f": f.name, "g": g.name}
    )


def square_defect(
    top: FiberedMap,
    left: FiberedMap,
    right: FiberedMap,
    bottom: FiberedMap,
    depth: int,
) -> Optional[dict]:
    """None when the square ``right∘top = bottom∘left`` is a pullback (up to ``depth``)."""
    P = top.dom
    for p in P.enumerate(depth):
        if right(top(p)) != bottom(left(p)):
            return {"reason": "square does not commute", "element": encode(p)}
    index: dict = {}
    if not top.fibered and not left.fibered:
        for p in P.enumerate(depth):
            index.setdefault((left(p), top(p)), []).append(p)

    def preimages(y, x):
        if top.fibered:
            return search(top.fiber(x), lambda p: left(p) == y, depth)
        if left.fibered:
            return search(left.fiber(y), lambda p: top(p) == x, depth)
        return index.get((y, x), [])

    targets = list(pair_carrier("pb", right, bottom).enumerate(depth))
    targets += [(left(p), top(p)) for p in P.enumerate(depth)]
    for y, x in dict.fromkeys(targets):
        found = preimages(y, x)
        if len(found) != 1:
            return {
                "reason": "comparison map is not bijective",
                "pair": encode((y, x)),
                "preimages": len(found),
            }
    return None


def vsquare_defect(top: VMap, left: VMap, right: VMap, bottom: VMap, depth: int) -> Optional[dict]:
    for s in top.dom.backend.sorts:
        bad = square_defect(top.at(s), left.at(s), right.at(s), bottom.at(s), depth)
        if bad is not None:
            return {"sort": s, **bad}
    return None


@dataclass
class FamilySquare:
    """A commutative square of families: index maps f, g, h, k and fibre maps per index."""

    backend: Backend
    W: FiniteObject
    X: FiniteObject
    Y: FiniteObject
    Z: FiniteObject
    f: FiberedMap
    g: FiberedMap
    h: FiberedMap
    k: FiberedMap
    a: dict
    b: dict
    c: dict
    d: dict
    f_hat: dict
    g_hat: dict
    h_hat: dict
    k_hat: dict
    summed: dict = field(default_factory=dict)


def _summed_map(backend: Backend, src_index, tgt_index, index_map, hats, src_sum, tgt_sum) -> VMap:
    position = {x: i for i, x in enumerate(tgt_index.elements)}
    comps = {
        s: FiberedMap(
            src_sum.parts[s],
            tgt_sum.parts[s],
            lambda t, s=s: (
                position[index_map(src_index.elements[t[0]])],
                hats[src_index.elements[t[0]]](s, t[1]),
            ),
            name="Σ",
        )
        for s in backend.sorts
    }
    return VMap(src_sum, tgt_sum, comps, name="Σ")


def pb_index_coprod_check(data: FamilySquare, depth: int = PROBE_DEPTH) -> Report:
    """A pullback-indexed family of pullback squares sums to a pullback square."""
    backend = data.backend
    report = Report("pb_index_coprod", depth=depth)
    bad = square_defect(data.f, data.g, data.h, data.k, depth)
    if bad is not None:
        raise IndexNotPullback("index square is not a pullback", bad)
    for w in data.W.elements:
        bad = vsquare_defect(
            data.f_hat[w], data.g_hat[w], data.h_hat[data.f(w)], data.k_hat[data.g(w)], depth
        )
        if bad is not None:
            raise FibreNotPullback("fibre square is not a pullback", {"index": encode(w), **bad})
        report.record("fibre square", True, encode(w))
    sums = {
        name: backend.coproduct([fam[i] for i in idx.elements])
        for name, fam, idx in (
            ("a", data.a, data.W),
            ("b", data.b, data.X),
            ("c", data.c, data.Y),
            ("d", data.d, data.Z),
        )
    }
    top = _summed_map(backend, data.W, data.X, data.f, data.f_hat, sums["a"].total, sums["b"].total)
    left = _summed_map(backend, data.W, data.Y, data.g, data.g_hat, sums["a"].total, sums["c"].total)
    right = _summed_map(backend, data.X, data.Z, data.h, data.h_hat, sums["b"].total, sums["d"].total)
    bottom = _summed_map(backend, data.Y, data.Z, data.k, data.k_hat, sums["c"].total, sums["d"].total)
    bad = vsquare_defect(top, left, right, bottom, depth)
    report.record("coproduct square is a pullback", bad is None, "Σ", bad)
    pb = backend.pullback(right, bottom)
    mediator = pb.mediate(top, left, depth)
    report.data["mediator"] = {
        s: {encode(x): encode(y) for x, y in mediator.at(s).table(depth).items()} for s in backend.sorts
    }
    data.summed = {"top": top, "left": left, "right": right, "bottom": bottom}
    return report


FINSET = Backend("finset", ["el"], [], "FinSet")
FINSET2 = Backend("finset2", ["0", "1"], [], "FinSet×FinSet")
FINGRPH = Backend(
    "fingrph",
    ["V", "E"],
    [Operation("src", "E", "V"), Operation("tgt", "E", "V")],
    "FinGrph",
)

BACKENDS = {b.name: b for b in (FINSET, FINSET2, FINGRPH)}


def get_backend(name: str) -> Backend:
    try:
        return BACKENDS[name]
    except KeyError:
        raise ParseError(f"unknown backend {name!r}", {"known": sorted(BACKENDS)}) from None


def finite_object(backend: Backend, elements: Mapping[str, Sequence[Element]], ops: Optional[Mapping[str, Mapping]] = None, name: str = "V") -> VObject:
    """Convenience constructor from element lists and operation tables."""
    parts = {s: FiniteObject(f"{name}.{s}", tuple(elements.get(s, ()))) for s in backend.sorts}
    maps = {}
    for op in backend.operations:
        table = dict((ops or {}).get(op.name, {}))
        maps[op.name] = tabulated(parts[op.source], parts[op.target], table, name=op.name)
    return backend.obj(parts, maps, name)


def graph(vertices: Sequence[Element], edges: Mapping[Element, tuple], name: str = "G") -> VObject:
    """A finite graph from ``{edge: (source, target)}``."""
    return finite_object(
        FINGRPH,
        {"V": list(vertices), "E": list(edges)},
        {"src": {e: st[0] for e, st in edges.items()}, "tgt": {e: st[1] for e, st in edges.items()}},
        name,
    )


def finite_map(dom: VObject, cod: VObject, tables: Mapping[str, Mapping], name: str = "f") -> VMap:
    backend = dom.backend
    comps = {}
    for s in backend.sorts:
        if not dom.parts[s].is_finite:
            raise ParseError("tabulated maps need a finite domain", {"sort": s})
        comps[s] = tabulated(dom.parts[s], cod.parts[s], dict(tables.get(s, {})), name=name)
    f = backend.vmap(dom, cod, comps, name)
    bad = backend.naturality_defect(f)
    if bad is not None:
        raise ParseError(f"map {name} does not commute with the structure", bad)
    return f


def finset(elements: Sequence[Element], name: str = "X") -> VObject:
    return finite_object(FINSET, {"el": list(elements)}, name=name)


def enumerate_maps(
    dom: VObject,
    cod: VObject,
    allowed: Optional[Callable[[str, Element], Sequence[Element]]] = None,
    limit: int = 200_000,
) -> list:
    """Every backend map ``dom → cod`` (finite objects), optionally restricting each element's image."""
    backend = dom.backend
    if not (dom.is_finite and cod.is_finite):
        raise InfinitePoints("map enumeration needs finite objects", {"dom": dom.name, "cod": cod.name})
    choices = {}
    total = 1
    for s in backend.sorts:
        per_el = [
            list(allowed(s, x)) if allowed else list(cod.parts[s].elements)
            for x in dom.parts[s].elements
        ]
        for c in per_el:
            total *= len(c)
        if total > limit:
            raise BoundsExceeded("too many candidate maps", {"dom": dom.name, "cod": cod.name, "limit": limit})
        choices[s] = [dict(zip(dom.parts[s].elements, combo)) for combo in product(*per_el)]
    found = []
    for tables in product(*(choices[s] for s in backend.sorts)):
        table = dict(zip(backend.sorts, tables))
        if all(
            table[op.target][dom.op(op.name)(x)] == cod.op(op.name)(table[op.source][x])
            for op in backend.operations
            for x in dom.parts[op.source].elements
        ):
            comps = {s: tabulated(dom.parts[s], cod.parts[s], table[s], name="h") for s in backend.sorts}
            found.append(VMap(dom, cod, comps, name="h"))
    return found
