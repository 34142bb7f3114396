"""The copower ⊣ points conjunction between V-Mat and Span(V).

``−·1`` sends a matrix ``p: X ↛ Y`` to ``X·1 ← Σ p(x, y) → Y·1`` (elements ``((x, y), m)``)
and is normal oplax, strong on extensive backends. ``V(1, −)`` sends a span to the matrix of
its fibers over pairs of points; its lax structure is the doctrinal mate of the copower's.
"""
import logging
from dataclasses import dataclass, field
from itertools import product

from .backends import PROBE_DEPTH, Backend, VMap, VObject, enumerate_maps
from .carriers import (
    EMPTY,
    Carrier,
    FiberedMap,
    FiniteObject,
    LazyObject,
    dependent_sum,
    encode,
    filtered,
    image_of,
    product_carrier,
    tabulated,
)
from .doublecat import Cell, LaxFunctor, VerticalTransformation, as_lax, compare, compose_functors, identity_functor
from .matrices import MatDC, Matrix, matrix_from_table
from .reports import Report
from .sampling import random_object, random_set
from .spans import Span, SpanDC

logger = logging.getLogger(__name__)


def _pairs(p: Matrix) -> Carrier:
    return dependent_sum(
        f"pairs({p.name})",
        p.dom,
        p.support,
        lambda t: isinstance(t, tuple) and len(t) == 2 and p.dom.contains(t[0]) and p.support(t[0]).contains(t[1]),
    )


@dataclass(eq=False)
class Conjunction:
    """Both equipments over one backend, the functors between them and the adjunction cells."""

    backend: Backend
    mat: MatDC = field(init=False)
    span: SpanDC = field(init=False)
    copower: LaxFunctor = field(init=False)
    points: LaxFunctor = field(init=False)
    _counits: dict = field(default_factory=dict, repr=False)
    _units: dict = field(default_factory=dict, repr=False)
    _eta: dict = field(default_factory=dict, repr=False)
    _eps: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.mat = MatDC(self.backend)
        self.span = SpanDC(self.backend)
        self.copower = self._copower_functor()
        self.points = self._points_functor()

    # vertical components

    def unit_at(self, X: Carrier) -> FiberedMap:
        """η̂_X : X → pt(X·1)."""
        if X not in self._units:
            self._units[X] = self.backend.unit_obj(X)
        return self._units[X]

    def counit_at(self, A: VObject) -> VMap:
        """ε̂_A : pt(A)·1 → A."""
        if A not in self._counits:
            self._counits[A] = self.backend.counit_obj(A)
        return self._counits[A]

    # −·1

    def copower_span(self, p: Matrix) -> Span:
        b = self.backend
        index = _pairs(p)
        apex = b.sum_over(f"Σ{p.name}", index, lambda xy: p.entry(*xy))
        X1, Y1 = b.copower(p.dom), b.copower(p.cod)
        left, right = {}, {}
        for s in b.sorts:
            P = apex.parts[s]

            def l_fiber(x, s=s, P=P):
                return image_of(
                    "l^-1",
                    dependent_sum("l^-1", p.support(x), lambda y: p.entry(x, y).parts[s], lambda t: True),
                    lambda t, x=x: ((x, t[0]), t[1]),
                    lambda t: P.contains(t) and t[0][0] == x,
                )

            def r_fiber(y, s=s, P=P):
                over = filtered("r^-1", p.dom, lambda x: p.support(x).contains(y))
                return image_of(
                    "r^-1",
                    dependent_sum("r^-1", over, lambda x: p.entry(x, y).parts[s], lambda t: True),
                    lambda t, y=y: ((t[0], y), t[1]),
                    lambda t: P.contains(t) and t[0][1] == y,
                )

            left[s] = FiberedMap(P, X1.parts[s], lambda t: t[0][0], l_fiber, name="l")
            right[s] = FiberedMap(P, Y1.parts[s], lambda t: t[0][1], r_fiber, name="r")
        return Span(X1, Y1, apex, VMap(apex, X1, left, "l"), VMap(apex, Y1, right, "r"), f"{p.name}·1")

    def copower_cell(self, c: Cell) -> Cell:
        b, F = self.backend, self.copower
        top, bottom = F.hcell(c.top), F.hcell(c.bottom)
        f, g = c.left, c.right
        comps = {
            s: FiberedMap(
                top.apex.parts[s],
                bottom.apex.parts[s],
                lambda t, s=s: ((f(t[0][0]), g(t[0][1])), c.body(*t[0])(s, t[1])),
                name=f"{c.name}·1",
            )
            for s in b.sorts
        }
        return Cell(top, bottom, F.vert(f), F.vert(g), VMap(top.apex, bottom.apex, comps, f"{c.name}·1"), f"{c.name}·1")

    def _copower_functor(self) -> LaxFunctor:
        b, span = self.backend, self.span

        def unit(X):
            top = self.copower.hcell(self.mat.hunit(X))
            return span.iso_cell(top, span.hunit(b.copower(X)), lambda s, t: t[0][0], lambda s, x: ((x, x), "*"), f"e_{X.name}")

        def unit_inv(X):
            top = self.copower.hcell(self.mat.hunit(X))
            return span.iso_cell(span.hunit(b.copower(X)), top, lambda s, x: ((x, x), "*"), lambda s, t: t[0][0], f"e⁻¹_{X.name}")

        def split(s, t):
            # ((x, z), (y, (c, b))) ↦ (((y, z), c), ((x, y), b))
            (x, z), (y, (c, m)) = t
            return (((y, z), c), ((x, y), m))

        def join(s, t):
            ((y, z), c), ((x, _), m) = t
            return ((x, z), (y, (c, m)))

        def mult(q, p):
            F = self.copower
            return span.iso_cell(F.hcell(self.mat.hcomp(q, p)), span.hcomp(F.hcell(q), F.hcell(p)), split, join, f"m_{q.name},{p.name}")

        def mult_inv(q, p):
            F = self.copower
            return span.iso_cell(span.hcomp(F.hcell(q), F.hcell(p)), F.hcell(self.mat.hcomp(q, p)), join, split, f"m⁻¹_{q.name},{p.name}")

        return LaxFunctor(
            name="−·1",
            source=self.mat,
            target=span,
            on_obj=b.copower,
            on_vert=b.copower_map,
            on_hcell=self.copower_span,
            on_cell=self.copower_cell,
            unit=unit,
            mult=mult,
            orientation="oplax",
            flags=frozenset({"normal", "strong"}),
            unit_inv=unit_inv,
            mult_inv=mult_inv,
        )

    # V(1, −)

    def points_entry(self, s: Span, v, w) -> VObject:
        b = self.backend
        parts = {}
        for σ in b.sorts:
            lσ, rσ = s.l.at(σ), s.r.at(σ)
            wσ = b.component(w, σ)
            parts[σ] = filtered(f"{s.name}({encode(v)},{encode(w)}).{σ}", lσ.fiber(b.component(v, σ)), lambda m, rσ=rσ, wσ=wσ: rσ(m) == wσ)
        ops = {}
        for op in b.operations:
            full = s.apex.op(op.name)
            src, tgt = parts[op.source], parts[op.target]
            fiber_fn = None
            if full.fibered:

                def fiber_fn(t, full=full, src=src):
                    return filtered("op^-1", full.fiber(t), src.contains)

            ops[op.name] = FiberedMap(src, tgt, full.forward, fiber_fn, name=op.name)
        return VObject(b, parts, ops, f"{s.name}({encode(v)},{encode(w)})")

    def points_matrix(self, s: Span) -> Matrix:
        b = self.backend
        PA, PB = b.points(s.dom), b.points(s.cod)
        eps_b = self.counit_at(s.cod)

        def support(v):
            def build(d):
                for σ in b.sorts:
                    for m in s.l.at(σ).fiber(b.component(v, σ)).enumerate(d):
                        yield from eps_b.at(σ).fiber(s.r(σ, m)).enumerate(d)

            def member(w):
                entry = self.points_entry(s, v, w)
                return PB.contains(w) and any(entry.parts[σ].enumerate(PROBE_DEPTH) for σ in b.sorts)

            if s.apex.is_finite and PB.is_finite:
                return FiniteObject(f"supp({encode(v)})", tuple(dict.fromkeys(build(0))))
            return LazyObject(f"supp({encode(v)})", member, build)

        return Matrix(PA, PB, lambda v, w: self.points_entry(s, v, w), support, f"pt({s.name})")

    def points_cell(self, c: Cell) -> Cell:
        b, G = self.backend, self.points
        top, bottom = G.hcell(c.top), G.hcell(c.bottom)
        f, g = G.vert(c.left), G.vert(c.right)

        def body(v, w):
            src, tgt = top.entry(v, w), bottom.entry(f(v), g(w))
            comps = {σ: FiberedMap(src.parts[σ], tgt.parts[σ], c.body.at(σ).forward, name=c.name) for σ in b.sorts}
            return VMap(src, tgt, comps, f"pt({c.name})")

        return Cell(top, bottom, f, g, body, f"pt({c.name})")

    def _points_functor(self) -> LaxFunctor:
        b, mat, span = self.backend, self.mat, self.span

        def unit(A):
            # e^G_A = G(1_{ε̂_A} ∘ e^F_{GA}) ∘ η̂_{1_{GA}}
            F, G = self.copower, self.points
            GA = G.obj(A)
            inner = span.vcomp_cell(span.unit_cell(self.counit_at(A)), F.e(GA))
            return mat.vcomp_cell(G.cell(inner), self.unit_cell(mat.hunit(GA)))

        def mult(t, s):
            # m^G_{t,s} = G((ε̂_t · ε̂_s) ∘ m^F_{Gt,Gs}) ∘ η̂_{Gt·Gs}
            F, G = self.copower, self.points
            Gt, Gs = G.hcell(t), G.hcell(s)
            inner = span.vcomp_cell(span.hcomp_cell(self.counit_cell(t), self.counit_cell(s)), F.m(Gt, Gs))
            return mat.vcomp_cell(G.cell(inner), self.unit_cell(mat.hcomp(Gt, Gs)))

        return LaxFunctor(
            name="V(1,−)",
            source=span,
            target=mat,
            on_obj=b.points,
            on_vert=b.points_map,
            on_hcell=self.points_matrix,
            on_cell=self.points_cell,
            unit=unit,
            mult=mult,
            orientation="lax",
            flags=frozenset({"normal"}),
        )

    # adjunction 2-cells

    def unit_cell(self, p: Matrix) -> Cell:
        """η̂_p : p ⇒ V(1, p·1), ``m ↦ ((x, y), m)``."""
        if p not in self._eta:
            b, F, G = self.backend, self.copower, self.points
            target = G.hcell(F.hcell(p))
            hx, hy = self.unit_at(p.dom), self.unit_at(p.cod)

            def body(x, y):
                src, tgt = p.entry(x, y), target.entry(hx(x), hy(y))
                comps = {
                    s: FiberedMap(
                        src.parts[s],
                        tgt.parts[s],
                        lambda m, x=x, y=y: ((x, y), m),
                        lambda t, x=x, y=y, s=s: FiniteObject("η̂^-1", (t[1],)) if t[0] == (x, y) and src.parts[s].contains(t[1]) else EMPTY,
                        name="η̂",
                    )
                    for s in b.sorts
                }
                return VMap(src, tgt, comps, "η̂")

            self._eta[p] = Cell(p, target, hx, hy, body, f"η̂_{p.name}")
        return self._eta[p]

    def counit_cell(self, s: Span) -> Cell:
        """ε̂_s : V(1, s)·1 ⇒ s, ``((v, w), m) ↦ m``."""
        if s not in self._eps:
            b, F, G = self.backend, self.copower, self.points
            top = F.hcell(G.hcell(s))
            comps = {}
            for σ in b.sorts:
                lσ, rσ, P = s.l.at(σ), s.r.at(σ), top.apex.parts[σ]
                fiber_fn = None
                if lσ.fibered:

                    def fiber_fn(m, lσ=lσ, rσ=rσ, P=P, σ=σ):
                        la, ra = lσ(m), rσ(m)
                        vs = self.counit_at(s.dom).at(σ).fiber(la)
                        ws = self.counit_at(s.cod).at(σ).fiber(ra)
                        return image_of(
                            "ε̂^-1",
                            product_carrier("ε̂^-1", [vs, ws]),
                            lambda vw, m=m: (vw, m),
                            lambda t, m=m: P.contains(t) and t[1] == m,
                        )

                comps[σ] = FiberedMap(P, s.apex.parts[σ], lambda t: t[1], fiber_fn, name="ε̂")
            self._eps[s] = Cell(
                top, s, self.counit_at(s.dom), self.counit_at(s.cod), VMap(top.apex, s.apex, comps, "ε̂"), f"ε̂_{s.name}"
            )
        return self._eps[s]

    def counit_transformation(self) -> VerticalTransformation:
        """ε̂ : (−·1)∘V(1, −) ⇒ Id on Span(V)."""
        FG = compose_functors(as_lax(self.copower), self.points)
        return VerticalTransformation("ε̂", FG, identity_functor(self.span), self.counit_at, self.counit_cell)


_CONJUNCTIONS: dict = {}


def conjunction(backend: Backend) -> Conjunction:
    if backend.name not in _CONJUNCTIONS:
        _CONJUNCTIONS[backend.name] = Conjunction(backend)
    return _CONJUNCTIONS[backend.name]


def copower_functor(backend: Backend) -> LaxFunctor:
    return conjunction(backend).copower


def points_functor(backend: Backend) -> LaxFunctor:
    return conjunction(backend).points


def adjunction_2cells(backend: Backend, p: Matrix = None, s: Span = None) -> tuple:
    """``(η̂_p, ε̂_s)``; either side may be omitted."""
    conj = conjunction(backend)
    return (conj.unit_cell(p) if p is not None else None, conj.counit_cell(s) if s is not None else None)


def check_triangles(conj: Conjunction, matrices: list, spans: list, depth: int = 3) -> Report:
    """ε̂_{p·1}∘(η̂_p·1) = id and V(1, ε̂_s)∘η̂_{V(1,s)} = id."""
    report = Report(f"triangles {conj.backend.title}", depth=depth)
    F, G, mat, span = conj.copower, conj.points, conj.mat, conj.span
    for p in matrices:
        compare(
            report, span, "counit after copower of unit", p.name,
            lambda: span.vcomp_cell(conj.counit_cell(F.hcell(p)), F.cell(conj.unit_cell(p))),
            lambda: span.cell_id(F.hcell(p)),
            depth,
        )
    for s in spans:
        compare(
            report, mat, "points of counit after unit", s.name,
            lambda: mat.vcomp_cell(G.cell(conj.counit_cell(s)), conj.unit_cell(G.hcell(s))),
            lambda: mat.cell_id(G.hcell(s)),
            depth,
        )
    report.exact = all(s.apex.is_finite for s in spans)
    return report


def ff_2cells_check(conj: Conjunction, frames: list, limit: int = 50_000) -> Report:
    """``ζ ↦ ζ·1`` is a bijection from matrix 2-cells onto span 2-cells between the copowers.

    ``frames`` holds pairs ``(p, q)`` of finite matrices; sides range over all functions
    (matrix side) and all backend maps between copowers (span side).
    """
    b, F, mat = conj.backend, conj.copower, conj.mat
    report = Report(f"fully faithful on 2-cells ({b.title})", depth=0)
    for p, q in frames:
        frame = f"{p.name}⇒{q.name}"
        matrix_cells = []
        for f_table in _functions(p.dom, q.dom):
            for g_table in _functions(p.cod, q.cod):
                f = _tab(p.dom, q.dom, f_table)
                g = _tab(p.cod, q.cod, g_table)
                families = [
                    [(xy, h) for h in enumerate_maps(p.entry(*xy), q.entry(f(xy[0]), g(xy[1])), limit=limit)]
                    for xy in product(p.dom.elements, p.cod.elements)
                ]
                for choice in product(*families):
                    chosen = dict(choice)
                    matrix_cells.append(Cell(p, q, f, g, lambda x, y, chosen=chosen: chosen[(x, y)], "ζ"))
        Fp, Fq = F.hcell(p), F.hcell(q)
        span_count = 0
        for u in enumerate_maps(Fp.dom, Fq.dom, limit=limit):
            for v in enumerate_maps(Fp.cod, Fq.cod, limit=limit):

                def allowed(s, t, u=u, v=v):
                    target_l = u(s, Fp.l(s, t))
                    target_r = v(s, Fp.r(s, t))
                    return [m for m in Fq.l.at(s).fiber(target_l).enumerate(0) if Fq.r(s, m) == target_r]

                span_count += len(enumerate_maps(Fp.apex, Fq.apex, allowed, limit=limit))
        images = set()
        for c in matrix_cells:
            image = F.cell(c)
            images.add(
                tuple(
                    (s, tuple(sorted(((encode(t), encode(image.body(s, t))) for t in Fp.apex.parts[s].elements))))
                    for s in b.sorts
                )
                + (encode(tuple(c.left.table(0).items())), encode(tuple(c.right.table(0).items())))
            )
        injective = len(images) == len(matrix_cells)
        report.record(
            "ζ ↦ ζ·1 bijective",
            injective and len(matrix_cells) == span_count,
            frame,
            {"matrix_cells": len(matrix_cells), "span_cells": span_count, "injective": injective},
        )
    connected = b.connectedness_probe([b.terminal(), b.terminal()])
    report.data["connected"] = connected.passed
    return report


def _functions(X: FiniteObject, Y: FiniteObject):
    for combo in product(Y.elements, repeat=len(X.elements)):
        yield dict(zip(X.elements, combo))


def _tab(X, Y, table) -> FiberedMap:
    return tabulated(X, Y, table, name="f")


def connectedness_frame(conj: Conjunction) -> tuple[Matrix, Matrix]:
    """``p ⇒ p`` for ``p: 2 ↛ 1`` with both entries terminal.

    ``p·1`` has apex ``1 + 1``; when points do not preserve that coproduct the copower
    has more vertical sides than the index functions, so the 2-cell bijection breaks here.
    """
    b = conj.backend
    X, Y = FiniteObject("2", (0, 1)), FiniteObject("1", ("*",))
    p = matrix_from_table(b, X, Y, {(x, "*"): b.terminal() for x in X.elements}, "1+1")
    return p, p


def mat_frames(conj: Conjunction, rng, count: int, size: int = 2) -> list:
    """Small matrix pairs for the full-faithfulness probe, ending with ``connectedness_frame``."""
    frames = []
    for i in range(count):
        X, Y = random_set(rng, size, f"X{i}"), random_set(rng, size, f"Y{i}")
        X2, Y2 = random_set(rng, size, f"X{i}'"), random_set(rng, size, f"Y{i}'")
        p = matrix_from_table(conj.backend, X, Y, {(x, y): random_object(conj.backend, rng, size) for x in X.elements for y in Y.elements}, f"p{i}")
        q = matrix_from_table(conj.backend, X2, Y2, {(x, y): random_object(conj.backend, rng, size) for x in X2.elements for y in Y2.elements}, f"q{i}")
        frames.append((p, q))
    frames.append(connectedness_frame(conj))
    return frames
