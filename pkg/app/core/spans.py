"""The equipment Span(V) over a finite lextensive backend.

A span ``p: x ↛ y`` is ``x ← M_p → y``; the composite ``q·p`` has apex the pullback of
``r_p`` and ``l_q`` with elements ``(m_q, m_p)``. 2-cells are apex maps commuting with legs.
"""
import logging
import random
from dataclasses import dataclass
from typing import Optional

from .backends import Backend, VMap, VObject, vsquare_defect
from .carriers import EMPTY, FiberedMap, FiniteObject, bijection_defect, filtered, invert_map, product_carrier
from .doublecat import Cell, Companion, Conjoint, DoubleCategory, Samples
from .errors import FrameMismatch, MixedBackends
from .sampling import pick, random_object, random_over

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Span:
    dom: VObject
    cod: VObject
    apex: VObject
    l: VMap
    r: VMap
    name: str = "p"


class SpanDC(DoubleCategory):
    def __init__(self, backend: Backend):
        self.backend = backend
        self.name = f"Span({backend.title})"
        self._units: dict = {}
        self._composites: dict = {}
        self._conjoints: dict = {}
        self._companions: dict = {}

    def span(self, l: VMap, r: VMap, name: str = "p") -> Span:
        if l.dom is not r.dom:
            raise FrameMismatch("span legs need a common apex", {"l": l.name, "r": r.name})
        if l.dom.backend is not self.backend:
            raise MixedBackends(f"span over another backend than {self.backend.name}")
        return Span(l.cod, r.cod, l.dom, l, r, name)

    # vertical category

    def vid(self, x):
        return self.backend.identity(x)

    def vcomp(self, g, f):
        return self.backend.compose(g, f)

    def vdom(self, f):
        return f.dom

    def vcod(self, f):
        return f.cod

    def vdiff(self, f, g, depth):
        return self.backend.maps_agree(f, g, depth)

    def same_zero(self, x, y, depth):
        return self.backend.same_object(x, y, depth)

    # horizontal

    def hdom(self, p):
        return p.dom

    def hcod(self, p):
        return p.cod

    def hunit(self, x):
        if x not in self._units:
            i = self.backend.identity(x)
            self._units[x] = Span(x, x, x, i, i, f"1_{x.name}")
        return self._units[x]

    def hcomp(self, q, p):
        key = (q, p)
        if key not in self._composites:
            self.expect_zero(p.cod, q.dom, "hcomp")
            pb = self.backend.pullback(p.r, q.l)
            self._composites[key] = Span(
                p.dom,
                q.cod,
                pb.apex,
                self.backend.compose(p.l, pb.proj1),
                self.backend.compose(q.r, pb.proj0),
                f"{q.name}·{p.name}",
            )
        return self._composites[key]

    def expect_zero(self, x, y, where):
        if x is not y and not self.same_zero(x, y, self.probe_depth):
            raise FrameMismatch(f"0-cells differ in {where}", {"left": x.name, "right": y.name})

    def same_h(self, p, q, depth):
        if p is q:
            return True
        b = self.backend
        return (
            b.same_object(p.dom, q.dom, depth)
            and b.same_object(p.cod, q.cod, depth)
            and b.same_object(p.apex, q.apex, depth)
            and b.maps_agree(p.l, q.l, depth) is None
            and b.maps_agree(p.r, q.r, depth) is None
        )

    # 2-cells

    def cell(self, top: Span, bottom: Span, left: VMap, right: VMap, body: VMap, name: str = "θ", depth: Optional[int] = None) -> Cell:
        """A 2-cell after checking that both boundary squares commute."""
        depth = self.probe_depth if depth is None else depth
        b = self.backend
        bad = b.maps_agree(b.compose(bottom.l, body), b.compose(left, top.l), depth) or b.maps_agree(
            b.compose(bottom.r, body), b.compose(right, top.r), depth
        )
        if bad is not None:
            raise FrameMismatch(f"2-cell {name} does not commute with the legs", bad)
        return Cell(top, bottom, left, right, body, name)

    def cell_id(self, p):
        return Cell(p, p, self.vid(p.dom), self.vid(p.cod), self.backend.identity(p.apex), f"1_{p.name}")

    def unit_cell(self, f):
        return Cell(self.hunit(f.dom), self.hunit(f.cod), f, f, f, f"1_{f.name}")

    def vcomp_cell(self, omega, theta):
        self.expect_h(theta.bottom, omega.top, "vertical composition")
        return Cell(
            theta.top,
            omega.bottom,
            self.vcomp(omega.left, theta.left),
            self.vcomp(omega.right, theta.right),
            self.backend.compose(omega.body, theta.body),
            f"{omega.name}∘{theta.name}",
        )

    def hcomp_cell(self, theta_q, theta_p):
        self.expect_v(theta_p.right, theta_q.left, "horizontal composition")
        top = self.hcomp(theta_q.top, theta_p.top)
        bottom = self.hcomp(theta_q.bottom, theta_p.bottom)
        comps = {}
        for s in self.backend.sorts:
            bq, bp = theta_q.body.at(s), theta_p.body.at(s)
            src = top.apex.parts[s]
            fiber_fn = None
            if bq.fibered and bp.fibered:

                def fiber_fn(t, bq=bq, bp=bp, src=src):
                    return filtered("·^-1", product_carrier("·^-1", [bq.fiber(t[0]), bp.fiber(t[1])]), src.contains)

            comps[s] = FiberedMap(
                src,
                bottom.apex.parts[s],
                lambda t, bq=bq, bp=bp: (bq(t[0]), bp(t[1])),
                fiber_fn,
                name=f"{theta_q.name}·{theta_p.name}",
            )
        return Cell(
            top,
            bottom,
            theta_p.left,
            theta_q.right,
            VMap(top.apex, bottom.apex, comps, f"{theta_q.name}·{theta_p.name}"),
            f"{theta_q.name}·{theta_p.name}",
        )

    def iso_cell(self, top, bottom, forward, backward, name):
        """Globular iso given elementwise; ``backward`` computes the single preimage."""
        comps = {}
        for s in self.backend.sorts:
            src = top.apex.parts[s]
            comps[s] = FiberedMap(
                src,
                bottom.apex.parts[s],
                lambda t, s=s: forward(s, t),
                lambda u, s=s, src=src: _singleton(src, backward(s, u)),
                name=name,
            )
        return Cell(top, bottom, self.vid(top.dom), self.vid(top.cod), VMap(top.apex, bottom.apex, comps, name), name)

    def lam(self, p):
        return self.iso_cell(self.hcomp(self.hunit(p.cod), p), p, lambda s, t: t[1], lambda s, m: (p.r(s, m), m), f"λ_{p.name}")

    def lam_inv(self, p):
        return self.iso_cell(p, self.hcomp(self.hunit(p.cod), p), lambda s, m: (p.r(s, m), m), lambda s, t: t[1], f"λ⁻¹_{p.name}")

    def rho(self, p):
        return self.iso_cell(self.hcomp(p, self.hunit(p.dom)), p, lambda s, t: t[0], lambda s, m: (m, p.l(s, m)), f"ρ_{p.name}")

    def rho_inv(self, p):
        return self.iso_cell(p, self.hcomp(p, self.hunit(p.dom)), lambda s, m: (m, p.l(s, m)), lambda s, t: t[0], f"ρ⁻¹_{p.name}")

    def alpha(self, r, q, p):
        return self.iso_cell(
            self.hcomp(self.hcomp(r, q), p),
            self.hcomp(r, self.hcomp(q, p)),
            lambda s, t: (t[0][0], (t[0][1], t[1])),
            lambda s, t: ((t[0], t[1][0]), t[1][1]),
            f"α_{r.name},{q.name},{p.name}",
        )

    def alpha_inv(self, r, q, p):
        return self.iso_cell(
            self.hcomp(r, self.hcomp(q, p)),
            self.hcomp(self.hcomp(r, q), p),
            lambda s, t: ((t[0], t[1][0]), t[1][1]),
            lambda s, t: (t[0][0], (t[0][1], t[1])),
            f"α⁻¹_{r.name},{q.name},{p.name}",
        )

    def conjoint(self, f):
        """``f* = (cod f ← dom f = dom f)``."""
        if f not in self._conjoints:
            a, b = f.dom, f.cod
            h = Span(b, a, a, f, self.vid(a), f"{f.name}*")
            eta = Cell(self.hunit(a), h, f, self.vid(a), self.vid(a), f"η_{f.name}")
            eps = Cell(h, self.hunit(b), self.vid(b), f, f, f"ε_{f.name}")
            self._conjoints[f] = Conjoint(f, h, eta, eps)
        return self._conjoints[f]

    def companion(self, f):
        """``f_! = (dom f = dom f → cod f)``."""
        if f not in self._companions:
            a, b = f.dom, f.cod
            h = Span(a, b, a, self.vid(a), f, f"{f.name}_!")
            nu = Cell(self.hunit(a), h, self.vid(a), f, self.vid(a), f"ν_{f.name}")
            delta = Cell(h, self.hunit(b), f, self.vid(b), f, f"δ_{f.name}")
            self._companions[f] = Companion(f, h, nu, delta)
        return self._companions[f]

    def body_diff(self, a, b, depth):
        return self.backend.maps_agree(a.body, b.body, depth)

    def invert_cell(self, c, depth):
        if not self.is_globular(c, depth):
            return None
        p, q = c.top, c.bottom
        comps = {}
        for s in self.backend.sorts:
            body = c.body.at(s)
            candidates = None
            if not body.fibered and p.r.at(s).fibered:
                rs, qr = p.r.at(s), q.r.at(s)

                def candidates(y, rs=rs, qr=qr):
                    return rs.fiber(qr(y))

            inv = invert_map(body, depth, candidates)
            if inv is None:
                return None
            comps[s] = inv
        return Cell(q, p, self.vid(q.dom), self.vid(q.cod), VMap(q.apex, p.apex, comps, f"{c.name}⁻¹"), f"{c.name}⁻¹")

    def invert_defect(self, c, depth):
        if not self.is_globular(c, depth):
            return {"cell": c.name, "reason": "sides are not identities"}
        p, q = c.top, c.bottom
        for s in self.backend.sorts:
            body = c.body.at(s)
            candidates = None
            if not body.fibered and p.r.at(s).fibered:
                rs, qr = p.r.at(s), q.r.at(s)

                def candidates(y, rs=rs, qr=qr):
                    return rs.fiber(qr(y))

            bad = bijection_defect(body, depth, candidates)
            if bad is not None:
                return {"cell": c.name, "sort": s, **bad}
        return None

    # convenience

    def restrict(self, p: Span, h: VMap, name: str = "p'") -> tuple[Span, Cell]:
        """Precompose the legs of ``p`` with ``h: N → M_p``; returns the span and the cell ``h``."""
        b = self.backend
        top = Span(p.dom, p.cod, h.dom, b.compose(p.l, h), b.compose(p.r, h), name)
        return top, Cell(top, p, self.vid(p.dom), self.vid(p.cod), h, f"{h.name}")

    def vsquare(self, c: Cell, depth: int) -> Optional[dict]:
        """Right-leg square of a cell: None when it is a pullback."""
        return vsquare_defect(c.top.r, c.body, c.right, c.bottom.r, depth)


def _singleton(carrier, el):
    return FiniteObject("iso^-1", (el,)) if carrier.contains(el) else EMPTY


def random_span(dc: SpanDC, x: VObject, y: VObject, rng: random.Random, size: int, name: str = "p") -> Span:
    b = dc.backend
    prod = b.product(x, y)
    apex, h = random_over(b, prod, rng, size, name=f"M_{name}")
    proj = [
        VMap(prod, side, {s: FiberedMap(prod.parts[s], side.parts[s], lambda t, i=i: t[i], name=f"π{i}") for s in b.sorts}, f"π{i}")
        for i, side in enumerate((x, y))
    ]
    return Span(x, y, apex, b.compose(proj[0], h), b.compose(proj[1], h), name)


def cell_onto(dc: SpanDC, q: Span, rng: random.Random, size: int, left: Optional[tuple] = None, right: Optional[tuple] = None, name: str = "θ") -> Cell:
    """A random 2-cell with bottom ``q``.

    ``left``/``right`` are optional pairs ``(x, f: x → q.dom)`` giving the vertical sides;
    the top apex is a random object over ``M_q`` pulled back along those sides.
    """
    b = dc.backend
    apex, h = random_over(b, q.apex, rng, size, name=f"N_{name}")
    top_l, top_r, body = b.compose(q.l, h), b.compose(q.r, h), h
    f = dc.vid(q.dom)
    g = dc.vid(q.cod)
    if left is not None:
        x, f = left
        pb = b.pullback(f, top_l)
        body, top_r, top_l = b.compose(body, pb.proj0), b.compose(top_r, pb.proj0), pb.proj1
    if right is not None:
        y, g = right
        pb = b.pullback(g, top_r)
        body, top_l, top_r = b.compose(body, pb.proj0), b.compose(top_l, pb.proj0), pb.proj1
    top = Span(top_l.cod, top_r.cod, top_l.dom, top_l, top_r, f"{q.name}^{name}")
    return Cell(top, q, f, g, body, name)


def span_samples(dc: SpanDC, rng: random.Random, count: int = 8, size: int = 3) -> Samples:
    """Chains of composable spans between random objects, and 2-cells over them."""
    b = dc.backend
    samples = Samples()
    objects = [random_object(b, rng, size, name=f"X{i}") for i in range(5)]
    samples.objects = objects
    for _ in range(max(1, count // 4)):
        chain = [random_span(dc, objects[i], objects[i + 1], rng, size, name=f"p{i}") for i in range(4)]
        samples.hcells.extend(chain)
        samples.pairs.extend((chain[i + 1], chain[i]) for i in range(3))
        samples.triples.extend((chain[i + 2], chain[i + 1], chain[i]) for i in range(2))
        samples.quads.append((chain[3], chain[2], chain[1], chain[0]))
    for x in objects:
        over, f = random_over(b, x, rng, size, name=f"{x.name}'")
        samples.verticals.append(f)
        _, g = random_over(b, over, rng, size, name=f"{x.name}''")
        samples.vpairs.append((f, g))
    for p in pick(rng, samples.hcells, count):
        side = random_over(b, p.dom, rng, size, name="L")
        theta = cell_onto(dc, p, rng, size, left=side, name="θ")
        samples.cells.append(theta)
        omega_top = cell_onto(dc, theta.top, rng, size, name="ω")
        samples.cell_pairs.append((theta, omega_top))
    for q, p in pick(rng, samples.pairs, count):
        mid = random_over(b, p.cod, rng, size, name="Y")
        tp = cell_onto(dc, p, rng, size, right=mid, name="θp")
        tq = cell_onto(dc, q, rng, size, left=mid, name="θq")
        samples.hcell_pairs.append((tq, tp))
        sq, sp = cell_onto(dc, tq.top, rng, size, name="σq"), cell_onto(dc, tp.top, rng, size, name="σp")
        samples.squares.append((sq, sp, tq, tp))
    return samples
