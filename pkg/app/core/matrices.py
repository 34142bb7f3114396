"""The equipment V-Mat: matrices of backend objects indexed by sets.

A matrix ``p: X ↛ Y`` assigns a backend object ``p(x, y)`` to each pair. Composition is
``(t·s)(u, w) = Σ_v t(v, w) × s(u, v)`` with elements ``(v, (a, b))``. Index sets may be lazy;
``support(x)`` bounds the ``y`` with ``p(x, y)`` possibly nonempty.
"""
import logging
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .backends import Backend, VMap, VObject
from .carriers import (
    EMPTY,
    Carrier,
    Element,
    FiberedMap,
    FiniteObject,
    encode,
    first_disagreement,
    identity as identity_map,
    compose as compose_maps,
    constant,
    bijection_defect,
    invert_map,
    same_carrier,
    union_of,
)
from .doublecat import Cell, Companion, Conjoint, DoubleCategory, Samples
from .errors import FrameMismatch
from .sampling import pick, random_function, random_object, random_over, random_set

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Matrix:
    dom: Carrier
    cod: Carrier
    entry_fn: Callable[[Element, Element], VObject]
    support_fn: Optional[Callable[[Element], Carrier]] = None
    name: str = "p"
    _entries: dict = field(default_factory=dict, repr=False)

    def entry(self, x, y) -> VObject:
        key = (x, y)
        if key not in self._entries:
            self._entries[key] = self.entry_fn(x, y)
        return self._entries[key]

    def support(self, x) -> Carrier:
        if self.support_fn is None:
            return self.cod
        return self.support_fn(x)

    def pairs(self, depth: int):
        for x in self.dom.enumerate(depth):
            for y in self.support(x).enumerate(depth):
                yield x, y


def matrix_from_table(backend: Backend, X: FiniteObject, Y: FiniteObject, table: dict, name: str = "p") -> Matrix:
    """Finite matrix; missing entries are the initial object."""
    zero = backend.initial()
    return Matrix(X, Y, lambda x, y: table.get((x, y), zero), name=name)


class MatDC(DoubleCategory):
    def __init__(self, backend: Backend):
        self.backend = backend
        self.name = f"{backend.title}-Mat"
        self.zero = backend.initial()
        self.one = backend.terminal()
        self._units: dict = {}
        self._composites: dict = {}
        self._conjoints: dict = {}
        self._companions: dict = {}

    # vertical category: functions between index sets

    def vid(self, x):
        return identity_map(x)

    def vcomp(self, g, f):
        return compose_maps(g, f)

    def vdom(self, f):
        return f.dom

    def vcod(self, f):
        return f.cod

    def vdiff(self, f, g, depth):
        x = first_disagreement(f, g, depth)
        if x is None:
            return None
        return {"element": encode(x), "left": encode(f(x)), "right": encode(g(x))}

    def same_zero(self, x, y, depth):
        return same_carrier(x, y, depth)

    # horizontal

    def hdom(self, p):
        return p.dom

    def hcod(self, p):
        return p.cod

    def _indicator(self, holds: bool) -> VObject:
        return self.one if holds else self.zero

    def hunit(self, x):
        if x not in self._units:
            self._units[x] = Matrix(
                x,
                x,
                lambda a, b: self._indicator(a == b),
                lambda a: FiniteObject("δ", (a,)),
                f"1_{x.name}",
            )
        return self._units[x]

    def hcomp(self, t, s):
        key = (t, s)
        if key not in self._composites:
            if s.cod is not t.dom and not same_carrier(s.cod, t.dom, self.probe_depth):
                raise FrameMismatch("index sets differ in hcomp", {"left": s.cod.name, "right": t.dom.name})
            b = self.backend

            def entry(u, w):
                return b.sum_over(
                    f"({t.name}·{s.name})({encode(u)},{encode(w)})",
                    s.support(u),
                    lambda v: b.product(t.entry(v, w), s.entry(u, v)),
                )

            support_fn = None
            if s.support_fn is not None or t.support_fn is not None:

                def support_fn(u):
                    return union_of(
                        "supp",
                        s.support(u),
                        t.support,
                        lambda w: t.cod.contains(w),
                    )

            self._composites[key] = Matrix(s.dom, t.cod, entry, support_fn, f"{t.name}·{s.name}")
        return self._composites[key]

    def same_h(self, p, q, depth):
        if p is q:
            return True
        if not (same_carrier(p.dom, q.dom, depth) and same_carrier(p.cod, q.cod, depth)):
            return False
        for x in p.dom.enumerate(depth):
            ys = set(p.support(x).enumerate(depth)) | set(q.support(x).enumerate(depth))
            for y in ys:
                if not self.backend.same_object(p.entry(x, y), q.entry(x, y), depth):
                    return False
        return True

    # 2-cells: the body maps (x, y) to a backend map p(x, y) → q(fx, gy)

    def cell_id(self, p):
        return Cell(p, p, self.vid(p.dom), self.vid(p.cod), lambda x, y: self.backend.identity(p.entry(x, y)), f"1_{p.name}")

    def unit_cell(self, f):
        top, bottom = self.hunit(f.dom), self.hunit(f.cod)
        return Cell(
            top,
            bottom,
            f,
            f,
            lambda x, y: self._between(top.entry(x, y), bottom.entry(f(x), f(y)), f"1_{f.name}"),
            f"1_{f.name}",
        )

    def _between(self, a: VObject, b: VObject, name: str) -> VMap:
        """The only map out of 0 or into 1."""
        sorts = self.backend.sorts
        if a.is_finite and not any(a.parts[s].elements for s in sorts):
            return VMap(a, b, {s: FiberedMap(a.parts[s], b.parts[s], lambda x: x, lambda y: EMPTY, name=name) for s in sorts}, name)
        if b.is_finite and all(len(b.parts[s].elements) == 1 for s in sorts):
            return VMap(a, b, {s: constant(a.parts[s], b.parts[s], b.parts[s].elements[0], name=name) for s in sorts}, name)
        raise FrameMismatch(f"{name}: no canonical map between entries", {"from": a.name, "to": b.name})

    def vcomp_cell(self, omega, theta):
        self.expect_h(theta.bottom, omega.top, "vertical composition")
        f, g = theta.left, theta.right
        return Cell(
            theta.top,
            omega.bottom,
            self.vcomp(omega.left, f),
            self.vcomp(omega.right, g),
            lambda x, y: self.backend.compose(omega.body(f(x), g(y)), theta.body(x, y)),
            f"{omega.name}∘{theta.name}",
        )

    def hcomp_cell(self, theta_t, theta_s):
        self.expect_v(theta_s.right, theta_t.left, "horizontal composition")
        top = self.hcomp(theta_t.top, theta_s.top)
        bottom = self.hcomp(theta_t.bottom, theta_s.bottom)
        f, g, h = theta_s.left, theta_s.right, theta_t.right

        def body(u, w):
            src, tgt = top.entry(u, w), bottom.entry(f(u), h(w))
            comps = {
                s: FiberedMap(
                    src.parts[s],
                    tgt.parts[s],
                    lambda e, s=s: (
                        g(e[0]),
                        (theta_t.body(e[0], w)(s, e[1][0]), theta_s.body(u, e[0])(s, e[1][1])),
                    ),
                    name="·",
                )
                for s in self.backend.sorts
            }
            return VMap(src, tgt, comps, f"{theta_t.name}·{theta_s.name}")

        return Cell(top, bottom, f, h, body, f"{theta_t.name}·{theta_s.name}")

    def iso_cell(self, top, bottom, forward, backward, name):
        def body(x, y):
            src, tgt = top.entry(x, y), bottom.entry(x, y)
            comps = {
                s: FiberedMap(
                    src.parts[s],
                    tgt.parts[s],
                    lambda e, s=s: forward(x, y, s, e),
                    lambda e, s=s, src=src: _singleton(src.parts[s], backward(x, y, s, e)),
                    name=name,
                )
                for s in self.backend.sorts
            }
            return VMap(src, tgt, comps, name)

        return Cell(top, bottom, self.vid(top.dom), self.vid(top.cod), body, name)

    def lam(self, p):
        return self.iso_cell(
            self.hcomp(self.hunit(p.cod), p), p,
            lambda x, y, s, e: e[1][1],
            lambda x, y, s, m: (y, ("*", m)),
            f"λ_{p.name}",
        )

    def lam_inv(self, p):
        return self.iso_cell(
            p, self.hcomp(self.hunit(p.cod), p),
            lambda x, y, s, m: (y, ("*", m)),
            lambda x, y, s, e: e[1][1],
            f"λ⁻¹_{p.name}",
        )

    def rho(self, p):
        return self.iso_cell(
            self.hcomp(p, self.hunit(p.dom)), p,
            lambda x, y, s, e: e[1][0],
            lambda x, y, s, m: (x, (m, "*")),
            f"ρ_{p.name}",
        )

    def rho_inv(self, p):
        return self.iso_cell(
            p, self.hcomp(p, self.hunit(p.dom)),
            lambda x, y, s, m: (x, (m, "*")),
            lambda x, y, s, e: e[1][0],
            f"ρ⁻¹_{p.name}",
        )

    def alpha(self, r, q, p):
        return self.iso_cell(
            self.hcomp(self.hcomp(r, q), p),
            self.hcomp(r, self.hcomp(q, p)),
            lambda x, w, s, e: _reassociate(e),
            lambda x, w, s, e: _unreassociate(e),
            f"α_{r.name},{q.name},{p.name}",
        )

    def alpha_inv(self, r, q, p):
        return self.iso_cell(
            self.hcomp(r, self.hcomp(q, p)),
            self.hcomp(self.hcomp(r, q), p),
            lambda x, w, s, e: _unreassociate(e),
            lambda x, w, s, e: _reassociate(e),
            f"α⁻¹_{r.name},{q.name},{p.name}",
        )

    def conjoint(self, f):
        """``f*(y, x) = 1`` exactly when ``f(x) = y``."""
        if f not in self._conjoints:
            X, Y = f.dom, f.cod
            h = Matrix(
                Y, X,
                lambda y, x: self._indicator(f(x) == y),
                (lambda y: f.fiber(y)) if f.fibered else None,
                f"{f.name}*",
            )
            u_x, u_y = self.hunit(X), self.hunit(Y)
            eta = Cell(u_x, h, f, self.vid(X), lambda x, x2: self._between(u_x.entry(x, x2), h.entry(f(x), x2), "η"), f"η_{f.name}")
            eps = Cell(h, u_y, self.vid(Y), f, lambda y, x: self._between(h.entry(y, x), u_y.entry(y, f(x)), "ε"), f"ε_{f.name}")
            self._conjoints[f] = Conjoint(f, h, eta, eps)
        return self._conjoints[f]

    def companion(self, f):
        """``f_!(x, y) = 1`` exactly when ``f(x) = y``."""
        if f not in self._companions:
            X, Y = f.dom, f.cod
            h = Matrix(X, Y, lambda x, y: self._indicator(f(x) == y), lambda x: FiniteObject("f", (f(x),)), f"{f.name}_!")
            u_x, u_y = self.hunit(X), self.hunit(Y)
            nu = Cell(u_x, h, self.vid(X), f, lambda x, x2: self._between(u_x.entry(x, x2), h.entry(x, f(x2)), "ν"), f"ν_{f.name}")
            delta = Cell(h, u_y, f, self.vid(Y), lambda x, y: self._between(h.entry(x, y), u_y.entry(f(x), y), "δ"), f"δ_{f.name}")
            self._companions[f] = Companion(f, h, nu, delta)
        return self._companions[f]

    def body_diff(self, a, b, depth):
        for x, y in a.top.pairs(depth):
            bad = self.backend.maps_agree(a.body(x, y), b.body(x, y), depth)
            if bad is not None:
                return {"entry": [encode(x), encode(y)], **bad}
        return None

    def invert_cell(self, c, depth):
        if not self.is_globular(c, depth):
            return None
        p, q = c.top, c.bottom
        inverses: dict = {}
        for x, y in set(p.pairs(depth)) | set(q.pairs(depth)):
            body = c.body(x, y)
            comps = {}
            for s in self.backend.sorts:
                inv = invert_map(body.at(s), depth)
                if inv is None:
                    return None
                comps[s] = inv
            inverses[(x, y)] = VMap(body.cod, body.dom, comps, f"{c.name}⁻¹")

        def body(x, y):
            if (x, y) not in inverses:
                forward = c.body(x, y)
                comps = {s: invert_map(forward.at(s), depth) for s in self.backend.sorts}
                if any(m is None for m in comps.values()):
                    raise FrameMismatch(f"{c.name} is not invertible at an unexplored entry", {"entry": [encode(x), encode(y)]})
                inverses[(x, y)] = VMap(forward.cod, forward.dom, comps, f"{c.name}⁻¹")
            return inverses[(x, y)]

        return Cell(q, p, self.vid(q.dom), self.vid(q.cod), body, f"{c.name}⁻¹")

    def invert_defect(self, c, depth):
        if not self.is_globular(c, depth):
            return {"cell": c.name, "reason": "sides are not identities"}
        for x, y in set(c.top.pairs(depth)) | set(c.bottom.pairs(depth)):
            body = c.body(x, y)
            for s in self.backend.sorts:
                bad = bijection_defect(body.at(s), depth)
                if bad is not None:
                    return {"cell": c.name, "entry": [encode(x), encode(y)], "sort": s, **bad}
        return None

    def entry_sizes(self, p: Matrix, depth: int) -> dict:
        return {(x, y): p.entry(x, y).size(depth) for x, y in p.pairs(depth)}


def _reassociate(e):
    # (y, ((z, (c, b)), a)) ↦ (z, (c, (y, (b, a))))
    y, ((z, (c, b)), a) = e
    return (z, (c, (y, (b, a))))


def _unreassociate(e):
    z, (c, (y, (b, a))) = e
    return (y, ((z, (c, b)), a))


def _singleton(carrier, el):
    return FiniteObject("iso^-1", (el,)) if carrier.contains(el) else EMPTY


def random_matrix(dc: MatDC, X: FiniteObject, Y: FiniteObject, rng: random.Random, size: int, name: str = "p") -> Matrix:
    table = {}
    for x in X.elements:
        for y in Y.elements:
            if rng.random() < 0.7:
                table[(x, y)] = random_object(dc.backend, rng, size, name=f"{name}{x}{y}")
    return matrix_from_table(dc.backend, X, Y, table, name)


def random_mat_cell(dc: MatDC, q: Matrix, f: FiberedMap, g: FiberedMap, rng: random.Random, size: int, name: str = "θ") -> Cell:
    """A random 2-cell into ``q`` with sides ``f``, ``g``: each top entry is a random object over its target."""
    b = dc.backend
    X, Y = f.dom, g.dom
    table, maps = {}, {}
    for x in X.elements:
        for y in Y.elements:
            target = q.entry(f(x), g(y))
            obj, m = random_over(b, target, rng, size, name=f"{name}{x}{y}")
            table[(x, y)], maps[(x, y)] = obj, m
    top = matrix_from_table(b, X, Y, table, f"{q.name}^{name}")
    return Cell(top, q, f, g, lambda x, y: maps[(x, y)], name)


def mat_samples(dc: MatDC, rng: random.Random, count: int = 8, size: int = 2) -> Samples:
    samples = Samples()
    sets = [random_set(rng, 3, name=f"X{i}", low=1) for i in range(5)]
    samples.objects = sets
    for _ in range(max(1, count // 4)):
        chain = [random_matrix(dc, sets[i], sets[i + 1], rng, size, name=f"p{i}") for i in range(4)]
        samples.hcells.extend(chain)
        samples.pairs.extend((chain[i + 1], chain[i]) for i in range(3))
        samples.triples.extend((chain[i + 2], chain[i + 1], chain[i]) for i in range(2))
        samples.quads.append((chain[3], chain[2], chain[1], chain[0]))
    for X in sets:
        W = random_set(rng, 3, name=f"{X.name}'")
        f = random_function(W, X, rng)
        V = random_set(rng, 3, name=f"{X.name}''")
        g = random_function(V, W, rng)
        if f is not None:
            samples.verticals.append(f)
            if g is not None:
                samples.vpairs.append((f, g))
    for p in pick(rng, samples.hcells, count):
        f = random_function(random_set(rng, 3, name="L", low=1), p.dom, rng)
        theta = random_mat_cell(dc, p, f, dc.vid(p.cod), rng, size, "θ")
        samples.cells.append(theta)
        inner = random_mat_cell(dc, theta.top, dc.vid(theta.top.dom), dc.vid(theta.top.cod), rng, size, "ω")
        samples.cell_pairs.append((theta, inner))
    for q, p in pick(rng, samples.pairs, count):
        mid = random_function(random_set(rng, 3, name="Y", low=1), p.cod, rng)
        tp = random_mat_cell(dc, p, dc.vid(p.dom), mid, rng, size, "θp")
        tq = random_mat_cell(dc, q, mid, dc.vid(q.cod), rng, size, "θq")
        samples.hcell_pairs.append((tq, tp))
        sq = random_mat_cell(dc, tq.top, dc.vid(tq.top.dom), dc.vid(tq.top.cod), rng, size, "σq")
        sp = random_mat_cell(dc, tp.top, dc.vid(tp.top.dom), dc.vid(tp.top.cod), rng, size, "σp")
        samples.squares.append((sq, sp, tq, tp))
    return samples
