"""Pseudodouble categories, lax functors, transformations and their coherence checkers.

Horizontal composition is written ``hcomp(q, p) = q·p`` for ``p: x ↛ y`` and ``q: y ↛ z``;
vertical composition of 2-cells is ``vcomp_cell(ω, θ) = ω∘θ``.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .errors import EngineError, FlagMismatch, FrameMismatch, NonComposable
from .reports import Report

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Cell:
    """A 2-cell with its frame: ``top ⇒ bottom`` bounded by ``left`` and ``right``."""

    top: Any
    bottom: Any
    left: Any
    right: Any
    body: Any
    name: str = "θ"


@dataclass(frozen=True, eq=False)
class Conjoint:
    """``f: a → b`` with ``f*: b ↛ a``, ``η: 1_a ⇒ f*`` and ``ε: f* ⇒ 1_b``."""

    f: Any
    h: Any
    eta: Cell
    eps: Cell


@dataclass(frozen=True, eq=False)
class Companion:
    """``f: a → b`` with ``f_!: a ↛ b``, ``ν: 1_a ⇒ f_!`` and ``δ: f_! ⇒ 1_b``."""

    f: Any
    h: Any
    nu: Cell
    delta: Cell


class DoubleCategory(ABC):
    name = "D"
    check_frames = True
    probe_depth = 3

    # vertical category

    @abstractmethod
    def vid(self, x): ...

    @abstractmethod
    def vcomp(self, g, f): ...

    @abstractmethod
    def vdom(self, f): ...

    @abstractmethod
    def vcod(self, f): ...

    @abstractmethod
    def vdiff(self, f, g, depth: int) -> Optional[dict]: ...

    @abstractmethod
    def same_zero(self, x, y, depth: int) -> bool: ...

    # horizontal 1-cells

    @abstractmethod
    def hdom(self, p): ...

    @abstractmethod
    def hcod(self, p): ...

    @abstractmethod
    def hunit(self, x): ...

    @abstractmethod
    def hcomp(self, q, p): ...

    @abstractmethod
    def same_h(self, p, q, depth: int) -> bool: ...

    # 2-cells

    def left(self, c: Cell):
        return c.left

    def right(self, c: Cell):
        return c.right

    def top(self, c: Cell):
        return c.top

    def bottom(self, c: Cell):
        return c.bottom

    @abstractmethod
    def cell_id(self, p) -> Cell: ...

    @abstractmethod
    def unit_cell(self, f) -> Cell: ...

    @abstractmethod
    def vcomp_cell(self, omega: Cell, theta: Cell) -> Cell: ...

    @abstractmethod
    def hcomp_cell(self, theta_q: Cell, theta_p: Cell) -> Cell: ...

    @abstractmethod
    def lam(self, p) -> Cell: ...

    @abstractmethod
    def lam_inv(self, p) -> Cell: ...

    @abstractmethod
    def rho(self, p) -> Cell: ...

    @abstractmethod
    def rho_inv(self, p) -> Cell: ...

    @abstractmethod
    def alpha(self, r, q, p) -> Cell: ...

    @abstractmethod
    def alpha_inv(self, r, q, p) -> Cell: ...

    @abstractmethod
    def conjoint(self, f) -> Conjoint: ...

    @abstractmethod
    def companion(self, f) -> Companion: ...

    @abstractmethod
    def body_diff(self, a: Cell, b: Cell, depth: int) -> Optional[dict]: ...

    @abstractmethod
    def invert_cell(self, c: Cell, depth: int) -> Optional[Cell]:
        """Two-sided inverse of a cell with identity sides, or None."""

    def invert_defect(self, c: Cell, depth: int) -> Optional[dict]:
        """Where ``invert_cell`` fails, or None when ``c`` is invertible."""
        if not self.is_globular(c, depth):
            return {"cell": c.name, "reason": "sides are not identities"}
        if self.invert_cell(c, depth) is None:
            return {"cell": c.name}
        return None

    # derived structure

    def gamma(self, p) -> Cell:
        return self.vcomp_cell(self.rho_inv(p), self.lam(p))

    def vchain(self, *cells: Cell) -> Cell:
        """``cells[0] ∘ cells[1] ∘ … ∘ cells[-1]``."""
        result = cells[-1]
        for c in reversed(cells[:-1]):
            result = self.vcomp_cell(c, result)
        return result

    def expect_h(self, p, q, where: str) -> None:
        if not self.check_frames or p is q:
            return
        if not self.same_h(p, q, self.probe_depth):
            raise FrameMismatch(f"horizontal boundaries differ in {where}", {"at": where})

    def expect_v(self, f, g, where: str) -> None:
        if not self.check_frames or f is g:
            return
        bad = self.vdiff(f, g, self.probe_depth)
        if bad is not None:
            raise FrameMismatch(f"vertical boundaries differ in {where}", {"at": where, **bad})

    def cell_diff(self, a: Cell, b: Cell, depth: int) -> Optional[dict]:
        for side, x, y in (("top", self.top(a), self.top(b)), ("bottom", self.bottom(a), self.bottom(b))):
            if x is not y and not self.same_h(x, y, depth):
                return {"frame": side}
        for side, x, y in (("left", self.left(a), self.left(b)), ("right", self.right(a), self.right(b))):
            if x is not y:
                bad = self.vdiff(x, y, depth)
                if bad is not None:
                    return {"frame": side, **bad}
        return self.body_diff(a, b, depth)

    def is_globular(self, c: Cell, depth: Optional[int] = None) -> bool:
        depth = self.probe_depth if depth is None else depth
        return (
            self.vdiff(self.left(c), self.vid(self.vdom(self.left(c))), depth) is None
            and self.vdiff(self.right(c), self.vid(self.vdom(self.right(c))), depth) is None
        )


class HorizontalOpposite(DoubleCategory):
    """Same cells read with horizontal direction reversed; conjoints and companions swap."""

    def __init__(self, base: DoubleCategory):
        self.base = base
        self.name = f"{base.name}°"
        self.check_frames = base.check_frames
        self.probe_depth = base.probe_depth

    def vid(self, x):
        return self.base.vid(x)

    def vcomp(self, g, f):
        return self.base.vcomp(g, f)

    def vdom(self, f):
        return self.base.vdom(f)

    def vcod(self, f):
        return self.base.vcod(f)

    def vdiff(self, f, g, depth):
        return self.base.vdiff(f, g, depth)

    def same_zero(self, x, y, depth):
        return self.base.same_zero(x, y, depth)

    def hdom(self, p):
        return self.base.hcod(p)

    def hcod(self, p):
        return self.base.hdom(p)

    def hunit(self, x):
        return self.base.hunit(x)

    def hcomp(self, q, p):
        return self.base.hcomp(p, q)

    def same_h(self, p, q, depth):
        return self.base.same_h(p, q, depth)

    def left(self, c):
        return self.base.right(c)

    def right(self, c):
        return self.base.left(c)

    def top(self, c):
        return self.base.top(c)

    def bottom(self, c):
        return self.base.bottom(c)

    def cell_id(self, p):
        return self.base.cell_id(p)

    def unit_cell(self, f):
        return self.base.unit_cell(f)

    def vcomp_cell(self, omega, theta):
        return self.base.vcomp_cell(omega, theta)

    def hcomp_cell(self, theta_q, theta_p):
        return self.base.hcomp_cell(theta_p, theta_q)

    def lam(self, p):
        return self.base.rho(p)

    def lam_inv(self, p):
        return self.base.rho_inv(p)

    def rho(self, p):
        return self.base.lam(p)

    def rho_inv(self, p):
        return self.base.lam_inv(p)

    def alpha(self, r, q, p):
        return self.base.alpha_inv(p, q, r)

    def alpha_inv(self, r, q, p):
        return self.base.alpha(p, q, r)

    def conjoint(self, f):
        c = self.base.companion(f)
        return Conjoint(f, c.h, c.nu, c.delta)

    def companion(self, f):
        c = self.base.conjoint(f)
        return Companion(f, c.h, c.eta, c.eps)

    def body_diff(self, a, b, depth):
        return self.base.body_diff(a, b, depth)

    def invert_cell(self, c, depth):
        return self.base.invert_cell(c, depth)

    def invert_defect(self, c, depth):
        return self.base.invert_defect(c, depth)


# lax functors


@dataclass(eq=False)
class LaxFunctor:
    """Lax (or oplax) functor with comparisons ``e`` and ``m``.

    lax:   e_x: 1_{Fx} ⇒ F(1_x),  m_{q,p}: Fq·Fp ⇒ F(q·p)
    oplax: e_x: F(1_x) ⇒ 1_{Fx},  m_{q,p}: F(q·p) ⇒ Fq·Fp
    """

    name: str
    source: DoubleCategory
    target: DoubleCategory
    on_obj: Callable
    on_vert: Callable
    on_hcell: Callable
    on_cell: Callable
    unit: Callable
    mult: Callable
    orientation: str = "lax"
    flags: frozenset = frozenset()
    unit_inv: Optional[Callable] = None
    mult_inv: Optional[Callable] = None
    _memo: dict = field(default_factory=dict, repr=False)

    def _cached(self, kind: str, key, build):
        slot = (kind, key)
        if slot not in self._memo:
            self._memo[slot] = build()
        return self._memo[slot]

    def obj(self, x):
        return self._cached("obj", x, lambda: self.on_obj(x))

    def vert(self, f):
        return self._cached("vert", f, lambda: self.on_vert(f))

    def hcell(self, p):
        return self._cached("hcell", p, lambda: self.on_hcell(p))

    def cell(self, c: Cell) -> Cell:
        return self._cached("cell", c, lambda: self.on_cell(c))

    def e(self, x) -> Cell:
        return self._cached("e", x, lambda: self.unit(x))

    def m(self, q, p) -> Cell:
        return self._cached("m", (q, p), lambda: self.mult(q, p))

    @property
    def is_lax(self) -> bool:
        return self.orientation == "lax"


def identity_functor(dc: DoubleCategory) -> LaxFunctor:
    return LaxFunctor(
        name="Id",
        source=dc,
        target=dc,
        on_obj=lambda x: x,
        on_vert=lambda f: f,
        on_hcell=lambda p: p,
        on_cell=lambda c: c,
        unit=lambda x: dc.cell_id(dc.hunit(x)),
        mult=lambda q, p: dc.cell_id(dc.hcomp(q, p)),
        flags=frozenset({"strong", "normal"}),
        unit_inv=lambda x: dc.cell_id(dc.hunit(x)),
        mult_inv=lambda q, p: dc.cell_id(dc.hcomp(q, p)),
    )


def compose_functors(G: LaxFunctor, F: LaxFunctor) -> LaxFunctor:
    """``G∘F``; both must share an orientation."""
    if G.orientation != F.orientation:
        raise NonComposable("cannot compose a lax with an oplax functor", {"G": G.name, "F": F.name})
    E = G.target
    if G.is_lax:

        def unit(x):
            return E.vcomp_cell(G.cell(F.e(x)), G.e(F.obj(x)))

        def mult(q, p):
            return E.vcomp_cell(G.cell(F.m(q, p)), G.m(F.hcell(q), F.hcell(p)))

    else:

        def unit(x):
            return E.vcomp_cell(G.e(F.obj(x)), G.cell(F.e(x)))

        def mult(q, p):
            return E.vcomp_cell(G.m(F.hcell(q), F.hcell(p)), G.cell(F.m(q, p)))

    return LaxFunctor(
        name=f"{G.name}∘{F.name}",
        source=F.source,
        target=E,
        on_obj=lambda x: G.obj(F.obj(x)),
        on_vert=lambda f: G.vert(F.vert(f)),
        on_hcell=lambda p: G.hcell(F.hcell(p)),
        on_cell=lambda c: G.cell(F.cell(c)),
        unit=unit,
        mult=mult,
        orientation=G.orientation,
        flags=G.flags & F.flags,
    )


def as_lax(F: LaxFunctor, depth: int = 3) -> LaxFunctor:
    """Read a strong oplax functor as a lax one by inverting its comparisons."""
    if F.is_lax:
        return F
    E = F.target

    def inverse(c: Cell, what: str) -> Cell:
        inv = E.invert_cell(c, depth)
        if inv is None:
            raise FlagMismatch(f"{F.name}: {what} comparison is not invertible", {"functor": F.name})
        return inv

    unit = F.unit_inv or (lambda x: inverse(F.e(x), "unit"))
    mult = F.mult_inv or (lambda q, p: inverse(F.m(q, p), "composition"))
    return LaxFunctor(
        name=F.name,
        source=F.source,
        target=E,
        on_obj=F.obj,
        on_vert=F.vert,
        on_hcell=F.hcell,
        on_cell=F.cell,
        unit=unit,
        mult=mult,
        orientation="lax",
        flags=F.flags,
        unit_inv=F.e,
        mult_inv=F.m,
    )


def opposite_functor(F: LaxFunctor, source: DoubleCategory, target: DoubleCategory) -> LaxFunctor:
    return LaxFunctor(
        name=f"{F.name}°",
        source=source,
        target=target,
        on_obj=F.obj,
        on_vert=F.vert,
        on_hcell=F.hcell,
        on_cell=F.cell,
        unit=F.e,
        mult=lambda q, p: F.m(p, q),
        orientation=F.orientation,
        flags=F.flags,
        unit_inv=F.unit_inv,
        mult_inv=(lambda q, p: F.mult_inv(p, q)) if F.mult_inv else None,
    )


# transformations


@dataclass(eq=False)
class VerticalTransformation:
    """φ: F ⇒ G with ``at(x): Fx → Gx`` and ``cell(p): Fp ⇒ Gp``."""

    name: str
    source: LaxFunctor
    target: LaxFunctor
    at: Callable
    cell: Callable


def identity_vtrans(F: LaxFunctor) -> VerticalTransformation:
    E = F.target
    return VerticalTransformation(
        f"1_{F.name}", F, F, lambda x: E.vid(F.obj(x)), lambda p: E.cell_id(F.hcell(p))
    )


def whisker_left(phi: VerticalTransformation, H: LaxFunctor) -> VerticalTransformation:
    """``φH``."""
    return VerticalTransformation(
        f"{phi.name}{H.name}",
        compose_functors(phi.source, H),
        compose_functors(phi.target, H),
        lambda x: phi.at(H.obj(x)),
        lambda p: phi.cell(H.hcell(p)),
    )


def whisker_right(H: LaxFunctor, phi: VerticalTransformation) -> VerticalTransformation:
    """``Hφ``."""
    return VerticalTransformation(
        f"{H.name}{phi.name}",
        compose_functors(H, phi.source),
        compose_functors(H, phi.target),
        lambda x: H.vert(phi.at(x)),
        lambda p: H.cell(phi.cell(p)),
    )


def vcompose_vtrans(psi: VerticalTransformation, phi: VerticalTransformation) -> VerticalTransformation:
    E = phi.source.target
    return VerticalTransformation(
        f"{psi.name}∘{phi.name}",
        phi.source,
        psi.target,
        lambda x: E.vcomp(psi.at(x), phi.at(x)),
        lambda p: E.vcomp_cell(psi.cell(p), phi.cell(p)),
    )


@dataclass(eq=False)
class HorizontalTransformation:
    """φ with ``component(x): Sx ↛ Tx``, ``cell_at(f)`` framed by ``Sf``/``Tf`` and

    lax naturality ``naturality(r): T r · φ_x ⇒ φ_y · S r`` (reversed when oplax).
    """

    name: str
    source: LaxFunctor
    target: LaxFunctor
    component: Callable
    cell_at: Callable
    naturality: Callable
    orientation: str = "lax"
    _memo: dict = field(default_factory=dict, repr=False)

    def comp(self, x):
        key = ("c", x)
        if key not in self._memo:
            self._memo[key] = self.component(x)
        return self._memo[key]

    def n(self, r) -> Cell:
        key = ("n", r)
        if key not in self._memo:
            self._memo[key] = self.naturality(r)
        return self._memo[key]


def unit_htrans(F: LaxFunctor) -> HorizontalTransformation:
    """1_F: components 1_{Fx}, naturality γ⁻¹ = λ⁻¹∘ρ."""
    E = F.target
    return HorizontalTransformation(
        f"1_{F.name}",
        F,
        F,
        lambda x: E.hunit(F.obj(x)),
        lambda f: E.unit_cell(F.vert(f)),
        lambda r: E.vcomp_cell(E.lam_inv(F.hcell(r)), E.rho(F.hcell(r))),
        orientation="lax",
    )


def hcomp_htrans(psi: HorizontalTransformation, phi: HorizontalTransformation) -> HorizontalTransformation:
    """``ψ·φ`` with ``n = α⁻¹∘(id·n^φ)∘α∘(n^ψ·id)∘α⁻¹``."""
    if psi.orientation != phi.orientation or psi.orientation != "lax":
        raise NonComposable("only lax horizontal transformations of one orientation compose here")
    if psi.source is not phi.target:
        raise NonComposable(
            "boundary functors do not match", {"psi.source": psi.source.name, "phi.target": phi.target.name}
        )
    E = phi.source.target
    S, M, T = phi.source, phi.target, psi.target

    def naturality(r):
        x, y = phi.source.source.hdom(r), phi.source.source.hcod(r)
        return E.vchain(
            E.alpha_inv(psi.comp(y), phi.comp(y), S.hcell(r)),
            E.hcomp_cell(E.cell_id(psi.comp(y)), phi.n(r)),
            E.alpha(psi.comp(y), M.hcell(r), phi.comp(x)),
            E.hcomp_cell(psi.n(r), E.cell_id(phi.comp(x))),
            E.alpha_inv(T.hcell(r), psi.comp(x), phi.comp(x)),
        )

    return HorizontalTransformation(
        f"{psi.name}·{phi.name}",
        S,
        T,
        lambda x: E.hcomp(psi.comp(x), phi.comp(x)),
        lambda f: E.hcomp_cell(psi.cell_at(f), phi.cell_at(f)),
        naturality,
    )


@dataclass(eq=False)
class Modification:
    """Γ with components ``Γ_x: φ_x ⇒ ψ_x`` framed by ``σ_x`` (left) and ``τ_x`` (right)."""

    name: str
    top: HorizontalTransformation
    bottom: HorizontalTransformation
    left: VerticalTransformation
    right: VerticalTransformation
    component: Callable


# samples and checkers


@dataclass
class Samples:
    objects: list = field(default_factory=list)
    verticals: list = field(default_factory=list)
    vpairs: list = field(default_factory=list)
    hcells: list = field(default_factory=list)
    pairs: list = field(default_factory=list)
    triples: list = field(default_factory=list)
    quads: list = field(default_factory=list)
    cells: list = field(default_factory=list)
    cell_pairs: list = field(default_factory=list)
    hcell_pairs: list = field(default_factory=list)
    squares: list = field(default_factory=list)


def compare(report: Report, dc: DoubleCategory, diagram: str, frame: str, lhs: Callable, rhs: Callable, depth: int) -> bool:
    """Evaluate both sides of a pasting equation and record the verdict."""
    try:
        bad = dc.cell_diff(lhs(), rhs(), depth)
    except EngineError as exc:
        return report.record(diagram, False, frame, {"error": type(exc).__name__, **exc.witness})
    return report.record(diagram, bad is None, frame, bad)


def _label(*cells) -> str:
    return "·".join(getattr(c, "name", "?") for c in cells)


def check_pseudodouble(dc: DoubleCategory, samples: Samples, depth: int = 3) -> Report:
    report = Report(f"pseudodouble {dc.name}", depth=depth)
    for x in samples.objects:
        u = dc.hunit(x)
        compare(report, dc, "lambda_1 = rho_1", _label(u), lambda: dc.lam(u), lambda: dc.rho(u), depth)
        compare(report, dc, "gamma_1 = id", _label(u), lambda: dc.gamma(u), lambda: dc.cell_id(dc.hcomp(u, u)), depth)
    for p in samples.hcells:
        f = _label(p)
        compare(report, dc, "lambda invertible", f, lambda: dc.vcomp_cell(dc.lam(p), dc.lam_inv(p)), lambda: dc.cell_id(p), depth)
        compare(report, dc, "rho invertible", f, lambda: dc.vcomp_cell(dc.rho(p), dc.rho_inv(p)), lambda: dc.cell_id(p), depth)
        compare(
            report, dc, "lambda inverse", f,
            lambda: dc.vcomp_cell(dc.lam_inv(p), dc.lam(p)),
            lambda: dc.cell_id(dc.hcomp(dc.hunit(dc.hcod(p)), p)),
            depth,
        )
    for q, p in samples.pairs:
        f = _label(q, p)
        y = dc.hcod(p)
        # (d) unit coherence triangle
        compare(
            report, dc, "(d) unit triangle", f,
            lambda: dc.vcomp_cell(dc.hcomp_cell(dc.cell_id(q), dc.lam(p)), dc.alpha(q, dc.hunit(y), p)),
            lambda: dc.hcomp_cell(dc.rho(q), dc.cell_id(p)),
            depth,
        )
        # (b) and (c), derivable from (d) and (e)
        compare(
            report, dc, "(b) left unit", f,
            lambda: dc.hcomp_cell(dc.lam(q), dc.cell_id(p)),
            lambda: dc.vcomp_cell(dc.lam(dc.hcomp(q, p)), dc.alpha(dc.hunit(dc.hcod(q)), q, p)),
            depth,
        )
        compare(
            report, dc, "(c) right unit", f,
            lambda: dc.vcomp_cell(dc.hcomp_cell(dc.cell_id(q), dc.rho(p)), dc.alpha(q, p, dc.hunit(dc.hdom(p)))),
            lambda: dc.rho(dc.hcomp(q, p)),
            depth,
        )
    for r, q, p in samples.triples:
        f = _label(r, q, p)
        compare(
            report, dc, "alpha invertible", f,
            lambda: dc.vcomp_cell(dc.alpha_inv(r, q, p), dc.alpha(r, q, p)),
            lambda: dc.cell_id(dc.hcomp(dc.hcomp(r, q), p)),
            depth,
        )
    for s, r, q, p in samples.quads:
        f = _label(s, r, q, p)
        # (e) pentagon
        compare(
            report, dc, "(e) pentagon", f,
            lambda: dc.vcomp_cell(dc.alpha(s, r, dc.hcomp(q, p)), dc.alpha(dc.hcomp(s, r), q, p)),
            lambda: dc.vchain(
                dc.hcomp_cell(dc.cell_id(s), dc.alpha(r, q, p)),
                dc.alpha(s, dc.hcomp(r, q), p),
                dc.hcomp_cell(dc.alpha(s, r, q), dc.cell_id(p)),
            ),
            depth,
        )
    for theta in samples.cells:
        f = _label(theta)
        p, q = dc.top(theta), dc.bottom(theta)
        compare(
            report, dc, "lambda natural", f,
            lambda: dc.vcomp_cell(dc.lam(q), dc.hcomp_cell(dc.unit_cell(dc.right(theta)), theta)),
            lambda: dc.vcomp_cell(theta, dc.lam(p)),
            depth,
        )
        compare(
            report, dc, "rho natural", f,
            lambda: dc.vcomp_cell(dc.rho(q), dc.hcomp_cell(theta, dc.unit_cell(dc.left(theta)))),
            lambda: dc.vcomp_cell(theta, dc.rho(p)),
            depth,
        )
    for tq, tp, wq, wp in samples.squares:
        compare(
            report, dc, "interchange", _label(tq, tp, wq, wp),
            lambda: dc.hcomp_cell(dc.vcomp_cell(wq, tq), dc.vcomp_cell(wp, tp)),
            lambda: dc.vcomp_cell(dc.hcomp_cell(wq, wp), dc.hcomp_cell(tq, tp)),
            depth,
        )
    logger.info("%s: %d checks, passed=%s", report.title, len(report.results), report.passed)
    return report


def check_lax_functor(F: LaxFunctor, samples: Samples, depth: int = 3) -> Report:
    report = Report(f"{F.orientation} functor {F.name}", depth=depth)
    D, E = F.source, F.target
    for p in samples.hcells:
        f = _label(p)
        x, y = D.hdom(p), D.hcod(p)
        if F.is_lax:
            compare(
                report, E, "left unit square", f,
                lambda: E.vchain(F.cell(D.lam(p)), F.m(D.hunit(y), p), E.hcomp_cell(F.e(y), E.cell_id(F.hcell(p)))),
                lambda: E.lam(F.hcell(p)),
                depth,
            )
            compare(
                report, E, "right unit square", f,
                lambda: E.vchain(F.cell(D.rho(p)), F.m(p, D.hunit(x)), E.hcomp_cell(E.cell_id(F.hcell(p)), F.e(x))),
                lambda: E.rho(F.hcell(p)),
                depth,
            )
        else:
            compare(
                report, E, "left unit square", f,
                lambda: E.vchain(E.lam(F.hcell(p)), E.hcomp_cell(F.e(y), E.cell_id(F.hcell(p))), F.m(D.hunit(y), p)),
                lambda: F.cell(D.lam(p)),
                depth,
            )
            compare(
                report, E, "right unit square", f,
                lambda: E.vchain(E.rho(F.hcell(p)), E.hcomp_cell(E.cell_id(F.hcell(p)), F.e(x)), F.m(p, D.hunit(x))),
                lambda: F.cell(D.rho(p)),
                depth,
            )
        compare(report, E, "preserves identity cells", f, lambda: F.cell(D.cell_id(p)), lambda: E.cell_id(F.hcell(p)), depth)
    for r, q, p in samples.triples:
        f = _label(r, q, p)
        Fr, Fq, Fp = F.hcell(r), F.hcell(q), F.hcell(p)
        if F.is_lax:
            compare(
                report, E, "composition hexagon", f,
                lambda: E.vchain(F.cell(D.alpha(r, q, p)), F.m(D.hcomp(r, q), p), E.hcomp_cell(F.m(r, q), E.cell_id(Fp))),
                lambda: E.vchain(F.m(r, D.hcomp(q, p)), E.hcomp_cell(E.cell_id(Fr), F.m(q, p)), E.alpha(Fr, Fq, Fp)),
                depth,
            )
        else:
            compare(
                report, E, "composition hexagon", f,
                lambda: E.vchain(E.alpha(Fr, Fq, Fp), E.hcomp_cell(F.m(r, q), E.cell_id(Fp)), F.m(D.hcomp(r, q), p)),
                lambda: E.vchain(E.hcomp_cell(E.cell_id(Fr), F.m(q, p)), F.m(r, D.hcomp(q, p)), F.cell(D.alpha(r, q, p))),
                depth,
            )
    for omega, theta in samples.cell_pairs:
        compare(
            report, E, "preserves vertical composition", _label(omega, theta),
            lambda: F.cell(D.vcomp_cell(omega, theta)),
            lambda: E.vcomp_cell(F.cell(omega), F.cell(theta)),
            depth,
        )
    for tq, tp in samples.hcell_pairs:
        q, p = D.top(tq), D.top(tp)
        q2, p2 = D.bottom(tq), D.bottom(tp)
        if F.is_lax:
            compare(
                report, E, "m natural", _label(tq, tp),
                lambda: E.vcomp_cell(F.m(q2, p2), E.hcomp_cell(F.cell(tq), F.cell(tp))),
                lambda: E.vcomp_cell(F.cell(D.hcomp_cell(tq, tp)), F.m(q, p)),
                depth,
            )
        else:
            compare(
                report, E, "m natural", _label(tq, tp),
                lambda: E.vcomp_cell(E.hcomp_cell(F.cell(tq), F.cell(tp)), F.m(q, p)),
                lambda: E.vcomp_cell(F.m(q2, p2), F.cell(D.hcomp_cell(tq, tp))),
                depth,
            )
    for f in samples.verticals:
        x, y = D.vdom(f), D.vcod(f)
        if F.is_lax:
            compare(
                report, E, "e natural", _label(f),
                lambda: E.vcomp_cell(F.e(y), E.unit_cell(F.vert(f))),
                lambda: E.vcomp_cell(F.cell(D.unit_cell(f)), F.e(x)),
                depth,
            )
        else:
            compare(
                report, E, "e natural", _label(f),
                lambda: E.vcomp_cell(E.unit_cell(F.vert(f)), F.e(x)),
                lambda: E.vcomp_cell(F.e(y), F.cell(D.unit_cell(f))),
                depth,
            )
    _check_flags(report, F, samples, depth)
    logger.info("%s: %d checks, passed=%s", report.title, len(report.results), report.passed)
    return report


def _check_flags(report: Report, F: LaxFunctor, samples: Samples, depth: int) -> None:
    E = F.target
    unit_ok = all(E.invert_cell(F.e(x), depth) is not None for x in samples.objects)
    mult_ok = all(E.invert_cell(F.m(q, p), depth) is not None for q, p in samples.pairs)
    report.data.setdefault("invertible", {})[F.name] = {"e": unit_ok, "m": mult_ok}
    if "normal" in F.flags or "strong" in F.flags:
        report.record("flag normal: e invertible", unit_ok, F.name, {"flags": sorted(F.flags)})
    if "strong" in F.flags:
        report.record("flag strong: m invertible", mult_ok, F.name, {"flags": sorted(F.flags)})


def check_flags(F: LaxFunctor, samples: Samples, depth: int = 3) -> Report:
    report = Report(f"flags of {F.name}", depth=depth)
    _check_flags(report, F, samples, depth)
    if not report.passed:
        raise FlagMismatch(f"{F.name} does not meet its declared flags", {"flags": sorted(F.flags)})
    return report


def check_vertical_trans(phi: VerticalTransformation, samples: Samples, depth: int = 3) -> Report:
    F, G = phi.source, phi.target
    D, E = F.source, F.target
    report = Report(f"vertical transformation {phi.name}", depth=depth)
    for f in samples.verticals:
        x, y = D.vdom(f), D.vcod(f)
        bad = E.vdiff(E.vcomp(G.vert(f), phi.at(x)), E.vcomp(phi.at(y), F.vert(f)), depth)
        report.record("naturality on vertical 1-cells", bad is None, _label(f), bad)
    for p in samples.hcells:
        c = phi.cell(p)
        x, y = D.hdom(p), D.hcod(p)
        bad = E.vdiff(E.left(c), phi.at(x), depth) or E.vdiff(E.right(c), phi.at(y), depth)
        report.record("component frame", bad is None, _label(p), bad)
    for theta in samples.cells:
        p, q = D.top(theta), D.bottom(theta)
        compare(
            report, E, "naturality on 2-cells", _label(theta),
            lambda: E.vcomp_cell(G.cell(theta), phi.cell(p)),
            lambda: E.vcomp_cell(phi.cell(q), F.cell(theta)),
            depth,
        )
    for x in samples.objects:
        if F.is_lax:
            compare(
                report, E, "unit hexagon", _label(x),
                lambda: E.vcomp_cell(phi.cell(D.hunit(x)), F.e(x)),
                lambda: E.vcomp_cell(G.e(x), E.unit_cell(phi.at(x))),
                depth,
            )
        else:
            compare(
                report, E, "unit hexagon", _label(x),
                lambda: E.vcomp_cell(G.e(x), phi.cell(D.hunit(x))),
                lambda: E.vcomp_cell(E.unit_cell(phi.at(x)), F.e(x)),
                depth,
            )
    for q, p in samples.pairs:
        if F.is_lax:
            compare(
                report, E, "composition hexagon", _label(q, p),
                lambda: E.vcomp_cell(phi.cell(D.hcomp(q, p)), F.m(q, p)),
                lambda: E.vcomp_cell(G.m(q, p), E.hcomp_cell(phi.cell(q), phi.cell(p))),
                depth,
            )
        else:
            compare(
                report, E, "composition hexagon", _label(q, p),
                lambda: E.vcomp_cell(G.m(q, p), phi.cell(D.hcomp(q, p))),
                lambda: E.vcomp_cell(E.hcomp_cell(phi.cell(q), phi.cell(p)), F.m(q, p)),
                depth,
            )
    logger.info("%s: %d checks, passed=%s", report.title, len(report.results), report.passed)
    return report


def _opposite_htrans(psi: HorizontalTransformation) -> HorizontalTransformation:
    """An oplax transformation S → T read as a lax one T → S in the horizontal opposite."""
    D, E = psi.source.source, psi.source.target
    Do, Eo = HorizontalOpposite(D), HorizontalOpposite(E)
    return HorizontalTransformation(
        f"{psi.name}°",
        opposite_functor(psi.target, Do, Eo),
        opposite_functor(psi.source, Do, Eo),
        psi.comp,
        psi.cell_at,
        psi.n,
        orientation="lax",
    )


def check_horiz_trans(psi: HorizontalTransformation, samples: Samples, depth: int = 3) -> Report:
    if psi.orientation == "oplax":
        return check_horiz_trans(_opposite_htrans(psi), samples, depth)
    S, T = psi.source, psi.target
    D, E = S.source, S.target
    report = Report(f"horizontal transformation {psi.name}", depth=depth)
    for f in samples.verticals:
        c = psi.cell_at(f)
        bad = E.vdiff(E.left(c), S.vert(f), depth) or E.vdiff(E.right(c), T.vert(f), depth)
        report.record("component frame", bad is None, _label(f), bad)
    for g, f in samples.vpairs:
        compare(
            report, E, "functorial in vertical 1-cells", _label(g, f),
            lambda: psi.cell_at(D.vcomp(g, f)),
            lambda: E.vcomp_cell(psi.cell_at(g), psi.cell_at(f)),
            depth,
        )
    for x in samples.objects:
        compare(report, E, "preserves identities", _label(x), lambda: psi.cell_at(D.vid(x)), lambda: E.cell_id(psi.comp(x)), depth)
        u = D.hunit(x)
        compare(
            report, E, "unit coherence", _label(x),
            lambda: E.vcomp_cell(psi.n(u), E.hcomp_cell(T.e(x), E.cell_id(psi.comp(x)))),
            lambda: E.vchain(E.hcomp_cell(E.cell_id(psi.comp(x)), S.e(x)), E.rho_inv(psi.comp(x)), E.lam(psi.comp(x))),
            depth,
        )
    for theta in samples.cells:
        r, s = D.top(theta), D.bottom(theta)
        compare(
            report, E, "naturality on 2-cells", _label(theta),
            lambda: E.vcomp_cell(psi.n(s), E.hcomp_cell(T.cell(theta), psi.cell_at(D.left(theta)))),
            lambda: E.vcomp_cell(E.hcomp_cell(psi.cell_at(D.right(theta)), S.cell(theta)), psi.n(r)),
            depth,
        )
    for s, r in samples.pairs:
        x, y, z = D.hdom(r), D.hcod(r), D.hcod(s)
        Ts, Tr, Ss, Sr = T.hcell(s), T.hcell(r), S.hcell(s), S.hcell(r)
        compare(
            report, E, "composition octagon", _label(s, r),
            lambda: E.vcomp_cell(psi.n(D.hcomp(s, r)), E.hcomp_cell(T.m(s, r), E.cell_id(psi.comp(x)))),
            lambda: E.vchain(
                E.hcomp_cell(E.cell_id(psi.comp(z)), S.m(s, r)),
                E.alpha(psi.comp(z), Ss, Sr),
                E.hcomp_cell(psi.n(s), E.cell_id(Sr)),
                E.alpha_inv(Ts, psi.comp(y), Sr),
                E.hcomp_cell(E.cell_id(Ts), psi.n(r)),
                E.alpha(Ts, Tr, psi.comp(x)),
            ),
            depth,
        )
    logger.info("%s: %d checks, passed=%s", report.title, len(report.results), report.passed)
    return report


def check_modification(gamma: Modification, samples: Samples, depth: int = 3) -> Report:
    phi, psi = gamma.top, gamma.bottom
    sigma, tau = gamma.left, gamma.right
    D, E = phi.source.source, phi.source.target
    report = Report(f"modification {gamma.name}", depth=depth)
    for x in samples.objects:
        c = gamma.component(x)
        bad = E.vdiff(E.left(c), sigma.at(x), depth) or E.vdiff(E.right(c), tau.at(x), depth)
        report.record("component frame", bad is None, _label(x), bad)
    for f in samples.verticals:
        x, y = D.vdom(f), D.vcod(f)
        compare(
            report, E, "natural in vertical 1-cells", _label(f),
            lambda: E.vcomp_cell(gamma.component(y), phi.cell_at(f)),
            lambda: E.vcomp_cell(psi.cell_at(f), gamma.component(x)),
            depth,
        )
    for r in samples.hcells:
        x, y = D.hdom(r), D.hcod(r)
        compare(
            report, E, "modification square", _label(r),
            lambda: E.vcomp_cell(psi.n(r), E.hcomp_cell(tau.cell(r), gamma.component(x))),
            lambda: E.vcomp_cell(E.hcomp_cell(gamma.component(y), sigma.cell(r)), phi.n(r)),
            depth,
        )
    logger.info("%s: %d checks, passed=%s", report.title, len(report.results), report.passed)
    return report
