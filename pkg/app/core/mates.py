"""Mate calculus for conjoints and companions.

A pair of 2-cells

    ζ: r ⇒ s  framed by (k∘f, g∘h)        ξ: r·f* ⇒ g*·s  framed by (k, h)

correspond under

    ξ = ρ ∘ (((η_g∘1_h)·ζ)·(1_k∘ε_f)) ∘ α⁻¹ ∘ λ⁻¹
    ζ = λ ∘ (ε_g·id_s) ∘ ξ ∘ (id_r·η_f) ∘ ρ⁻¹

Companion versions run the same code in ``HorizontalOpposite``.
"""
import logging
from typing import Optional

from .doublecat import (
    Cell,
    Conjoint,
    DoubleCategory,
    HorizontalOpposite,
    HorizontalTransformation,
    LaxFunctor,
    Samples,
    VerticalTransformation,
    as_lax,
    check_horiz_trans,
    compare,
    opposite_functor,
)
from .errors import EngineError, FrameMismatch, NonComposable, SquareNotCommuting
from .reports import Report

logger = logging.getLogger(__name__)


def identity_conjoint(dc: DoubleCategory, x) -> Conjoint:
    """``1_x`` as the conjoint of ``id_x`` with identity unit and counit."""
    u = dc.hunit(x)
    return Conjoint(dc.vid(x), u, dc.cell_id(u), dc.cell_id(u))


def is_identity(dc: DoubleCategory, f, depth: Optional[int] = None) -> bool:
    depth = dc.probe_depth if depth is None else depth
    x = dc.vdom(f)
    return dc.same_zero(x, dc.vcod(f), depth) and dc.vdiff(f, dc.vid(x), depth) is None


def _check_frame(dc: DoubleCategory, zeta: Cell, conj_f: Conjoint, conj_g: Conjoint, k, h) -> None:
    depth = dc.probe_depth
    bad = dc.vdiff(dc.left(zeta), dc.vcomp(k, conj_f.f), depth)
    if bad is not None:
        raise FrameMismatch(f"left side of {zeta.name} is not k∘f", {"side": "left", **bad})
    bad = dc.vdiff(dc.right(zeta), dc.vcomp(conj_g.f, h), depth)
    if bad is not None:
        raise FrameMismatch(f"right side of {zeta.name} is not g∘h", {"side": "right", **bad})


def mate_forward(dc: DoubleCategory, zeta: Cell, conj_f: Conjoint, conj_g: Conjoint, k, h, name: str = "ξ") -> Cell:
    """ξ: r·f* ⇒ g*·s from ζ: r ⇒ s."""
    _check_frame(dc, zeta, conj_f, conj_g, k, h)
    r, s = dc.top(zeta), dc.bottom(zeta)
    x = dc.hcod(r)
    logger.debug("mate_forward %s: λ⁻¹, α⁻¹, paste, ρ", zeta.name)
    left_part = dc.hcomp_cell(dc.vcomp_cell(conj_g.eta, dc.unit_cell(h)), zeta)
    paste = dc.hcomp_cell(left_part, dc.vcomp_cell(dc.unit_cell(k), conj_f.eps))
    result = dc.vchain(
        dc.rho(dc.hcomp(conj_g.h, s)),
        paste,
        dc.alpha_inv(dc.hunit(x), r, conj_f.h),
        dc.lam_inv(dc.hcomp(r, conj_f.h)),
    )
    return Cell(result.top, result.bottom, result.left, result.right, result.body, name)


def mate_backward(dc: DoubleCategory, xi: Cell, conj_f: Conjoint, conj_g: Conjoint, r, s, name: str = "ζ") -> Cell:
    """ζ: r ⇒ s from ξ: r·f* ⇒ g*·s."""
    if dc.check_frames:
        dc.expect_h(dc.top(xi), dc.hcomp(r, conj_f.h), "mate_backward top")
        dc.expect_h(dc.bottom(xi), dc.hcomp(conj_g.h, s), "mate_backward bottom")
    logger.debug("mate_backward %s: ρ⁻¹, id·η, ε·id, λ", xi.name)
    result = dc.vchain(
        dc.lam(s),
        dc.hcomp_cell(conj_g.eps, dc.cell_id(s)),
        xi,
        dc.hcomp_cell(dc.cell_id(r), conj_f.eta),
        dc.rho_inv(r),
    )
    return Cell(result.top, result.bottom, result.left, result.right, result.body, name)


def check_mate_conditions(
    dc: DoubleCategory,
    zeta: Cell,
    xi: Cell,
    conj_f: Conjoint,
    conj_g: Conjoint,
    k,
    h,
    depth: Optional[int] = None,
    report: Optional[Report] = None,
) -> Report:
    """Both characterizing equations of a mate pair and both round trips."""
    depth = dc.probe_depth if depth is None else depth
    report = report or Report(f"mates {zeta.name} ~ {xi.name}", depth=depth)
    r, s = dc.top(zeta), dc.bottom(zeta)
    frame = f"{zeta.name}/{xi.name}"
    compare(
        report, dc, "(c) counit form", frame,
        lambda: dc.vchain(dc.lam(s), dc.hcomp_cell(conj_g.eps, dc.cell_id(s)), xi),
        lambda: dc.vcomp_cell(dc.rho(s), dc.hcomp_cell(zeta, dc.vcomp_cell(dc.unit_cell(k), conj_f.eps))),
        depth,
    )
    compare(
        report, dc, "(d) unit form", frame,
        lambda: dc.vchain(xi, dc.hcomp_cell(dc.cell_id(r), conj_f.eta), dc.rho_inv(r)),
        lambda: dc.vcomp_cell(dc.hcomp_cell(dc.vcomp_cell(conj_g.eta, dc.unit_cell(h)), zeta), dc.lam_inv(r)),
        depth,
    )
    compare(
        report, dc, "backward after forward", frame,
        lambda: mate_backward(dc, mate_forward(dc, zeta, conj_f, conj_g, k, h), conj_f, conj_g, r, s),
        lambda: zeta,
        depth,
    )
    compare(
        report, dc, "forward after backward", frame,
        lambda: mate_forward(dc, mate_backward(dc, xi, conj_f, conj_g, r, s), conj_f, conj_g, k, h),
        lambda: xi,
        depth,
    )
    return report


def check_degenerate_forms(
    dc: DoubleCategory,
    zeta: Cell,
    conj_f: Conjoint,
    conj_g: Conjoint,
    k,
    h,
    depth: Optional[int] = None,
    report: Optional[Report] = None,
) -> Report:
    """The simplified equations that apply when a side of the frame is trivial.

    Only the forms whose hypotheses hold for the given frame are recorded.
    """
    depth = dc.probe_depth if depth is None else depth
    report = report or Report(f"degenerate mates of {zeta.name}", depth=depth)
    xi = mate_forward(dc, zeta, conj_f, conj_g, k, h)
    r, s = dc.top(zeta), dc.bottom(zeta)
    frame = zeta.name
    unit_s = dc.same_h(s, dc.hunit(dc.hdom(s)), depth)
    unit_r = dc.same_h(r, dc.hunit(dc.hdom(r)), depth)
    if is_identity(dc, k, depth):
        compare(
            report, dc, "k = id: (ε·id)∘ξ = γ⁻¹∘(ζ·ε)", frame,
            lambda: dc.vcomp_cell(dc.hcomp_cell(conj_g.eps, dc.cell_id(s)), xi),
            lambda: dc.vchain(dc.lam_inv(s), dc.rho(s), dc.hcomp_cell(zeta, conj_f.eps)),
            depth,
        )
    if is_identity(dc, h, depth):
        compare(
            report, dc, "h = id: ξ∘(id·η) = (η·ζ)∘γ⁻¹", frame,
            lambda: dc.vcomp_cell(xi, dc.hcomp_cell(dc.cell_id(r), conj_f.eta)),
            lambda: dc.vchain(dc.hcomp_cell(conj_g.eta, zeta), dc.lam_inv(r), dc.rho(r)),
            depth,
        )
    if unit_s:
        compare(
            report, dc, "s = 1: ε∘(ρ∘ξ) = ρ∘(ζ·(1_k∘ε))", frame,
            lambda: dc.vchain(conj_g.eps, dc.rho(conj_g.h), xi),
            lambda: dc.vcomp_cell(dc.rho(s), dc.hcomp_cell(zeta, dc.vcomp_cell(dc.unit_cell(k), conj_f.eps))),
            depth,
        )
    if unit_r:
        compare(
            report, dc, "r = 1: (ξ∘λ⁻¹)∘η = ((η∘1_h)·ζ)∘λ⁻¹", frame,
            lambda: dc.vchain(xi, dc.lam_inv(conj_f.h), conj_f.eta),
            lambda: dc.vcomp_cell(dc.hcomp_cell(dc.vcomp_cell(conj_g.eta, dc.unit_cell(h)), zeta), dc.lam_inv(r)),
            depth,
        )
    if is_identity(dc, conj_f.f, depth):
        compare(
            report, dc, "f = id: ζ = λ∘(ε·id)∘(ξ∘ρ⁻¹)", frame,
            lambda: dc.vchain(dc.lam(s), dc.hcomp_cell(conj_g.eps, dc.cell_id(s)), xi, dc.rho_inv(r)),
            lambda: zeta,
            depth,
        )
    if is_identity(dc, conj_g.f, depth):
        compare(
            report, dc, "g = id: ζ = (λ∘ξ)∘(id·η)∘ρ⁻¹", frame,
            lambda: dc.vchain(dc.lam(s), xi, dc.hcomp_cell(dc.cell_id(r), conj_f.eta), dc.rho_inv(r)),
            lambda: zeta,
            depth,
        )
    return report


# mates of commutative squares


def _square_mate(dc: DoubleCategory, k, f, g, h, name: str) -> Cell:
    depth = dc.probe_depth
    kf, gh = dc.vcomp(k, f), dc.vcomp(g, h)
    bad = dc.vdiff(kf, gh, depth)
    if bad is not None:
        raise SquareNotCommuting("k∘f and g∘h differ", bad)
    conj_f, conj_g = dc.conjoint(f), dc.conjoint(g)
    zeta = dc.unit_cell(kf)
    xi = mate_forward(dc, zeta, conj_f, conj_g, k, h)
    theta = dc.vchain(dc.rho(conj_g.h), xi, dc.lam_inv(conj_f.h))
    return Cell(theta.top, theta.bottom, theta.left, theta.right, theta.body, name)


def square_mate(dc: DoubleCategory, k, f, g, h, side: str = "conjoint", name: str = "θ") -> Cell:
    """Mate of the commutative square ``k∘f = g∘h``.

    conjoint side: θ: f* ⇒ g* with ε∘θ = 1_k∘ε and θ∘η = η∘1_h (left k, right h).
    companion side: θ: f_! ⇒ g_! with left h and right k.
    The other conjoint mate ω: h* ⇒ k* is ``square_mate(dc, g, h, k, f)``.
    """
    if side == "conjoint":
        return _square_mate(dc, k, f, g, h, name)
    if side == "companion":
        return _square_mate(HorizontalOpposite(dc), k, f, g, h, name)
    raise ValueError(f"unknown side {side!r}")


def check_square_mate(dc: DoubleCategory, k, f, g, h, theta: Cell, side: str = "conjoint", depth: Optional[int] = None) -> Report:
    if side == "companion":
        dc = HorizontalOpposite(dc)
    depth = dc.probe_depth if depth is None else depth
    report = Report(f"square mate {theta.name} ({side})", depth=depth)
    conj_f, conj_g = dc.conjoint(f), dc.conjoint(g)
    compare(
        report, dc, "ε∘θ = 1_k∘ε", theta.name,
        lambda: dc.vcomp_cell(conj_g.eps, theta),
        lambda: dc.vcomp_cell(dc.unit_cell(k), conj_f.eps),
        depth,
    )
    compare(
        report, dc, "θ∘η = η∘1_h", theta.name,
        lambda: dc.vcomp_cell(theta, conj_f.eta),
        lambda: dc.vcomp_cell(conj_g.eta, dc.unit_cell(h)),
        depth,
    )
    return report


# composites of conjoints


def pi_conjoint(dc: DoubleCategory, f, g, depth: Optional[int] = None) -> tuple[Cell, Cell, Report]:
    """π: f*·g* ⇒ (g∘f)* with its inverse (the mate of η∘1_f) and the checks."""
    depth = dc.probe_depth if depth is None else depth
    if not dc.same_zero(dc.vcod(f), dc.vdom(g), depth):
        raise NonComposable("cod f differs from dom g", {"f": getattr(f, "name", "f"), "g": getattr(g, "name", "g")})
    a, c = dc.vdom(f), dc.vcod(g)
    gf = dc.vcomp(g, f)
    conj_f, conj_g, conj_gf = dc.conjoint(f), dc.conjoint(g), dc.conjoint(gf)

    zeta = dc.vcomp_cell(dc.unit_cell(g), conj_f.eps)
    xi = mate_forward(dc, zeta, conj_g, conj_gf, dc.vid(c), dc.vid(a))
    pi = dc.vcomp_cell(dc.rho(conj_gf.h), xi)
    pi = Cell(pi.top, pi.bottom, pi.left, pi.right, pi.body, "π")

    zeta_inv = dc.vcomp_cell(conj_g.eta, dc.unit_cell(f))
    xi_inv = mate_forward(dc, zeta_inv, conj_gf, conj_f, dc.vid(c), dc.vid(a))
    pi_inv = dc.vcomp_cell(xi_inv, dc.lam_inv(conj_gf.h))
    pi_inv = Cell(pi_inv.top, pi_inv.bottom, pi_inv.left, pi_inv.right, pi_inv.body, "π⁻¹")

    report = Report("conjoint composite π", depth=depth)
    compare(
        report, dc, "ε∘π = ρ∘((1_g∘ε)·ε)", "π",
        lambda: dc.vcomp_cell(conj_gf.eps, pi),
        lambda: dc.vcomp_cell(dc.rho(dc.hunit(c)), dc.hcomp_cell(zeta, conj_g.eps)),
        depth,
    )
    compare(report, dc, "π∘π⁻¹ = id", "π", lambda: dc.vcomp_cell(pi, pi_inv), lambda: dc.cell_id(conj_gf.h), depth)
    compare(
        report, dc, "π⁻¹∘π = id", "π",
        lambda: dc.vcomp_cell(pi_inv, pi),
        lambda: dc.cell_id(dc.hcomp(conj_f.h, conj_g.h)),
        depth,
    )
    return pi, pi_inv, report


# preservation of conjoints by functors


def sigma(F: LaxFunctor, f, depth: int = 3) -> Cell:
    """σ^F_f: (Ff)* ⇒ F(f*), the mate of ``Fη∘e^F``."""
    F = as_lax(F, depth)
    D, E = F.source, F.target
    a = D.vdom(f)
    Fa = F.obj(a)
    zeta = E.vcomp_cell(F.cell(D.conjoint(f).eta), F.e(a))
    conj_Ff = E.conjoint(F.vert(f))
    xi = mate_forward(E, zeta, conj_Ff, identity_conjoint(E, Fa), E.vid(E.vcod(F.vert(f))), E.vid(Fa))
    s = E.bottom(zeta)
    result = E.vchain(E.lam(s), xi, E.lam_inv(conj_Ff.h))
    return Cell(result.top, result.bottom, result.left, result.right, result.body, f"σ^{F.name}_{getattr(f, 'name', 'f')}")


def tau(F: LaxFunctor, f, depth: int = 3) -> Cell:
    """τ^F_f: (Ff)_! ⇒ F(f_!), the companion analogue of σ."""
    F = as_lax(F, depth)
    Fo = opposite_functor(F, HorizontalOpposite(F.source), HorizontalOpposite(F.target))
    c = sigma(Fo, f, depth)
    return Cell(c.top, c.bottom, c.left, c.right, c.body, f"τ^{F.name}_{getattr(f, 'name', 'f')}")


def check_sigma(F: LaxFunctor, f, depth: int = 3, report: Optional[Report] = None) -> Report:
    """``Fε∘σ = e^F∘ε`` and whether σ is invertible."""
    F = as_lax(F, depth)
    D, E = F.source, F.target
    b = D.vcod(f)
    report = report or Report(f"conjoint preservation by {F.name}", depth=depth)
    s = sigma(F, f, depth)
    compare(
        report, E, "Fε∘σ = e∘ε", s.name,
        lambda: E.vcomp_cell(F.cell(D.conjoint(f).eps), s),
        lambda: E.vcomp_cell(F.e(b), E.conjoint(F.vert(f)).eps),
        depth,
    )
    report.data.setdefault("sigma_invertible", {})[s.name] = E.invert_cell(s, depth) is not None
    return report


def check_sigma_composition(G: LaxFunctor, F: LaxFunctor, GF: LaxFunctor, f, depth: int = 3) -> Report:
    """σ^{G∘F}_f = Gσ^F_f ∘ σ^G_{Ff}."""
    E = GF.target
    report = Report(f"σ of {GF.name}", depth=depth)
    compare(
        report, E, "σ^{GF} = Gσ^F∘σ^G", getattr(f, "name", "f"),
        lambda: sigma(GF, f, depth),
        lambda: E.vcomp_cell(G.cell(sigma(F, f, depth)), sigma(G, F.vert(f), depth)),
        depth,
    )
    return report


def inverse_attempt(F: LaxFunctor, f, r=None, depth: int = 3) -> Report:
    """Try to invert σ^F_f via χ^F, and ``m^F∘(σ^F·id)`` via l^F when ``r`` is given.

    ``f: z → y`` and ``r: x ↛ y``. The verdicts land in ``report.data``.
    """
    F = as_lax(F, depth)
    D, E = F.source, F.target
    y = D.vcod(f)
    Fy, Fz = F.obj(y), F.obj(D.vdom(f))
    Ff = F.vert(f)
    conj_Ff = E.conjoint(Ff)
    report = Report(f"inverse of σ^{F.name}", depth=depth)
    s = sigma(F, f, depth)
    e_inv = E.invert_cell(F.e(y), depth)
    report.data["normal_at"] = e_inv is not None
    if e_inv is not None:
        zeta = E.vcomp_cell(e_inv, F.cell(D.conjoint(f).eps))
        xi = mate_forward(E, zeta, identity_conjoint(E, Fy), conj_Ff, E.vid(Fy), E.vid(Fz))
        chi = E.vchain(E.rho(conj_Ff.h), xi, E.rho_inv(E.top(zeta)))
        ok_left = compare(report, E, "χ∘σ = id", s.name, lambda: E.vcomp_cell(chi, s), lambda: E.cell_id(conj_Ff.h), depth)
        ok_right = compare(
            report, E, "σ∘χ = id", s.name, lambda: E.vcomp_cell(s, chi), lambda: E.cell_id(F.hcell(D.conjoint(f).h)), depth
        )
        report.data["sigma_invertible"] = ok_left and ok_right
    else:
        report.data["sigma_invertible"] = E.invert_cell(s, depth) is not None
    if r is not None:
        report.data["m_sigma_invertible"] = _check_l(report, F, f, r, s, depth)
    logger.info("%s: sigma invertible=%s", report.title, report.data["sigma_invertible"])
    return report


def _check_l(report: Report, F: LaxFunctor, f, r, s: Cell, depth: int) -> bool:
    D, E = F.source, F.target
    conj_f = D.conjoint(f)
    conj_Ff = E.conjoint(F.vert(f))
    fr = D.hcomp(conj_f.h, r)
    theta = D.vcomp_cell(D.lam(r), D.hcomp_cell(conj_f.eps, D.cell_id(r)))
    l_F = E.vcomp_cell(E.hcomp_cell(conj_Ff.eta, F.cell(theta)), E.lam_inv(F.hcell(fr)))
    m_sigma = E.vcomp_cell(F.m(conj_f.h, r), E.hcomp_cell(s, E.cell_id(F.hcell(r))))
    one = compare(report, E, "m∘(σ·id)∘l = id", "l", lambda: E.vcomp_cell(m_sigma, l_F), lambda: E.cell_id(F.hcell(fr)), depth)
    two = compare(
        report, E, "l∘m∘(σ·id) = id", "l",
        lambda: E.vcomp_cell(l_F, m_sigma),
        lambda: E.cell_id(E.hcomp(conj_Ff.h, F.hcell(r))),
        depth,
    )
    report.data["m_invertible"] = E.invert_cell(F.m(conj_f.h, r), depth) is not None
    return one and two


# conjoints and companions of vertical transformations


def _lax_pair(phi: VerticalTransformation, depth: int) -> tuple[LaxFunctor, LaxFunctor]:
    return as_lax(phi.source, depth), as_lax(phi.target, depth)


def conjoint_htrans(
    phi: VerticalTransformation,
    samples: Optional[Samples] = None,
    depth: int = 3,
    dc: Optional[DoubleCategory] = None,
) -> tuple[HorizontalTransformation, Report]:
    """φ*: G ⇸ F for φ: F ⇒ G, with components the conjoints of φ_x.

    ``φ*_f`` is the mate of the naturality square of φ at ``f``; ``n_r`` is the mate of
    ``φ_r``. With ``samples`` the result is run through ``check_horiz_trans`` and the
    strongness verdict is recorded, including the pullback criterion when the target
    exposes right-leg squares.
    """
    F, G = _lax_pair(phi, depth)
    E = dc or F.target
    D = F.source

    def component(x):
        return E.conjoint(phi.at(x)).h

    def cell_at(f):
        x, y = D.vdom(f), D.vcod(f)
        return square_mate(E, G.vert(f), phi.at(x), phi.at(y), F.vert(f), name=f"{phi.name}*_{getattr(f, 'name', 'f')}")

    def naturality(r):
        x, y = D.hdom(r), D.hcod(r)
        return mate_forward(
            E,
            phi.cell(r),
            E.conjoint(phi.at(x)),
            E.conjoint(phi.at(y)),
            E.vid(G.obj(x)),
            E.vid(F.obj(y)),
            name=f"n^{phi.name}*_{getattr(r, 'name', 'r')}",
        )

    psi = HorizontalTransformation(f"{phi.name}*", G, F, component, cell_at, naturality, orientation="lax")
    report = Report(f"conjoint of {phi.name}", depth=depth)
    if samples is not None:
        report.extend(check_horiz_trans(psi, samples, depth))
        report.data["strong"] = strongness(psi, phi, samples.hcells, depth, report, E, require=False)
    return psi, report


def strongness(
    psi: HorizontalTransformation,
    phi: VerticalTransformation,
    hcells: list,
    depth: int,
    report: Optional[Report] = None,
    dc: Optional[DoubleCategory] = None,
    require: bool = True,
) -> bool:
    """Whether every sampled ``n_r`` is invertible; cross-checked by the pullback criterion.

    With ``require`` a non-invertible ``n_r`` is recorded as a failure carrying the frame, the
    entry and the element where the inversion broke; otherwise it only lands in the report data.
    """
    E = dc or psi.source.target
    report = report if report is not None else Report(f"strongness of {psi.name}", depth=depth)
    pullback_test = getattr(E, "vsquare", None)
    strong = True
    for r in hcells:
        frame = getattr(r, "name", "r")
        try:
            n = psi.n(r)
            defect = E.invert_defect(n, depth)
        except EngineError as exc:
            report.record("n invertible", False, frame, {"error": type(exc).__name__, **exc.witness})
            strong = False
            continue
        invertible = defect is None
        strong = strong and invertible
        report.data.setdefault("n_invertible", {})[frame] = invertible
        if not invertible:
            witness = {"hcell": frame, **defect}
            report.data.setdefault("not_invertible", {})[frame] = witness
            if require:
                report.record("n invertible", False, frame, witness)
        if pullback_test is not None:
            square = pullback_test(phi.cell(r), depth)
            report.data.setdefault("right_leg_pullback", {})[frame] = square is None
            report.record("strong iff right-leg square is a pullback", invertible == (square is None), frame, square)
    logger.info("%s: strong=%s", psi.name, strong)
    return strong


def companion_htrans(
    phi: VerticalTransformation,
    samples: Optional[Samples] = None,
    depth: int = 3,
) -> tuple[HorizontalTransformation, Report]:
    """φ_!: F ⇸ G (oplax), the conjoint construction run in the horizontal opposite."""
    F, G = _lax_pair(phi, depth)
    Do, Eo = HorizontalOpposite(F.source), HorizontalOpposite(F.target)
    phi_o = VerticalTransformation(
        f"{phi.name}°",
        opposite_functor(F, Do, Eo),
        opposite_functor(G, Do, Eo),
        phi.at,
        phi.cell,
    )
    psi_o, report = conjoint_htrans(phi_o, samples, depth)
    psi = HorizontalTransformation(
        f"{phi.name}_!",
        F,
        G,
        psi_o.comp,
        psi_o.cell_at,
        psi_o.n,
        orientation="oplax",
    )
    return psi, report



def mate_suite(dc: DoubleCategory, samples: Samples, depth: Optional[int] = None) -> Report:
    """Mate pairs for the sampled 2-cells, framed by their own sides and identities."""
    depth = dc.probe_depth if depth is None else depth
    report = Report(f"mates on {dc.name}", depth=depth)
    for zeta in samples.cells:
        f, g = dc.left(zeta), dc.right(zeta)
        k, h = dc.vid(dc.vcod(f)), dc.vid(dc.vdom(g))
        conj_f, conj_g = dc.conjoint(f), dc.conjoint(g)
        try:
            xi = mate_forward(dc, zeta, conj_f, conj_g, k, h)
        except EngineError as exc:
            report.record("mate exists", False, zeta.name, {"error": type(exc).__name__, **exc.witness})
            continue
        check_mate_conditions(dc, zeta, xi, conj_f, conj_g, k, h, depth, report)
        check_degenerate_forms(dc, zeta, conj_f, conj_g, k, h, depth, report)
    logger.info("%s: %d checks, passed=%s", report.title, len(report.results), report.passed)
    return report
