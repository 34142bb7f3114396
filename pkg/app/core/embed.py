"""Enriched structures inside internal ones.

For a cartesian monad ``T`` on a backend the copower ⊣ points conjunction induces
``F_! ⊣ G_!`` between algebras over ``T̄`` on V-Mat (enriched structures) and algebras over
``T`` on Span(V) (internal structures). ``F_!`` exists when ``ε̂_{T(−·1)}`` has strong
conjoints, which happens exactly when ``T`` is fibrewise discrete.
"""
import logging
from dataclasses import dataclass, field
from functools import cache
from itertools import combinations
from typing import Optional, Sequence

from .adjunction import conjunction
from .backends import Backend, VMap, VObject, vsquare_defect
from .carriers import FiberedMap, FiniteObject, constant, encode
from .doublecat import Samples
from .errors import CounitNotMono, EngineError, NotDiscreteObjects, NotStrongConjoint
from .hla import (
    HLA,
    HLAMorphism,
    InducedAdjunction,
    adj_counit_component,
    adj_unit_component,
    change_of_base_morphism,
    cob_data,
    enumerate_hla_morphisms,
    induced_adjunction,
    morphism_diff,
)
from .matrices import mat_samples
from .monads import CartesianMonad, CartesianTransformation
from .reports import Report
from .sampling import random_function, random_set, rng_for

logger = logging.getLogger(__name__)

VERIFIED = "verified-to-depth"
COUNTEREXAMPLE = "counterexample"
# largest set size scanned when no bound is given
SET_BOUND = 3


@dataclass
class DiscretenessVerdict:
    monad: str
    backend: str
    status: str
    depth: int
    set_bound: int
    witness: dict = field(default_factory=dict)
    exact: bool = False
    checked: int = 0
    via: Optional[str] = None
    capped: bool = False

    @property
    def verified(self) -> bool:
        return self.status == VERIFIED

    def as_dict(self) -> dict:
        return {
            "monad": self.monad,
            "backend": self.backend,
            "status": self.status,
            "depth": self.depth,
            "set_bound": self.set_bound,
            "witness": self.witness,
            "exact": self.exact,
            "checked": self.checked,
            "via": self.via,
            "capped": self.capped,
        }

    def to_text(self) -> str:
        head = f"{self.monad} on {self.backend}: {self.status}"
        if self.verified:
            cap = f", capped below depth {self.depth}" if self.capped else ""
            return f"{head} {self.depth} (sets of size ≤ {self.set_bound}{cap}, {self.checked} fibres)"
        return f"{head} X={self.witness.get('X')} p={self.witness.get('p')}"


def _set(n: int) -> FiniteObject:
    return FiniteObject(str(n), tuple(range(n)))


def point_map(backend: Backend, v: VObject, p) -> VMap:
    """The global element ``p: 1 → v``."""
    one = backend.terminal()
    comps = {s: constant(one.parts[s], v.parts[s], backend.component(p, s), name="p") for s in backend.sorts}
    return VMap(one, v, comps, name=f"p={encode(p)}")


def tau_fibre(T: CartesianMonad, n: int, p) -> VObject:
    """τ_{X,p}: the pullback of ``T(!·1): T(X·1) → T1`` along ``p: 1 → T1`` for ``|X| = n``."""
    b = T.backend
    X1 = b.copower(_set(n))
    T1 = T.obj(b.terminal())
    return b.pullback(T.fmap(b.to_terminal(X1)), point_map(b, T1, p)).apex


def discrete_at(T: CartesianMonad, n: int, p, depth: int = 3) -> Report:
    """Whether τ_{X,p} is discrete for one set size and one point."""
    tau = tau_fibre(T, n, p)
    report = T.backend.is_discrete(tau, depth)
    report.data.update({"X": n, "p": encode(p), "sizes": tau.size(depth)})
    return report


def _size_evident(sizes: dict) -> bool:
    """Every sort has ≥ 2 elements and the sorts differ in size, so the fibre is no copower."""
    counts = list(sizes.values())
    return all(c >= 2 for c in counts) and len(set(counts)) > 1


def fibrewise_discrete(T: CartesianMonad, depth: int = 4, set_bound: Optional[int] = None) -> DiscretenessVerdict:
    """Scan ``|X| ≤ set_bound`` and the points of ``T1`` enumerated to ``depth``.

    ``set_bound`` defaults to ``min(depth, SET_BOUND)``; the verdict records the bound used and
    whether it cut the requested depth. The scan runs set sizes upwards and points in
    enumeration order. It stops at the first non-discrete fibre whose sizes alone rule out a
    copower (``_size_evident``); if none turns up, the first non-discrete fibre is the witness.
    """
    b = T.backend
    set_bound = min(depth, SET_BOUND) if set_bound is None else set_bound
    points = b.points(T.obj(b.terminal()))
    verdict = DiscretenessVerdict(T.name, b.name, VERIFIED, depth, set_bound, exact=points.is_finite)
    verdict.capped = set_bound < depth
    if verdict.capped:
        logger.info("%s on %s: set sizes capped at %d below depth %d", T.name, b.name, set_bound, depth)
    first = None
    for n in range(set_bound + 1):
        for p in points.enumerate(depth):
            report = discrete_at(T, n, p, depth)
            verdict.checked += 1
            if report.passed:
                continue
            failure = report.failures[0]
            witness = {
                "X": n,
                "p": encode(p),
                "sizes": report.data["sizes"],
                "sort": failure.witness.get("sort"),
                "element": failure.witness.get("element"),
                "points": failure.witness.get("points"),
            }
            if first is None:
                first = witness
            if _size_evident(report.data["sizes"]):
                return _counterexample(verdict, witness, first)
    if first is not None:
        return _counterexample(verdict, first, first)
    if not points.is_finite:
        verdict.witness = {"note": "points of T1 are infinite; enumerated to depth"}
    logger.info("%s on %s: %s %d", T.name, b.name, verdict.status, depth)
    return verdict


def _counterexample(verdict: DiscretenessVerdict, witness: dict, first: dict) -> DiscretenessVerdict:
    verdict.status = COUNTEREXAMPLE
    verdict.witness = dict(witness)
    if first is not witness:
        verdict.witness["first"] = {"X": first["X"], "p": first["p"]}
    logger.info("%s on %s: non-discrete fibre at X=%d p=%s", verdict.monad, verdict.backend, witness["X"], witness["p"])
    return verdict


def fibrewise_discrete_via(alpha: CartesianTransformation, verdict: DiscretenessVerdict, depth: int = 4) -> DiscretenessVerdict:
    """Transport a verdict for ``alpha.target`` to ``alpha.source`` along a cartesian ``alpha``.

    When a sampled naturality square at ``X·1 → 1`` fails to be a pullback, or the target
    verdict is not verified, the source is scanned directly.
    """
    S, T = alpha.source, alpha.target
    b = S.backend
    if verdict.verified:
        one = b.terminal()
        cartesian = True
        for n in range(verdict.set_bound + 1):
            X1 = b.copower(_set(n))
            bang = b.to_terminal(X1)
            bad = vsquare_defect(alpha.at(X1), S.fmap(bang), T.fmap(bang), alpha.at(one), depth)
            if bad is not None:
                cartesian = False
                logger.info("%s is not cartesian at X=%d: %s", alpha.name, n, bad)
                break
        if cartesian:
            return DiscretenessVerdict(
                S.name, b.name, VERIFIED, verdict.depth, verdict.set_bound, exact=verdict.exact, checked=verdict.checked, via=alpha.name
            )
    return fibrewise_discrete(S, depth, verdict.set_bound)


def sample_functions(seed: int, count: int, max_size: int = 4) -> list[FiberedMap]:
    rng = rng_for(seed, "functions")
    found = []
    while len(found) < count:
        X, Y = random_set(rng, max_size, "X"), random_set(rng, max_size, "Y", low=1)
        f = random_function(X, Y, rng, f"f{len(found)}")
        if f is not None:
            found.append(f)
    return found


def counit_cartesian_check(T: CartesianMonad, functions: Sequence[FiberedMap], depth: int = 3) -> Report:
    """Naturality squares of ``ε̂_{T(−·1)}`` at ``f·1`` are pullbacks."""
    b = T.backend
    conj = conjunction(b)
    report = Report(f"ε̂_{{{T.name}(−·1)}} cartesian on {b.title}", depth=depth)
    for f in functions:
        TX, TY = T.obj(b.copower(f.dom)), T.obj(b.copower(f.cod))
        Tf = T.fmap(b.copower_map(f))
        top, bottom = conj.counit_at(TX), conj.counit_at(TY)
        left = b.copower_map(b.points_map(Tf))
        try:
            bad = vsquare_defect(top, left, Tf, bottom, depth)
        except EngineError as exc:
            bad = {"error": type(exc).__name__, **exc.witness}
        report.record("naturality square is a pullback", bad is None, f"{f.name}: {f.dom.name}→{f.cod.name}", bad)
    report.exact = False
    logger.info("%s: passed=%s", report.title, report.passed)
    return report


def strong_conjoint_check(T: CartesianMonad, samples: Samples, depth: int = 3) -> Report:
    """Strongness of the conjoint of ``ε̂_{T(−·1)}`` on sampled matrices."""
    adj = shared_adjunction(T)
    report = Report(f"strong conjoint of ε̂_{{{T.name}(−·1)}}", depth=depth)
    try:
        data = cob_data(adj.oplax, samples, depth)
        report.extend(data.report)
        report.data["strong"] = True
    except NotStrongConjoint as exc:
        report.record("conjoint is strong", False, T.name, exc.witness)
        report.data["strong"] = False
    return report


def criteria_agreement(T: CartesianMonad, depth: int = 3, seed: int = 0, count: int = 4) -> Report:
    """The three discreteness criteria side by side; passes when they agree.

    The counit criterion only matches the other two on connected backends; elsewhere it is
    reported but left out of the comparison.
    """
    b = T.backend
    verdict = fibrewise_discrete(T, depth)
    cartesian = counit_cartesian_check(T, sample_functions(seed, count), depth)
    conj = conjunction(b)
    strong = strong_conjoint_check(T, mat_samples(conj.mat, rng_for(seed, "mat"), count=count), depth)
    connected = b.connectedness_probe([b.terminal(), b.terminal()], depth).passed
    report = Report(f"discreteness criteria for {T.name} on {b.title}", depth=depth, exact=False)
    answers = {
        "fibrewise_discrete": verdict.verified,
        "counit_cartesian": cartesian.passed,
        "strong_conjoint": bool(strong.data.get("strong")),
    }
    report.data.update(answers)
    report.data["connected"] = connected
    report.data["verdict"] = verdict.as_dict()
    compared = answers if connected else {k: v for k, v in answers.items() if k != "counit_cartesian"}
    report.record("criteria agree", len(set(compared.values())) == 1, T.name, answers)
    if not answers["strong_conjoint"]:
        report.data["strong_witness"] = strong.failures[0].witness if strong.failures else {}
    return report


# the embedding and its partner


@cache
def shared_adjunction(T: CartesianMonad) -> InducedAdjunction:
    return induced_adjunction(T)


def _backend_monad(h: HLA) -> CartesianMonad:
    if h.monad.base is None:
        raise NotStrongConjoint("structure is not over a monad induced from a backend monad", {"monad": h.monad.name})
    return h.monad.base


def embed(e: HLA, verdict: Optional[DiscretenessVerdict] = None, check: bool = True) -> HLA:
    """``F_!``: an enriched structure over ``T̄`` to an internal structure over ``T``."""
    T = _backend_monad(e)
    if verdict is not None and not verdict.verified:
        raise NotStrongConjoint(f"{T.name} is not fibrewise discrete", verdict.witness)
    out = shared_adjunction(T).lower(e, check=check)
    logger.debug("embedded %s as %s", e.name, out.name)
    return out


def enrich(i: HLA, check: bool = True) -> HLA:
    """``G_!``: an internal structure over ``T`` to an enriched structure over ``T̄``."""
    T = _backend_monad(i)
    T.backend.finite_points(i.x)
    out = shared_adjunction(T).upper(i, check=check)
    logger.debug("enriched %s as %s", i.name, out.name)
    return out


def round_trip(e: HLA, depth: int = 3) -> tuple[HLAMorphism, Report]:
    """The unit ``e → G_!F_!e`` and whether it has an explicit two-sided inverse."""
    T = _backend_monad(e)
    unit, report = adj_unit_component(shared_adjunction(T), e, depth)
    discrete = T.backend.is_discrete(embed(e, check=False).x, depth)
    report.extend(discrete, "embedded objects: ")
    report.record("unit invertible", report.data["invertible"], e.name)
    return unit, report


def ff_probe(e1: HLA, e2: HLA, limit: int = 20_000, depth: int = 3) -> Report:
    """``Hom(e1, e2) → Hom(F_!e1, F_!e2)`` is a bijection, by enumerating both sides."""
    T = _backend_monad(e1)
    adj = shared_adjunction(T)
    report = Report(f"fully faithful on {e1.name}, {e2.name}", depth=depth)
    lhs = enumerate_hla_morphisms(e1, e2, limit, depth)
    E1, E2 = adj.lower(e1, check=False), adj.lower(e2, check=False)
    rhs = enumerate_hla_morphisms(E1, E2, limit, depth)
    images = [change_of_base_morphism(adj.oplax, m, E1, E2, adj.lower_data) for m in lhs]
    injective = all(morphism_diff(u, v, depth) is not None for u, v in combinations(images, 2))
    surjective = all(any(morphism_diff(n, im, depth) is None for im in images) for n in rhs)
    counts = {"enriched": len(lhs), "internal": len(rhs)}
    report.record("transport injective", injective, f"{e1.name}→{e2.name}", counts)
    report.record("transport surjective", surjective and len(lhs) == len(rhs), f"{e1.name}→{e2.name}", counts)
    report.data.update(counts)
    report.exact = E1.a.apex.is_finite and E2.a.apex.is_finite
    return report


# discrete objects


@dataclass
class SplitSection:
    """``ω`` with ``ε̂_a∘ω = id``; ``two_sided`` when ``ε̂_{T1}`` is mono on the enumerated points."""

    omega: VMap
    two_sided: bool
    report: Report
    enriched: Optional[HLA] = None
    counit: Optional[HLAMorphism] = None


def counit_mono(T: CartesianMonad, depth: int = 3, strict: bool = False) -> Report:
    """``ε̂_{T1}`` injective on the points enumerated to ``depth``; ``strict`` raises CounitNotMono."""
    b = T.backend
    T1 = T.obj(b.terminal())
    counit = conjunction(b).counit_at(T1)
    report = Report(f"ε̂_{{{T.name}1}} mono", depth=depth, exact=b.points(T1).is_finite)
    for s in b.sorts:
        seen: dict = {}
        witness = None
        for p in counit.dom.parts[s].enumerate(depth):
            image = counit(s, p)
            if image in seen and seen[image] != p:
                witness = {"sort": s, "element": encode(image), "points": [encode(seen[image]), encode(p)]}
                break
            seen[image] = p
        report.record(f"injective on {s}", witness is None, T.name, witness)
    if strict and not report.passed:
        raise CounitNotMono(f"ε̂_{{{T.name}1}} is not a monomorphism", report.failures[0].witness)
    return report


def split_epi_section(i: HLA, depth: int = 3, strict: bool = False) -> SplitSection:
    """The section ``ω: M_a → M_{V(1,a)·1}`` of ``ε̂_a`` for ``i`` with discrete objects.

    ``ω(m) = ((l̂(m), r̂(m)), m)`` where ``l̂(m)`` is the point of ``T(x)`` over ``l(m)`` lying
    over the unit point of ``T1`` and ``r̂(m)`` the point of ``x`` over ``r(m)``.
    """
    T = _backend_monad(i)
    b = T.backend
    conj = conjunction(b)
    discrete = b.is_discrete(i.x, depth)
    if not discrete.passed:
        raise NotDiscreteObjects(f"objects of {i.name} are not discrete", discrete.failures[0].witness)
    a = i.a
    Tx = a.dom
    eps_a = conj.counit_cell(a)
    target = eps_a.top.apex
    bang = b.points_map(T.fmap(b.to_terminal(i.x)))
    one = b.terminal()
    unit_point = b.make_point({s: T.unit(one)(s, "*") for s in b.sorts})
    left_counit, right_counit = conj.counit_at(Tx), conj.counit_at(i.x)
    report = Report(f"split section of ε̂_{a.name}", depth=depth, exact=a.apex.is_finite)

    def lift(s, m):
        over = [v for v in left_counit.at(s).fiber(a.l(s, m)).enumerate(depth) if bang(v) == unit_point]
        ws = right_counit.at(s).fiber(a.r(s, m)).enumerate(depth)
        if len(over) != 1 or len(ws) != 1:
            raise NotDiscreteObjects(
                "no unique lift through the counit", {"sort": s, "element": encode(m), "lifts": len(over), "points": len(ws)}
            )
        return ((over[0], ws[0]), m)

    omega = VMap(
        a.apex,
        target,
        {s: FiberedMap(a.apex.parts[s], target.parts[s], lambda m, s=s: lift(s, m), name="ω") for s in b.sorts},
        name="ω",
    )
    for s in b.sorts:
        witness = None
        for m in a.apex.parts[s].enumerate(depth):
            if eps_a.body(s, omega(s, m)) != m:
                witness = {"sort": s, "element": encode(m)}
                break
        report.record("ε̂_a∘ω = id", witness is None, s, witness)
    defect = b.naturality_defect(omega, depth)
    report.record("ω is a backend map", defect is None, "ω", defect)

    mono = counit_mono(T, depth, strict=strict)
    report.extend(mono, "ε̂_T1: ")
    section = SplitSection(omega, False, report)
    if not mono.passed:
        report.data["counit_not_mono"] = mono.failures[0].witness
        return section
    for s in b.sorts:
        witness = None
        for t in target.parts[s].enumerate(depth):
            if omega(s, eps_a.body(s, t)) != t:
                witness = {"sort": s, "element": encode(t)}
                break
        report.record("ω∘ε̂_a = id", witness is None, s, witness)
    section.two_sided = report.passed
    if section.two_sided:
        adj = shared_adjunction(T)
        section.enriched = adj.upper(i)
        section.counit, counit_report = adj_counit_component(adj, i, depth)
        report.extend(counit_report, "counit: ")
        report.data["counit_invertible"] = counit_report.data["invertible"]
    return section
