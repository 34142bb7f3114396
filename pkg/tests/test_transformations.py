import pytest

from app.core.adjunction import conjunction
from app.core.backends import FINGRPH, FINSET, FamilySquare, finite_map, finset, pb_index_coprod_check
from app.core.carriers import FiberedMap, FiniteObject, tabulated
from app.core.doublecat import (
    Modification,
    VerticalTransformation,
    check_horiz_trans,
    check_modification,
    check_vertical_trans,
    hcomp_htrans,
    identity_functor,
    identity_vtrans,
    unit_htrans,
)
from app.core.errors import FibreNotPullback, NonComposable, SquareNotCommuting
from app.core.mates import (
    check_sigma,
    check_square_mate,
    conjoint_htrans,
    inverse_attempt,
    pi_conjoint,
    sigma,
    square_mate,
)
from app.core.monads import (
    LaxMonad,
    check_monad,
    check_monad_morphism,
    induced_monad_on_mat,
    lift_to_span,
    shared_monad,
    unit_morphism,
)
from app.core.matrices import mat_samples
from app.core.sampling import rng_for
from app.core.spans import span_samples


def _square():
    """k∘f = g∘h on sets: A = {0,1,2} over D = {*} two ways."""
    A, B, C, D = finset([0, 1, 2], "A"), finset(["a", "b"], "B"), finset(["c"], "C"), finset(["*"], "D")
    f = finite_map(A, B, {"el": {0: "a", 1: "a", 2: "b"}}, "f")
    k = finite_map(B, D, {"el": {"a": "*", "b": "*"}}, "k")
    h = finite_map(A, C, {"el": {0: "c", 1: "c", 2: "c"}}, "h")
    g = finite_map(C, D, {"el": {"c": "*"}}, "g")
    return f, k, h, g


@pytest.mark.parametrize("backend", [FINSET, FINGRPH], ids=lambda b: b.name)
def test_counit_is_a_vertical_transformation(backend):
    conj = conjunction(backend)
    samples = span_samples(conj.span, rng_for(4, "counit"), count=3, size=2)
    report = check_vertical_trans(conj.counit_transformation(), samples, 3)
    assert report.passed, report.to_text()


def test_unit_horizontal_transformations_compose():
    dc = conjunction(FINSET).span
    F = identity_functor(dc)
    samples = span_samples(dc, rng_for(5, "htrans"), count=3, size=2)
    u = unit_htrans(F)
    assert check_horiz_trans(u, samples, 3).passed
    uu = hcomp_htrans(u, u)
    report = check_horiz_trans(uu, samples, 3)
    assert report.passed, report.to_text()


def test_horizontal_composites_need_matching_functors():
    span = conjunction(FINSET).span
    other = conjunction(FINGRPH).span
    with pytest.raises(NonComposable):
        hcomp_htrans(unit_htrans(identity_functor(span)), unit_htrans(identity_functor(other)))


def test_identity_modification():
    dc = conjunction(FINSET).span
    F = identity_functor(dc)
    u = unit_htrans(F)
    one = identity_vtrans(F)
    gamma = Modification("1", u, u, one, one, lambda x: dc.cell_id(u.comp(x)))
    samples = span_samples(dc, rng_for(6, "modification"), count=3, size=2)
    report = check_modification(gamma, samples, 3)
    assert report.passed, report.to_text()
    assert report.results


def test_conjoint_of_the_counit():
    conj = conjunction(FINSET)
    samples = span_samples(conj.span, rng_for(7, "conjoint"), count=2, size=2)
    psi, report = conjoint_htrans(conj.counit_transformation(), samples, 3, dc=conj.span)
    assert psi.orientation == "lax"
    assert report.passed, report.to_text()
    assert "strong" in report.data


def test_square_mates_on_both_sides():
    dc = conjunction(FINSET).span
    f, k, h, g = _square()
    for side in ("conjoint", "companion"):
        theta = square_mate(dc, k, f, g, h, side=side)
        report = check_square_mate(dc, k, f, g, h, theta, side=side, depth=3)
        assert report.passed, report.to_text()


def test_square_mates_need_a_commuting_square():
    dc = conjunction(FINSET).span
    f, k, h, g = _square()
    B = dc.vcod(f)
    E = finset(["*", "†"], "E")
    bad_k = finite_map(B, E, {"el": {"a": "*", "b": "†"}}, "k'")
    bad_g = finite_map(dc.vcod(h), E, {"el": {"c": "*"}}, "g'")
    with pytest.raises(SquareNotCommuting):
        square_mate(dc, bad_k, f, bad_g, h)


def test_conjoints_compose_up_to_pi():
    dc = conjunction(FINSET).span
    f, k, _, _ = _square()
    pi, pi_inv, report = pi_conjoint(dc, f, k)
    assert report.passed, report.to_text()
    assert pi.name == "π"
    with pytest.raises(NonComposable):
        pi_conjoint(dc, k, f)


@pytest.mark.parametrize("backend", [FINSET, FINGRPH], ids=lambda b: b.name)
def test_points_preserve_conjoints(backend):
    conj = conjunction(backend)
    samples = span_samples(conj.span, rng_for(8, "sigma"), count=2, size=2)
    for f in samples.verticals[:2]:
        assert check_sigma(conj.points, f, 3).passed
        attempt = inverse_attempt(conj.points, f, depth=3)
        assert "sigma_invertible" in attempt.data
        assert sigma(conj.points, f, 3).name.startswith("σ")


def test_copower_preserves_conjoints():
    conj = conjunction(FINSET)
    samples = mat_samples(conj.mat, rng_for(9, "sigma"), count=2, size=2)
    for f in samples.verticals[:2]:
        report = check_sigma(conj.copower, f, 3)
        assert report.passed, report.to_text()
        assert report.data["sigma_invertible"]


def test_induced_monad_is_a_transferred_monad():
    T = shared_monad("free_monoid", FINSET)
    Tbar = induced_monad_on_mat(T)
    samples = mat_samples(Tbar.dc, rng_for(10, "transfer"), count=2, size=2)
    report = check_monad(Tbar, samples, depth=2)
    assert report.passed, report.to_text()


def test_unit_is_a_monad_morphism():
    M = lift_to_span(shared_monad("free_monoid", FINSET))
    samples = span_samples(M.dc, rng_for(11, "morphism"), count=2, size=2)
    report = check_monad_morphism(unit_morphism(M), samples, depth=2)
    assert report.passed, report.to_text()


def _family(a, f_hat, g_hat, b, c, d, h_hat, k_hat):
    one = FiniteObject("I", ("i",))
    idx = tabulated(one, one, {"i": "i"})
    return FamilySquare(
        FINSET, one, one, one, one, idx, idx, idx, idx,
        {"i": a}, {"i": b}, {"i": c}, {"i": d},
        {"i": f_hat}, {"i": g_hat}, {"i": h_hat}, {"i": k_hat},
    )


def test_families_of_pullbacks_sum_to_a_pullback():
    B, C, D = finset([0, 1, 2], "B"), finset(["x"], "C"), finset(["a", "b"], "D")
    h_hat = finite_map(B, D, {"el": {0: "a", 1: "a", 2: "b"}}, "h")
    k_hat = finite_map(C, D, {"el": {"x": "a"}}, "k")
    pb = FINSET.pullback(h_hat, k_hat)
    report = pb_index_coprod_check(_family(pb.apex, pb.proj1, pb.proj0, B, C, D, h_hat, k_hat))
    assert report.passed, report.to_text()
    assert report.data["mediator"]


def test_fibre_squares_must_be_pullbacks():
    B, C, D = finset([0, 1, 2], "B"), finset(["x"], "C"), finset(["a", "b"], "D")
    h_hat = finite_map(B, D, {"el": {0: "a", 1: "a", 2: "b"}}, "h")
    k_hat = finite_map(C, D, {"el": {"x": "a"}}, "k")
    A = finset(["p"], "A")
    f_hat = finite_map(A, B, {"el": {"p": 0}}, "f")
    g_hat = finite_map(A, C, {"el": {"p": "x"}}, "g")
    with pytest.raises(FibreNotPullback):
        pb_index_coprod_check(_family(A, f_hat, g_hat, B, C, D, h_hat, k_hat))


def _free_monoid_on_spans():
    M = lift_to_span(shared_monad("free_monoid", FINSET))
    return M, span_samples(M.dc, rng_for(12, "perturbed"), count=4, size=2)


def _word_unit(M, word, name):
    """A replacement unit component ``x → Tx`` sending each letter ``a`` to ``word(a)``."""

    def at(x):
        Tx = M.obj(x)
        return FINSET.vmap(x, Tx, {"el": FiberedMap(x.parts["el"], Tx.parts["el"], word, name=name)}, name)

    return at


def test_a_perturbed_component_is_rejected():
    M, samples = _free_monoid_on_spans()
    assert check_vertical_trans(M.unit, samples, 2).passed
    # a ↦ (a, a) is natural on vertical maps but no longer matches the cells of e
    doubled = VerticalTransformation("e'", M.unit.source, M.unit.target, _word_unit(M, lambda a: (a, a), "ee"), M.unit.cell)
    report = check_vertical_trans(doubled, samples, 2)
    assert not report.passed
    assert "component frame" in {f.diagram for f in report.failures}


def test_a_zeroed_unit_breaks_the_monad_laws():
    M, samples = _free_monoid_on_spans()
    zero = VerticalTransformation("0", M.unit.source, M.unit.target, _word_unit(M, lambda a: (), "0"), M.unit.cell)
    broken = LaxMonad(M.name, M.dc, M.functor, zero, M.mult, base=M.base)
    report = check_monad(broken, samples, depth=2, functor_checks=False)
    assert not report.passed
    failed = {f.diagram for f in report.failures}
    assert "m∘Te = id" in failed
    assert "m∘eT = id" in failed


def test_a_collapsing_cell_under_a_conjoint_is_not_invertible():
    dc = conjunction(FINSET).span
    f, _, _, _ = _square()
    conj = dc.conjoint(f)
    A = f.dom
    W = finset([(a, side) for a in A.parts["el"].elements for side in "lr"], "W")
    fold = finite_map(W, A, {"el": {w: w[0] for w in W.parts["el"].elements}}, "fold")
    _, cell = dc.restrict(conj.h, fold, "f*+f*")
    assert dc.invert_cell(cell, 2) is None
    defect = dc.invert_defect(cell, 2)
    assert defect["cell"] == cell.name
    assert defect["sort"] == "el"
    assert defect["preimages"] == 2
    # the σ of the copower has no such defect
    s = sigma(conjunction(FINSET).copower, mat_samples(conjunction(FINSET).mat, rng_for(9, "sigma"), count=2).verticals[0], 3)
    assert conjunction(FINSET).span.invert_defect(s, 3) is None
