import pytest
from hypothesis import given, settings

from app.core.adjunction import check_triangles, conjunction, connectedness_frame, ff_2cells_check, mat_frames
from app.core.backends import FINGRPH, FINSET, FINSET2, finite_map, finset
from app.core.doublecat import check_lax_functor, check_pseudodouble
from app.core.errors import FrameMismatch
from app.core.mates import mate_suite
from app.core.matrices import mat_samples
from app.core.sampling import rng_for
from app.core.spans import SpanDC, span_samples

from .strategies import scaled, seeds

ALL = [FINSET, FINSET2, FINGRPH]


@pytest.mark.parametrize("backend", ALL, ids=lambda b: b.name)
def test_span_is_pseudodouble(backend):
    dc = conjunction(backend).span
    report = check_pseudodouble(dc, span_samples(dc, rng_for(0, dc.name), count=4, size=2), 3)
    assert report.passed, report.to_text()
    assert report.results


@pytest.mark.parametrize("backend", ALL, ids=lambda b: b.name)
def test_mat_is_pseudodouble(backend):
    dc = conjunction(backend).mat
    report = check_pseudodouble(dc, mat_samples(dc, rng_for(0, dc.name), count=4, size=2), 3)
    assert report.passed, report.to_text()


@pytest.mark.parametrize("kind", ["span", "mat"])
@settings(max_examples=scaled(5, 200), deadline=None)
@given(seeds)
def test_laws_hold_for_any_seed(kind, seed):
    conj = conjunction(FINSET)
    if kind == "span":
        dc = conj.span
        samples = span_samples(dc, rng_for(seed, dc.name), count=4, size=scaled(2, 4))
    else:
        dc = conj.mat
        samples = mat_samples(dc, rng_for(seed, dc.name), count=4, size=scaled(2, 4))
    report = check_pseudodouble(dc, samples, 3)
    assert report.passed, report.to_text()


def test_span_units_and_composites():
    dc = conjunction(FINSET).span
    X = finset(["a", "b"], "X")
    unit = dc.hunit(X)
    assert unit.apex is X
    assert dc.hunit(X) is unit
    Y = finset([0, 1, 2], "Y")
    f = finite_map(Y, X, {"el": {0: "a", 1: "a", 2: "b"}}, "f")
    p = dc.span(dc.vid(Y), f, "p")
    q = dc.span(dc.vid(X), dc.vid(X), "q")
    composite = dc.hcomp(q, p)
    assert len(composite.apex.parts["el"].elements) == 3


def test_span_composites_need_matching_ends():
    dc = conjunction(FINSET).span
    X, Y = finset(["a"], "X"), finset([0], "Y")
    with pytest.raises(FrameMismatch):
        dc.hcomp(dc.hunit(X), dc.hunit(Y))


@pytest.mark.parametrize("backend", [FINSET, FINGRPH], ids=lambda b: b.name)
def test_copower_and_points_are_lax_functors(backend):
    conj = conjunction(backend)
    mat = mat_samples(conj.mat, rng_for(1, "copower"), count=4, size=2)
    span = span_samples(conj.span, rng_for(1, "points"), count=4, size=2)
    assert check_lax_functor(conj.copower, mat, 3).passed
    assert check_lax_functor(conj.points, span, 3).passed


@pytest.mark.parametrize("backend", ALL, ids=lambda b: b.name)
def test_conjunction_triangles(backend):
    conj = conjunction(backend)
    mat = mat_samples(conj.mat, rng_for(2, "tri"), count=4, size=2)
    span = span_samples(conj.span, rng_for(2, "tri"), count=4, size=2)
    report = check_triangles(conj, mat.hcells[:2], span.hcells[:2], 3)
    assert report.passed, report.to_text()


def test_copower_is_fully_faithful_on_2cells_in_finset():
    conj = conjunction(FINSET)
    report = ff_2cells_check(conj, mat_frames(conj, rng_for(3, "ff"), count=1, size=1))
    assert report.passed, report.to_text()
    assert report.data["connected"]


def test_full_faithfulness_on_2cells_needs_connectedness():
    conj = conjunction(FINSET2)
    report = ff_2cells_check(conj, mat_frames(conj, rng_for(3, "ff"), count=1, size=1))
    assert not report.passed
    assert not report.data["connected"]
    failure = report.failures[-1]
    assert failure.frame == "1+1⇒1+1"
    assert failure.witness["matrix_cells"] == 4
    assert failure.witness["span_cells"] == 16


def test_the_two_point_frame_passes_on_graphs():
    conj = conjunction(FINGRPH)
    report = ff_2cells_check(conj, [connectedness_frame(conj)])
    assert report.passed, report.to_text()
    assert report.data["connected"]


@pytest.mark.parametrize("kind", ["span", "mat"])
@settings(max_examples=scaled(3, 500), deadline=None)
@given(seed=seeds)
def test_mates_round_trip(kind, seed):
    conj = conjunction(FINSET)
    if kind == "span":
        dc = conj.span
        samples = span_samples(dc, rng_for(seed, "mates"), count=4, size=2)
    else:
        dc = conj.mat
        samples = mat_samples(dc, rng_for(seed, "mates"), count=4, size=2)
    report = mate_suite(dc, samples, 3)
    assert report.passed, report.to_text()
    assert report.results


class SwappedAssociator(SpanDC):
    """Span(V) with the associator replaced by its inverse."""

    def alpha(self, r, q, p):
        return super().alpha_inv(r, q, p)


def test_a_swapped_associator_fails_the_pentagon():
    dc = SwappedAssociator(FINSET)
    report = check_pseudodouble(dc, span_samples(dc, rng_for(0, "swapped"), count=4, size=2), 3)
    assert not report.passed
    failed = {f.diagram for f in report.failures}
    assert "(e) pentagon" in failed
    assert "(d) unit triangle" in failed
