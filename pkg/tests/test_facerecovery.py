from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import assume, given, strategies as st

from covlab.exactgeom import box, convex_hull, reflect, translate
from covlab.facerecovery import (
    CASE_EXPONENT, ClassificationMismatch, ExponentFitAmbiguous, case_from_dimensions,
    case_from_signature, classify_antipodal, fit_exponent, parallel_facet_data, singular_part,
    system_cov_check, system_cov_report, verify_second_derivative,
)
from covlab.faces import exposed_face
from covlab.rng import SplitMix64, random_polytope
from covlab.verify import CASE_INSTANCES, CUBE, PARALLEL_INSTANCES, TETRA

import oracles

seeds = st.integers(min_value=0, max_value=2 ** 32)
coord = st.fractions(min_value=-2, max_value=2, max_denominator=16)


def _q(f):
    return mpq(f.numerator, f.denominator)


@given(coord, coord)
def test_cube_singular_part_is_twice_the_square_covariogram(a, b):
    x = (_q(a), _q(b), mpq(0))
    expect = 2 * oracles.box_covariogram((0, 0), (1, 1), (a, b))
    assert Fraction(str(singular_part(CUBE, (0, 0, 1), x))) == expect


@given(coord, coord)
def test_cube_cross_field_on_far_plane(a, b):
    data = parallel_facet_data(CUBE, (0, 0, 1))
    assert data.gap == 1
    x = (_q(a), _q(b), 0)
    assert Fraction(str(data.cross_field(x))) == oracles.box_covariogram((0, 0), (1, 1), (a, b))
    # the cross pairs live at height +-1 and enter with a minus sign
    assert singular_part(CUBE, (0, 0, 1), (x[0], x[1], 1)) == -data.cross_field(x)


@pytest.mark.parametrize("name,P,w", PARALLEL_INSTANCES)
def test_parallel_facet_projections(name, P, w):
    data = parallel_facet_data(P, w)
    assert data.F0 is not None and data.G0 is not None
    assert data.F_dim == data.G_dim == 2
    assert data.sum_field((0, 0, 0)) > 0


def test_sheared_face_uses_chart_stretch():
    # top face of a slanted slab; w = (0, 1, 1) has parallel facets at both ends
    P = convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, -1), (1, 1, -1),
                     (0, 0, 1), (1, 0, 1), (0, 1, 0), (1, 1, 0)])
    data = parallel_facet_data(P, (0, 1, 1))
    assert data.factor_sq == 2
    # each face is a 1 x sqrt(2) rectangle: covariogram at 0 is sqrt(2)
    assert data.sum_field((0, 0, 0)) == pytest.approx(2 * 2 ** 0.5)


def test_chart_rejects_non_orthogonal_points():
    data = parallel_facet_data(CUBE, (0, 0, 1))
    with pytest.raises(ValueError):
        data.sum_field((0, 0, 1))
    with pytest.raises(ValueError):
        parallel_facet_data(CUBE, (0, 0, 0))


@pytest.mark.parametrize("name,P,w,case", CASE_INSTANCES)
def test_case_table(name, P, w, case):
    r = classify_antipodal(P, w)
    assert r.case_id == case
    assert r.leading_exponent == CASE_EXPONENT[case]
    F, G = exposed_face(P, w), exposed_face(P, tuple(-c for c in w))
    assert case_from_dimensions(F.dim, G.dim, r.dim_DPw) == case


@given(seeds, st.tuples(*[st.integers(-2, 2)] * 3).filter(any))
def test_classification_agrees_with_face_dimensions(seed, w):
    P = random_polytope(SplitMix64(seed), npoints=8)
    try:
        r = classify_antipodal(P, w)
    except ExponentFitAmbiguous:
        assume(False)
    F, G = exposed_face(P, w), exposed_face(P, tuple(-c for c in w))
    assert r.case_id == case_from_dimensions(F.dim, G.dim, r.dim_DPw)


@given(seeds, st.tuples(*[st.integers(-2, 2)] * 3).filter(any))
def test_classification_is_symmetric_under_reflection(seed, w):
    P = random_polytope(SplitMix64(seed), npoints=7)
    try:
        a = classify_antipodal(P, w).case_id
        b = classify_antipodal(reflect(P), w).case_id
    except ExponentFitAmbiguous:
        assume(False)
    assert a == b


def test_signature_table_and_rejections():
    assert case_from_signature(3, 2, True) == 5
    assert case_from_signature(3, 2, False) == 3
    with pytest.raises(ClassificationMismatch):
        case_from_signature(1, 0, False)


def test_exponent_fit():
    vals = [mpq(1, 8 ** k) for k in range(5)]
    assert fit_exponent(vals)[0] == 3
    with pytest.raises(ExponentFitAmbiguous):
        fit_exponent([mpq(1), mpq(1, 2), mpq(1, 8), mpq(1, 16), mpq(1, 128)])


@given(seeds, seeds, st.tuples(coord, coord), st.lists(st.tuples(coord, coord), min_size=1, max_size=6))
def test_trivial_solutions_of_the_planar_system(s1, s2, t, probes):
    F = random_polytope(SplitMix64(s1), n=2, npoints=5)
    G = random_polytope(SplitMix64(s2), n=2, npoints=5)
    tq = tuple(map(_q, t))
    xs = [tuple(map(_q, p)) for p in probes]
    assert system_cov_check(F, G, translate(F, tq), translate(G, tq), xs)
    assert system_cov_check(F, G, translate(reflect(G), tq), translate(reflect(F), tq), xs)


def test_planar_system_detects_a_different_pair():
    F = box((0, 0), (1, 1))
    G = convex_hull([(0, 0), (2, 0), (0, 1)])
    probes = [(mpq(1, 3), mpq(1, 5)), (mpq(-1, 2), mpq(1, 7))]
    assert system_cov_report(F, G, G, F, probes) == (True, False)


def test_weak_second_derivative_converges():
    r = verify_second_derivative(CUBE, (0, 0, 1), resolution=32)
    assert r.residual < 5e-2
    assert r.residual < r.residual_coarse
    t = verify_second_derivative(TETRA, (0, 0, 1), resolution=32)
    assert t.residual < 5e-2
