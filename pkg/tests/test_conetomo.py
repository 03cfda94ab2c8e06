import json
from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from covlab import conetomo as ct
from covlab.exactgeom import Halfspace, box, det, matvec
from covlab.verify import JUMP_INSTANCES, MIXED_INSTANCES

qs = st.fractions(min_value=-3, max_value=3, max_denominator=32)
pos = st.fractions(min_value=Fraction(1, 8), max_value=4, max_denominator=8)

UP = ct.cone_from_rays([(1, 1), (-1, 1)])          # {x2 >= |x1|}
DOWN = UP.reflect()
PYRAMID = ct.cone_from_rays([(1, 1, 1), (-1, 1, 1), (1, -1, 1), (-1, -1, 1)])
TRI = ct.cone_from_rays([(1, 0, 1), (0, 1, 1), (-1, -1, 1)])


def _q(f):
    return mpq(f.numerator, f.denominator)


def test_cone_construction():
    octant = ct.cone_from_rays([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert octant.pointed and len(octant.halfspaces) == 3
    assert octant.contains((1, 2, 3)) and not octant.contains((-1, 0, 0))
    L = ct.dihedral_cone((0, -1, 0), (-1, 0, 0))
    assert not L.pointed and ct.edge_direction(L) == (0, 0, 1)
    with pytest.raises(ct.NotPointed):
        ct.cone_from_rays([(1, 0), (-1, 0), (0, 1)])


def test_redundant_normals_are_dropped():
    A = ct.cone_from_halfspaces([(-1, 0, 0), (0, -1, 0), (0, 0, -1), (-1, -1, 0)], 3)
    assert len(A.halfspaces) == 3


def test_section_round_trip():
    sec = ct.section(PYRAMID)
    assert sec.polygon == box((-1, -1), (1, 1))
    assert ct.cone_from_section(sec.polygon) == PYRAMID
    assert ct.cone_from_section(ct.section(TRI, 2).polygon, 2) == TRI


@pytest.mark.parametrize("cone", [PYRAMID, TRI, ct.dihedral_cone((0, -1, 0), (-1, 0, 0))])
def test_json_round_trip(cone, tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(ct.cone_to_json(cone)))
    assert ct.load_cone(path) == cone


@given(qs, qs)
def test_planar_cross_covariogram_closed_form(a, h):
    # in the rotated coordinates x2 -+ x1 the overlap is a rectangle
    expect = max(Fraction(0), h - a) * max(Fraction(0), h + a) / 2
    assert Fraction(str(ct.cross_cov_cones(UP, DOWN, (_q(a), _q(h))))) == expect


@given(st.tuples(qs, qs, qs), pos)
def test_cone_cross_covariogram_is_homogeneous(x, lam):
    xq, lq = tuple(map(_q, x)), _q(lam)
    B = TRI.reflect()
    assert ct.cross_cov_cones(TRI, B, tuple(lq * c for c in xq)) == lq ** 3 * ct.cross_cov_cones(TRI, B, xq)


@given(st.tuples(qs, qs, qs))
def test_linear_image_scales_by_determinant(x):
    T = [[2, 1, 0], [0, 1, 0], [1, 0, 1]]
    xq = tuple(map(_q, x))
    A, B = PYRAMID, PYRAMID.reflect()
    lhs = ct.cross_cov_cones(A.linear_image(T), B.linear_image(T), matvec(T, xq))
    assert lhs == abs(det(T)) * ct.cross_cov_cones(A, B, xq)


def test_setup_errors():
    with pytest.raises(ct.SetupViolated):
        ct.cross_cov_cones(DOWN, UP, (0, 1))
    quadrant = ct.cone_from_rays([(1, 0), (0, 1)])
    with pytest.raises(ct.UnboundedIntersection):
        ct.cross_cov_cones(quadrant, UP, (0, 1), check_setup=False)


@given(qs, qs)
def test_pyramid_xray_against_clipped_chord(a, b):
    lid = [Halfspace((0, 0, 1), mpq(1))]
    expect = max(Fraction(0), 1 - max(abs(a), abs(b)))
    got = ct.xray_cone(PYRAMID, (0, 0, 1), (_q(a), _q(b), 0), clip=lid)
    assert Fraction(str(got)) == expect


def test_unclipped_xray_and_infinite_chords():
    with pytest.raises(ct.InfiniteChord):
        ct.xray_cone(PYRAMID, (0, 0, 1), (0, 0, 0))
    # a horizontal line at height 1 crosses the pyramid in a chord of length 2
    assert ct.xray_cone(PYRAMID, (1, 0, 0), (0, 0, 1)) == 2
    assert ct.xray_cone(PYRAMID, (1, 0, 0), (0, 5, 1)) == 0


@given(st.fractions(min_value=Fraction(1, 4), max_value=3, max_denominator=16),
       st.fractions(min_value=Fraction(1, 4), max_value=3, max_denominator=16))
def test_minus_one_chord_of_a_segment(a, length):
    K = box((_q(a),), (_q(a + length),))
    got = ct.minus_one_chord(K, (0,), (1,))
    assert Fraction(str(got)) == 1 / a - 1 / (a + length)
    assert ct.minus_one_chord(K, (0,), (-1,)) == got


def test_minus_one_chord_rejects_points_in_the_body():
    with pytest.raises(ct.PInsideBody):
        ct.minus_one_chord(box((0, 0), (1, 1)), (mpq(1, 2), mpq(1, 2)), (1, 0))


@pytest.mark.parametrize("name,A,L,v1,v2,t,s", MIXED_INSTANCES, ids=[m[0] for m in MIXED_INSTANCES])
def test_mixed_derivative_equals_scaled_xray(name, A, L, v1, v2, t, s):
    r = ct.mixed_derivative_check(A, L, v1, v2, t, s)
    assert r.residual < 1e-4
    assert r.xray > 0


def test_sheared_mixed_derivative_recovers_alpha():
    sheared = [m for m in MIXED_INSTANCES if m[0].startswith("sheared")][0]
    _, A, L, v1, v2, t, s = sheared
    r = ct.mixed_derivative_check(A, L, v1, v2, t, s)
    assert r.alpha == 2 and r.fitted_alpha == pytest.approx(2.0, rel=1e-6)


def test_mixed_derivative_refuses_kinks():
    _, A, L, v1, v2, t, s = MIXED_INSTANCES[0]
    with pytest.raises(ct.NonSmoothPoint):
        ct.mixed_derivative_check(A, L, v1, v2, 0, s)
    with pytest.raises(ValueError):
        ct.mixed_derivative_check(A, L, v2, (1, 1, 0), t, s)


@pytest.mark.parametrize("name,C,D,sign", JUMP_INSTANCES, ids=[j[0] for j in JUMP_INSTANCES])
def test_third_derivative_jump_sign(name, C, D, sign):
    assert ct.expected_jump_sign(C, D) == sign
    assert ct.third_derivative_jump(C, D) == sign
    assert ct.third_derivative_jump(C, D, clip=ct.rational_ball()) == sign


def test_jump_requires_axis_edges():
    C = ct.dihedral_from_wedge(0, (1, 1), (1, -1))
    with pytest.raises(ct.SetupViolated):
        ct.third_derivative_jump(C, C)


def test_rational_ball_is_inscribed():
    ball = ct.rational_ball()
    assert len(ball.vertices) == 30
    assert all(sum(c * c for c in v) == 1 for v in ball.vertices)


@given(st.lists(st.tuples(qs, qs, qs), min_size=1, max_size=4))
def test_exchange_identity_is_trivial_when_the_lower_cones_agree(points):
    A = TRI
    B = ct.cone_from_rays([(2, 1, 1), (-1, 1, 1), (0, -2, 1)])
    C = ct.cone_from_rays([(1, 0, -1), (-1, 1, -1), (0, -1, -1)])
    xs = [tuple(map(_q, p)) for p in points]
    assert ct.exchange_identity_probe(A, B, C, C, xs)
    assert ct.exchange_identity_probe(A, A, C, PYRAMID.reflect(), xs)


def test_exchange_setup_is_checked():
    with pytest.raises(ct.SetupViolated):
        ct.exchange_identity_probe(PYRAMID.reflect(), TRI, TRI, TRI, [(0, 0, 0)])
