import math

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from covlab.exactgeom import box, convex_hull, reflect, simplex, translate
from covlab.faces import (
    SubspacesNotComplementary, check_face_additivity, difference_body, direct_sum, exposed_face,
    face_lattice, normal_cone, normal_cone_interior, steiner_point, support_cone,
)
from covlab.rng import SplitMix64, random_polytope

seeds = st.integers(min_value=0, max_value=2 ** 32)
CUBE = box((0, 0, 0), (1, 1, 1))


def test_face_lattice_counts():
    assert len(face_lattice(CUBE)) == 8 + 12 + 6
    assert len(face_lattice(simplex(3))) == 4 + 6 + 4
    prism = convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1)])
    assert len(face_lattice(prism)) == 6 + 9 + 5


def test_exposed_faces_of_cube():
    assert exposed_face(CUBE, (0, 0, 1)).dim == 2
    assert exposed_face(CUBE, (1, 1, 0)).dim == 1
    F = exposed_face(CUBE, (1, 1, 1))
    assert F.dim == 0 and F.vertices == ((1, 1, 1),)
    with pytest.raises(ValueError):
        exposed_face(CUBE, (0, 0, 0))


def test_support_and_normal_cones_of_a_vertex():
    F = exposed_face(CUBE, (1, 1, 1))
    sc = support_cone(CUBE, F)
    assert sc.contains((-1, -1, -1)) and not sc.contains((1, 0, 0))
    assert sorted(normal_cone(CUBE, F).rays) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert normal_cone_interior(CUBE, F) == (1, 1, 1)


def test_difference_body_of_simplex_is_cuboctahedron():
    D = difference_body(simplex(3))
    assert len(D.vertices) == 12 and len(D.halfspaces) == 14
    assert reflect(D) == D


def test_steiner_point_of_symmetric_and_translated_bodies():
    assert steiner_point(CUBE) == pytest.approx((0.5, 0.5, 0.5))
    sq = box((0, 0), (2, 2))
    assert steiner_point(sq) == pytest.approx((1, 1))
    assert steiner_point(box((3,), (5,))) == (4.0,)


def test_steiner_point_triangle_angles():
    T = convex_hull([(0, 0), (4, 0), (0, 3)])
    # exterior angles over 2 pi: pi/2 at the right angle, pi - angle elsewhere
    a = math.atan2(3, 4)
    b = math.atan2(4, 3)
    w = [0.5 * math.pi, math.pi - a, math.pi - b]
    pts = [(0, 0), (4, 0), (0, 3)]
    expect = tuple(sum(wi * p[k] for wi, p in zip(w, pts)) / (2 * math.pi) for k in range(2))
    assert steiner_point(T) == pytest.approx(expect, abs=1e-12)


@given(seeds)
def test_steiner_point_is_minkowski_additive(seed):
    rng = SplitMix64(seed)
    P, Q = random_polytope(rng, npoints=6), random_polytope(rng, npoints=6)
    from covlab.exactgeom import minkowski_sum
    s = steiner_point(minkowski_sum(P, Q))
    sp, sq = steiner_point(P), steiner_point(Q)
    assert s == pytest.approx(tuple(a + b for a, b in zip(sp, sq)), abs=1e-9)


@given(seeds, st.tuples(*[st.integers(-3, 3)] * 3))
def test_steiner_point_translation_equivariant(seed, t):
    P = random_polytope(SplitMix64(seed), npoints=7)
    s = steiner_point(translate(P, t))
    assert s == pytest.approx(tuple(a + b for a, b in zip(steiner_point(P), t)), abs=1e-9)


@given(seeds, st.tuples(*[st.integers(-4, 4)] * 3).filter(any))
def test_face_of_difference_body_is_sum_of_antipodal_faces(seed, w):
    P = random_polytope(SplitMix64(seed), npoints=7)
    assert check_face_additivity(P, None, w)


def test_direct_sum_square_and_segment():
    S = direct_sum([(box((0, 0), (1, 1)), (0, 2)), (box((0,), (1,)), (1,))])
    assert S == CUBE
    with pytest.raises(SubspacesNotComplementary):
        direct_sum([(box((0, 0), (1, 1)), (0, 1)), (box((0,), (1,)), (1,))])


def test_face_lattice_is_sorted_and_unique():
    faces = face_lattice(CUBE)
    keys = [(f.dim, f.vertex_ids) for f in faces]
    assert keys == sorted(set(keys))
    assert all(f.relint_point == tuple(mpq(sum(c), len(f.vertices)) for c in zip(*f.vertices))
               for f in faces)
