from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from covlab import conetomo as ct
from covlab.covariogram import cov, cross_cov
from covlab.exactgeom import box, convex_hull, reflect, translate
from covlab.gallery import (
    FAMILIES, I1, I2, I3, I4, ParameterConstraintViolated, SymmetricFactor, centrally_symmetric,
    cone_quadruple, congruent, dk_decomposition_check, interiors_meet, lifted_prisms,
    parall_due_family, parall_family, parse_params, product_counterexample, reflected_face_example,
    trivial_associates, zonogon,
)
from covlab.rng import SplitMix64, random_polytope
from covlab.syniso import synisothetic

import oracles

positive = st.fractions(min_value=Fraction(1, 4), max_value=3, max_denominator=8).map(
    lambda f: mpq(f.numerator, f.denominator))
small = st.fractions(min_value=-6, max_value=6, max_denominator=16).map(
    lambda f: mpq(f.numerator, f.denominator))
TRI = convex_hull([(0, 0), (1, 0), (0, 1)])


def test_segment_directions():
    assert (I1, I2, I3, I4) == ((1, 0), (1, 1), (0, 1), (-1, 1))
    Z = zonogon([(1, I1), (1, I3)])
    assert Z == box((-1, -1), (1, 1))


@given(positive, positive, positive, positive, st.tuples(small, small), st.tuples(small, small))
def test_parall_cross_covariograms_agree(a, b, c, d, y, x):
    K1, L1, K2, L2 = parall_family(a, b, c, d, y)
    assert cross_cov(K1, L1, x) == cross_cov(K2, L2, x)
    moved = [(h.normal, h.offset + sum(p * q for p, q in zip(h.normal, x))) for h in L1.halfspaces]
    assert Fraction(str(cross_cov(K1, L1, x))) == oracles.polygon_overlap(K1.vertices, moved)


@given(positive, positive, positive, positive, st.tuples(small, small))
def test_parall_pairs_are_never_synisothetic(a, b, c, d, y):
    K1, L1, K2, L2 = parall_family(a, b, c, d, y)
    assert not synisothetic(K1, reflect(L1), K2, reflect(L2))


@given(positive, positive, positive, positive, small, st.tuples(small, small), st.tuples(small, small))
def test_parall_due_family(a, b, c, d, m, y, x):
    if a == c or (m == 0 and b == d):
        with pytest.raises(ParameterConstraintViolated):
            parall_due_family(a, b, c, d, m, y)
        return
    K3, L3, K4, L4 = parall_due_family(a, b, c, d, m, y)
    assert cross_cov(K3, L3, x) == cross_cov(K4, L4, x)
    assert synisothetic(K3, reflect(L3), K4, reflect(L4))
    assert not trivial_associates(K3, L3, K4, L4)


def test_parameter_constraints():
    with pytest.raises(ParameterConstraintViolated):
        parall_family(1, 0, 1, 1)
    with pytest.raises(ParameterConstraintViolated):
        parall_due_family(1, 1, 1, 2, 1)


@given(st.tuples(small, small))
def test_cone_quadruple(x):
    A1, B1, A2, B2 = cone_quadruple()
    assert ct.cross_cov_cones(A1, B1, x) == ct.cross_cov_cones(A2, B2, x)


def test_cone_quadruple_interiors():
    A1, B1, A2, B2 = cone_quadruple()
    assert interiors_meet(A1, B1.reflect())
    assert not interiors_meet(A2, B2.reflect())


@given(st.tuples(small, small, small))
def test_lifted_prisms(x):
    P1, Q1, P2, Q2 = lifted_prisms(1)
    assert ct.cross_cov_polyhedra(P1, Q1, x) == ct.cross_cov_polyhedra(P2, Q2, x)


def test_trivial_associates():
    K, L = TRI, box((0, 0), (2, 1))
    assert trivial_associates(K, L, translate(K, (1, 1)), translate(L, (1, 1)))
    assert trivial_associates(K, L, translate(reflect(L), (3, 0)), translate(reflect(K), (3, 0)))
    assert not trivial_associates(K, L, L, K)


@given(st.lists(st.tuples(small, small, small, small), min_size=1, max_size=5))
def test_product_counterexample(points):
    P, Q = product_counterexample(TRI, convex_hull([(0, 0), (2, 0), (1, 1), (0, 1)]))
    assert not congruent(P, Q)
    for x in points:
        assert cov(P, x) == cov(Q, x)


def test_product_rejects_symmetric_factors():
    assert centrally_symmetric(box((0, 0), (1, 2)))
    with pytest.raises(SymmetricFactor):
        product_counterexample(TRI, box((0, 0), (1, 2)))


def test_congruence():
    assert congruent(TRI, translate(reflect(TRI), (3, 4)))
    assert not congruent(TRI, convex_hull([(0, 0), (2, 0), (0, 1)]))


def test_reflected_face_example():
    r = reflected_face_example()
    assert r.P.dim == 4
    assert r.reflected_face and r.no_matching_motion
    assert not congruent(r.P, r.Pp)


@given(st.integers(0, 2 ** 32), st.lists(st.tuples(small, small, small), min_size=1, max_size=5))
def test_difference_body_splits_over_a_direct_sum(seed, xs):
    rng = SplitMix64(seed)
    L = random_polytope(rng, n=2, npoints=5)
    M = random_polytope(rng, n=1, npoints=3)
    assert dk_decomposition_check(L, M, xs)


def test_parse_params():
    fam = FAMILIES["parall-due"]
    p = parse_params(fam, "alpha=3; y=1,-1")
    assert p["alpha"] == "3" and p["y"] == ["1", "-1"] and p["gamma"] == "2"
    q = parse_params(FAMILIES["product"], "K=0,0|2,0|0,1")
    assert q["K"] == [["0", "0"], ["2", "0"], ["0", "1"]]
    with pytest.raises(KeyError):
        parse_params(fam, "zeta=1")


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_every_family_builds_with_defaults(name):
    fam = FAMILIES[name]
    bodies = fam.build(parse_params(fam, None))
    for _, names, _ in fam.relations:
        assert all(n in bodies for n in names)
