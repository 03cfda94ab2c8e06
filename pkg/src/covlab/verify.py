"""Named verification suites shared by ``covlab verify`` and the test suite.

Every check is exact unless it says otherwise, and every random choice comes
from a seeded :class:`~covlab.rng.SplitMix64`, so a report depends only on
the suite name, the seed and the size profile.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from gmpy2 import mpq

from . import conetomo as ct
from .covariogram import cov, cross_cov, product_factorization_check
from .exactgeom import (
    Polytope, box, convex_hull, fmt_rat, matvec, minkowski_sum, polytope_from_json, reflect,
    simplex, translate, vneg, vscale,
)
from .facerecovery import (
    CASE_EXPONENT, classify_antipodal, parallel_facet_data, singular_cross_restriction,
    singular_part, verify_second_derivative,
)
from .faces import check_face_additivity, difference_body, face_lattice, normal_cone_interior
from .gallery import (
    REFLECTED_FACE_W, cone_quadruple, congruent, dk_decomposition_check, interiors_meet, lifted_prisms,
    parall_due_family, parall_family, product_counterexample, reflected_face_relations,
    reflected_face_example, trivial_associates,
)
from .rng import SplitMix64, random_polytope
from .syniso import antipodal_translation_check, corpodiff_check, face_sign, synisothetic


@dataclass(frozen=True)
class Check:
    id: str
    ok: bool
    detail: str = ""


@dataclass
class VerificationReport:
    suite: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def lines(self) -> list[str]:
        out = [f"{self.suite}/{c.id}: {'PASS' if c.ok else 'FAIL'}" + (f" {c.detail}" if c.detail else "")
               for c in self.checks]
        npass = sum(c.ok for c in self.checks)
        out.append(f"{self.suite}: {npass}/{len(self.checks)} passed")
        return out


@dataclass(frozen=True)
class Sizes:
    """How much work each suite does."""

    bodies: int = 3
    probes: int = 60
    random_polytopes: int = 3
    random_w: int = 20
    gallery_probes: int = 400
    second_derivative_resolution: int = 32
    singular_probes: int = 40
    exchange_probes: int = 60
    dk_splits: int = 4
    corpodiff_instances: int = 4


QUICK = Sizes()
FULL = Sizes(bodies=20, probes=1000, random_polytopes=10, random_w=100, gallery_probes=400,
             second_derivative_resolution=64, singular_probes=200, exchange_probes=500,
             dk_splits=10, corpodiff_instances=10)


def _hull(points) -> Polytope:
    return convex_hull(points)


CUBE = box((0, 0, 0), (1, 1, 1))
TETRA = simplex(3)
PRISM = _hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1)])
OCTA = _hull([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])

# (polytope, w, expected case) covering every row of the table
CASE_INSTANCES = [
    ("cube e3", CUBE, (0, 0, 1), 1),
    ("cube e1", CUBE, (1, 0, 0), 1),
    ("prism top", PRISM, (0, 0, 1), 1),
    ("prism side", PRISM, (0, -1, 0), 2),
    ("prism slant", PRISM, (1, 1, 0), 2),
    ("tetra 111", TETRA, (1, 1, 1), 3),
    ("tetra e1", TETRA, (1, 0, 0), 3),
    ("tetra -e1", TETRA, (-1, 0, 0), 3),
    ("octa-like edges", _hull([(1, 0, 1), (-1, 0, 1), (1, 0, -1), (-1, 0, -1), (0, 1, 0),
                               (0, -1, 0)]), (0, 0, 1), 4),
    ("cube 110", CUBE, (1, 1, 0), 4),
    ("skew edges", _hull([(1, 0, 1), (-1, 0, 1), (0, 1, -1), (0, -1, -1)]), (0, 0, 1), 5),
    ("tetra 110", TETRA, (1, 1, 0), 5),
    ("prism 111", PRISM, (1, 1, 1), 6),
    ("edge vertex", _hull([(1, 0, 1), (-1, 0, 1), (0, 0, -1), (0, 1, 0), (0, -1, 0)]),
     (0, 0, 1), 6),
    ("octahedron", OCTA, (0, 0, 1), 7),
    ("cube 111", CUBE, (1, 1, 1), 7),
]

# polytopes with a pair of parallel facets orthogonal to w
PARALLEL_INSTANCES = [
    ("cube", CUBE, (0, 0, 1)),
    ("prism", PRISM, (0, 0, 1)),
    ("box", box((0, 0, 0), (2, 1, 3)), (1, 0, 0)),
    ("hexagonal prism", _hull([(2, 0, 0), (1, 2, 0), (-1, 2, 0), (-2, 0, 0), (-1, -2, 0),
                               (1, -2, 0), (2, 0, 1), (1, 2, 1), (-1, 2, 1), (-2, 0, 1),
                               (-1, -2, 1), (1, -2, 1)]), (0, 0, 1)),
    ("frustum", _hull([(0, 0, 0), (3, 0, 0), (0, 3, 0), (3, 3, 0), (1, 1, 2), (2, 1, 2),
                       (1, 2, 2)]), (0, 0, -1)),
]


def _wedge(axis, u, v):
    return ct.dihedral_from_wedge(axis, u, v)


# (name, C, D, expected sign)
JUMP_INSTANCES = [
    ("both cross", _wedge(0, (1, 1), (1, -1)), _wedge(1, (-1, 1), (-2, -1)), 1),
    ("both cross skew", _wedge(0, (-1, -3), (2, 1)), _wedge(1, (1, 2), (3, -1)), 1),
    ("C cross, D above", _wedge(0, (1, 1), (1, -1)), _wedge(1, (1, 1), (-1, 2)), -1),
    ("C cross, D above skew", _wedge(0, (-2, 1), (-1, -3)), _wedge(1, (3, 1), (1, 4)), -1),
    ("C cross, D below", _wedge(0, (-1, 2), (-1, -1)), _wedge(1, (3, -1), (1, -2)), -1),
    ("C above, D cross", _wedge(0, (1, 1), (-1, 2)), _wedge(1, (1, 2), (1, -3)), -1),
    ("C below, D above", _wedge(0, (1, -1), (-1, -2)), _wedge(1, (1, 1), (-2, 1)), 1),
]


def _mixed_instances():
    """(name, cone, dihedral L, v1, v2, t, s); two families sharing L."""
    quad = ct.dihedral_cone((0, -1, 0), (-1, 0, 0))
    bodies = [
        ("square", ct.cone_from_rays([(-3, -3, 1), (-1, -3, 1), (-3, -1, 1), (-1, -1, 1)])),
        ("triangle", ct.cone_from_rays([(-1, -1, 1), (-4, -1, 1), (-1, -5, 1)])),
        ("pentagon", ct.cone_from_rays([(-1, -2, 1), (-2, -1, 1), (-4, -2, 1), (-3, -4, 1),
                                        (-1, -4, 1)])),
    ]
    params = [(mpq(-5, 2), mpq(-7, 3)), (mpq(-3, 2), mpq(-2)), (mpq(-9, 4), mpq(-13, 5)),
              (mpq(-17, 7), mpq(-3, 2)), (mpq(-11, 5), mpq(-19, 9))]
    out = []
    shear = [[1, 1, 0], [0, 2, 0], [1, 0, 1]]
    sheared = quad.linear_image(shear)
    u1, u2 = matvec(shear, (1, 0, 0)), matvec(shear, (0, 1, 0))
    for k, (t, s) in enumerate(params):
        name, A = bodies[k % len(bodies)]
        out.append((f"quadrant/{name}/{fmt_rat(t)},{fmt_rat(s)}", A, quad, (1, 0, 0), (0, 1, 0), t, s))
        out.append((f"sheared/{name}/{fmt_rat(t)},{fmt_rat(s)}", A.linear_image(shear), sheared,
                    u1, u2, t, s))
    return out


MIXED_INSTANCES = _mixed_instances()


# ---------------------------------------------------------------------------
# identities


def _probe_box(rng: SplitMix64, K: Polytope, count: int):
    D = difference_body(K)
    lo, hi = D.bbox()
    pad = [(b - a) / 8 for a, b in zip(lo, hi)]
    lo = [a - p for a, p in zip(lo, pad)]
    hi = [b + p for b, p in zip(hi, pad)]
    return D, [tuple(a + (b - a) * rng.rational(0, 1) for a, b in zip(lo, hi))
               for _ in range(count)]


def identity_checks(rng: SplitMix64, bodies: int, probes: int) -> list[Check]:
    """Evenness, translation and reflection invariance, support and g(0) = volume."""
    out = []
    for b in range(bodies):
        K = random_polytope(rng)
        t = rng.vector(3, -2, 2, den=16)
        Kt, Km = translate(K, t), reflect(K)
        D, xs = _probe_box(rng, K, probes)
        fails = {"even": 0, "translation": 0, "reflection": 0, "support": 0}
        for x in xs:
            g = cov(K, x)
            if g != cov(K, vneg(x)):
                fails["even"] += 1
            if g != cov(Kt, x):
                fails["translation"] += 1
            if g != cov(Km, x):
                fails["reflection"] += 1
            if (g > 0) != D.contains(x, strict=True):
                fails["support"] += 1
        origin = cov(K, (0, 0, 0)) == K.volume
        ok = origin and not any(fails.values())
        bad = ",".join(k for k, v in fails.items() if v) + ("" if origin else ",origin")
        out.append(Check(f"body{b:02d}", ok,
                         f"vertices={len(K.vertices)} probes={len(xs)}" + (f" failed={bad}" if not ok else "")))
    return out


def face_additivity_checks(rng: SplitMix64, random_polytopes: int, random_w: int) -> list[Check]:
    bodies = [("cube", CUBE), ("simplex", TETRA), ("prism", PRISM)]
    bodies += [(f"random{i:02d}", random_polytope(rng)) for i in range(random_polytopes)]
    out = []
    for name, P in bodies:
        D = difference_body(P)
        ws = [h.normal for h in D.halfspaces]
        ws += [rng.vector(3, -1, 1, den=64) for _ in range(random_w)]
        ws = [w for w in ws if any(c != 0 for c in w)]
        ok = all(check_face_additivity(P, None, w) for w in ws)
        out.append(Check(f"additivity/{name}", ok, f"directions={len(ws)}"))
    return out


# ---------------------------------------------------------------------------
# face recovery


def case_table_checks() -> list[Check]:
    out = []
    for name, P, w, case in CASE_INSTANCES:
        try:
            r = classify_antipodal(P, w)
            ok = r.case_id == case and r.leading_exponent == CASE_EXPONENT[case]
            detail = f"case={r.case_id} exponent={r.leading_exponent} slope={r.slopes[-1]:.4f}"
        except Exception as exc:  # reported, not raised
            ok, detail = False, type(exc).__name__
        out.append(Check(f"case/{name}", ok, f"expected={case} {detail}"))
    return out


def second_derivative_checks(resolution: int) -> list[Check]:
    out = []
    for name, P in (("cube", CUBE), ("tetrahedron", TETRA)):
        r = verify_second_derivative(P, (0, 0, 1), resolution=resolution)
        ok = r.residual < 2e-2 and r.residual < r.residual_coarse
        out.append(Check(f"second-derivative/{name}", ok,
                         f"residual={r.residual:.3e} coarse={r.residual_coarse:.3e} res={resolution}"))
    return out


def singular_part_checks(rng: SplitMix64, probes: int) -> list[Check]:
    out = []
    for name, P, w in PARALLEL_INSTANCES:
        data = parallel_facet_data(P, w)
        lo, hi = difference_body(P).bbox()
        sum_ok = cross_ok = True
        for _ in range(probes):
            x = tuple(a + (b - a) * rng.rational(0, 1) for a, b in zip(lo, hi))
            # project onto the hyperplane orthogonal to w
            wv = tuple(mpq(c) for c in w)
            x = tuple(xi - wi * sum(a * b for a, b in zip(x, wv)) / sum(c * c for c in wv)
                      for xi, wi in zip(x, wv))
            if singular_part(P, w, x) != data.sum_field(x):
                sum_ok = False
            if singular_cross_restriction(P, w, x) != data.cross_field(x):
                cross_ok = False
        out.append(Check(f"singular-sum/{name}", sum_ok, f"probes={probes}"))
        out.append(Check(f"singular-cross/{name}", cross_ok, f"probes={probes}"))
    return out


# ---------------------------------------------------------------------------
# cones


def mixed_derivative_checks() -> list[Check]:
    out = []
    fitted: dict = {}
    for name, A, L, v1, v2, t, s in MIXED_INSTANCES:
        r = ct.mixed_derivative_check(A, L, v1, v2, t, s)
        ok = r.residual < 1e-4 and r.xray != 0
        fitted.setdefault(name.split("/")[0], []).append(r.fitted_alpha)
        out.append(Check(f"mixed/{name}", ok, f"residual={r.residual:.3e} alpha={r.alpha}"))
    for fam, vals in sorted(fitted.items()):
        spread = max(vals) - min(vals)
        out.append(Check(f"mixed-alpha-stable/{fam}", spread < 1e-3, f"spread={spread:.3e}"))
    return out


def jump_checks() -> list[Check]:
    out = []
    ball = ct.rational_ball()
    for name, C, D, sign in JUMP_INSTANCES:
        try:
            got = ct.third_derivative_jump(C, D)
            got_ball = ct.third_derivative_jump(C, D, clip=ball)
            ok = got == sign == got_ball == ct.expected_jump_sign(C, D)
            detail = f"expected={sign:+d} box={got:+d} ball={got_ball:+d}"
        except ct.StencilUnstable as exc:
            ok, detail = False, f"StencilUnstable {exc}"
        out.append(Check(f"jump/{name}", ok, detail))
    return out


def cone_misc_checks(rng: SplitMix64, probes: int) -> list[Check]:
    out = []
    octant = ct.cone_from_rays([(1, 0, 0), (0, 1, 0), (0, 0, 1)])

    def infinite(*args, **kw):
        try:
            ct.xray_cone(*args, **kw)
        except ct.InfiniteChord:
            return True
        return False

    lid = [ct.Halfspace((0, 0, 1), mpq(1))]
    ok = infinite(octant, (1, 1, 1), (0, 0, 0)) and infinite(octant, (0, 0, 1), (1, 1, 0)) \
        and ct.xray_cone(octant, (0, 0, 1), (1, 1, 0), clip=lid) == 1
    out.append(Check("xray/octant", ok))
    ok = ct.minus_one_chord(box((1,), (2,)), (0,), (1,)) == mpq(1, 2) and \
        ct.minus_one_chord(box((0, 0), (1, 1)), (2, mpq(1, 2)), (-1, 0)) == mpq(1, 2)
    out.append(Check("minus-one-chord/examples", ok))
    # homogeneity of degree 3
    A = ct.cone_from_rays([(1, 0, 1), (0, 1, 1), (-1, -1, 1)])
    B = A.reflect()
    hom = True
    for _ in range(20):
        x = rng.vector(3, -1, 1, den=32)
        lam = rng.rational(mpq(1, 4), 4, den=8)
        if ct.cross_cov_cones(A, B, vscale(lam, x)) != lam ** 3 * ct.cross_cov_cones(A, B, x):
            hom = False
    out.append(Check("homogeneity", hom, "probes=20"))
    # the planar cone quadruple and its lifted prisms
    A1, B1, A2, B2 = cone_quadruple()
    xs = [rng.vector(2, -3, 3, den=64) for _ in range(probes)]
    ok = all(ct.cross_cov_cones(A1, B1, x) == ct.cross_cov_cones(A2, B2, x) for x in xs)
    out.append(Check("cones/quadruple", ok, f"probes={len(xs)}"))
    P1, Q1, P2, Q2 = lifted_prisms(1)
    xs3 = [rng.vector(3, -2, 2, den=64) for _ in range(min(probes, 200))]
    ok = all(ct.cross_cov_polyhedra(P1, Q1, x) == ct.cross_cov_polyhedra(P2, Q2, x) for x in xs3)
    out.append(Check("cones/lifted-prisms", ok, f"probes={len(xs3)}"))
    # exchange identity: trivially true for A = B, refuted for a generic quadruple
    Aq = ct.cone_from_rays([(1, 0, 1), (0, 1, 1), (-1, -1, 2)])
    Bq = ct.cone_from_rays([(2, 1, 1), (-1, 1, 1), (0, -2, 1)])
    Cq = ct.cone_from_rays([(1, 0, -1), (-1, 1, -1), (0, -1, -1)])
    Dq = ct.cone_from_rays([(2, 1, -1), (-1, 2, -1), (-1, -2, -1)])
    xs3 = [rng.vector(3, -2, 2, den=64) for _ in range(probes)]
    holds_equal = ct.exchange_identity_probe(Aq, Aq, Cq, Dq, xs3)
    refuted = not ct.exchange_identity_probe(Aq, Bq, Cq, Dq, xs3)
    out.append(Check("exchange/A=B holds", holds_equal, f"probes={len(xs3)}"))
    out.append(Check("exchange/generic refuted", refuted, f"probes={len(xs3)}"))
    return out


# ---------------------------------------------------------------------------
# gallery


def gallery_checks(rng: SplitMix64, probes: int) -> list[Check]:
    out = []
    A1, B1, A2, B2 = cone_quadruple()
    xs = [rng.vector(2, -3, 3, den=64) for _ in range(probes)]
    ok = all(ct.cross_cov_cones(A1, B1, x) == ct.cross_cov_cones(A2, B2, x) for x in xs)
    out.append(Check("cones/equal", ok, f"probes={len(xs)}"))
    ok = interiors_meet(A1, B1.reflect()) and not interiors_meet(A2, B2.reflect())
    out.append(Check("cones/interiors", ok))
    T = [[2, 1], [1, 3]]
    TA = [c.linear_image(T) for c in (A1, B1, A2, B2)]
    ok = all(ct.cross_cov_cones(TA[0], TA[1], matvec(T, x), False) ==
             ct.cross_cov_cones(TA[2], TA[3], matvec(T, x), False) == 5 * ct.cross_cov_cones(A1, B1, x)
             for x in xs[:100])
    out.append(Check("cones/affine", ok, "probes=100"))

    def family(name, bodies, expect_syn):
        K, L, Kp, Lp = bodies
        xs = [rng.vector(2, -5, 5, den=64) for _ in range(probes)]
        eq = all(cross_cov(K, L, x) == cross_cov(Kp, Lp, x) for x in xs)
        nonzero = sum(cross_cov(K, L, x) != 0 for x in xs)
        out.append(Check(f"{name}/equal", eq and nonzero > 0, f"probes={len(xs)} nonzero={nonzero}"))
        syn = synisothetic(K, reflect(L), Kp, reflect(Lp))
        out.append(Check(f"{name}/synisothetic", syn == expect_syn, f"synisothetic={syn}"))
        triv = trivial_associates(K, L, Kp, Lp)
        out.append(Check(f"{name}/not-trivial-associates", not triv))

    family("parall", parall_family(1, 1, 1, 1), False)
    family("parall-skew", parall_family(2, 1, mpq(1, 2), 3, (1, -1)), False)
    family("parall-due", parall_due_family(1, 1, 2, 1, 1), True)
    family("parall-due-m0", parall_due_family(1, 2, 3, 1, 0, (mpq(1, 2), 0)), True)

    tri = convex_hull([(0, 0), (1, 0), (0, 1)])
    quad = convex_hull([(0, 0), (2, 0), (1, 1), (0, 1)])
    for name, K, L in (("triangle", tri, tri), ("triangle-trapezoid", tri, quad)):
        P, Q = product_counterexample(K, L)
        res = product_factorization_check(K, L, 5) + product_factorization_check(K, reflect(L), 5)
        out.append(Check(f"product/{name}/factorization", res == 0, f"residual={fmt_rat(res)}"))
        xs4 = [rng.vector(4, -1, 1, den=16) for _ in range(probes)]
        ok = all(cov(P, x) == cov(Q, x) for x in xs4)
        out.append(Check(f"product/{name}/equal", ok, f"probes={len(xs4)}"))
        out.append(Check(f"product/{name}/not-congruent", not congruent(P, Q)))
    r = reflected_face_example()
    out.append(Check("reflected-face", r.reflected_face and r.no_matching_motion and not congruent(r.P, r.Pp)))
    return out


def direct_sum_checks(rng: SplitMix64, splits: int) -> list[Check]:
    out = []
    fixed = [("square+segment", box((0, 0), (1, 1)), box((0,), (1,))),
             ("triangle+triangle", convex_hull([(0, 0), (1, 0), (0, 1)]),
              convex_hull([(0, 0), (2, 0), (1, 3)]))]
    for i in range(splits):
        k = 1 + rng.below(2)
        L = random_polytope(rng, n=k, npoints=4 if k == 1 else 5)
        M = random_polytope(rng, n=3 - k if k == 2 else 2, npoints=5)
        fixed.append((f"random{i:02d}", L, M))
    for name, L, M in fixed:
        xs = [rng.vector(L.dim + M.dim, -2, 2, den=32) for _ in range(20)]
        out.append(Check(f"direct-sum/{name}", dk_decomposition_check(L, M, xs), f"dims={L.dim}+{M.dim}"))
    return out


# ---------------------------------------------------------------------------
# synisothesis


def _centrally_symmetric_example():
    return convex_hull([(1, 0, 0), (-1, 0, 0), (0, 2, 1), (0, -2, -1), (1, 1, 3), (-1, -1, -3)])


def syniso_checks(rng: SplitMix64, instances: int) -> list[Check]:
    out = []
    P = convex_hull([(0, 0, 0), (2, 0, 0), (0, 1, 0), (0, 0, 3), (1, 1, 1)])
    S = _centrally_symmetric_example()
    cases = [("translate", P, translate(P, (1, 2, 3)), "positive"),
             ("reflection", P, translate(reflect(P), (0, 1, 0)), "negative"),
             ("symmetric", S, S, "neutral")]
    for name, A, B, expect in cases:
        signs = set()
        stable = antipodal = True
        for F in face_lattice(A):
            fs = face_sign(A, B, F)
            signs.add(fs.sign)
            for _ in range(3):
                wts = [rng.rational(mpq(1, 8), 2, den=64) for _ in F.facet_ids]
                w = normal_cone_interior(A, F, wts)
                if face_sign(A, B, w).sign != fs.sign:
                    stable = False
            if not antipodal_translation_check(A, B, normal_cone_interior(A, F)):
                antipodal = False
        out.append(Check(f"face-sign/{name}", signs == {expect} and stable and antipodal,
                         f"signs={sorted(signs)}"))
    for i in range(instances):
        A = random_polytope(rng)
        moved = translate(A, rng.vector(3, -3, 3, den=8)) if i % 2 == 0 else \
            translate(reflect(A), rng.vector(3, -3, 3, den=8))
        ok = synisothetic(A, reflect(A), moved, reflect(moved)) and corpodiff_check(A, moved)
        out.append(Check(f"corpodiff/instance{i:02d}", ok))
    return out


# ---------------------------------------------------------------------------
# suites


def _suite(name: str, fn: Callable[[SplitMix64, Sizes], list], seed: int, sizes: Sizes):
    rng = SplitMix64(seed ^ (sum(map(ord, name)) << 32))
    return VerificationReport(name, fn(rng, sizes))


SUITES: dict[str, Callable[[SplitMix64, Sizes], list]] = {
    "identities": lambda rng, z: identity_checks(rng, z.bodies, z.probes)
    + face_additivity_checks(rng, z.random_polytopes, z.random_w),
    "gallery": lambda rng, z: gallery_checks(rng, z.gallery_probes) + direct_sum_checks(rng, z.dk_splits),
    "facerecovery": lambda rng, z: case_table_checks()
    + second_derivative_checks(z.second_derivative_resolution)
    + singular_part_checks(rng, z.singular_probes),
    "conetomo": lambda rng, z: mixed_derivative_checks() + jump_checks()
    + cone_misc_checks(rng, z.exchange_probes),
    "syniso": lambda rng, z: syniso_checks(rng, z.corpodiff_instances),
}


def run(suite: str, seed: int, sizes: Sizes = QUICK) -> list[VerificationReport]:
    names = sorted(SUITES) if suite == "all" else [suite]
    for n in names:
        if n not in SUITES:
            raise KeyError(n)
    return [_suite(n, SUITES[n], seed, sizes) for n in names]


def render(reports: list[VerificationReport], seed: int) -> str:
    lines = [f"covlab verify seed={seed}"]
    for r in reports:
        lines.extend(r.lines())
    ok = all(r.passed for r in reports)
    lines.append("OVERALL: " + ("PASS" if ok else "FAIL"))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# gallery manifests written by ``covlab gallery build``


def _load_body(path: Path, kind: str):
    obj = json.loads(path.read_text())
    return ct.cone_from_json(obj) if kind == "cone" else polytope_from_json(obj)


def _probes_for(rng: SplitMix64, A, B, count: int):
    if isinstance(A, Polytope):
        lo, hi = minkowski_sum(A, reflect(B)).bbox()
        lo = [a - 1 for a in lo]
        hi = [b + 1 for b in hi]
    else:
        lo, hi = [-3] * A.dim, [3] * A.dim
    return [tuple(a + (b - a) * rng.rational(0, 1, den=256) for a, b in zip(lo, hi))
            for _ in range(count)]


def _relation_value(kind: str, bodies: list, rng: SplitMix64, probes: int) -> bool:
    if kind == "cross_cov_equal":
        K, L, Kp, Lp = bodies
        f = ct.cross_cov_cones if not isinstance(K, Polytope) else cross_cov
        return all(f(K, L, x) == f(Kp, Lp, x) for x in _probes_for(rng, K, L, probes))
    if kind == "cov_equal":
        P, Q = bodies
        return all(cov(P, x) == cov(Q, x) for x in _probes_for(rng, P, P, probes))
    if kind == "synisothetic":
        K, L, Kp, Lp = bodies
        return synisothetic(K, reflect(L), Kp, reflect(Lp))
    if kind == "trivial_associates":
        return trivial_associates(*bodies)
    if kind == "congruent":
        return congruent(*bodies)
    if kind == "interiors_meet_reflected":
        A, B = bodies
        return interiors_meet(A, B.reflect())
    if kind in ("reflected_face", "no_matching_motion"):
        reflected, no_motion = reflected_face_relations(*bodies, REFLECTED_FACE_W)
        return reflected if kind == "reflected_face" else no_motion
    raise ValueError(f"unknown relation {kind!r}")


def manifest_checks(path, seed: int) -> VerificationReport:
    path = Path(path)
    if path.is_dir():
        path = path / "expectations.json"
    manifest = json.loads(path.read_text())
    rng = SplitMix64(seed)
    bodies = {name: _load_body(path.parent / spec["file"], spec["kind"])
              for name, spec in manifest["bodies"].items()}
    report = VerificationReport(f"manifest/{manifest['family']}")
    for rel in manifest["relations"]:
        value = _relation_value(rel["kind"], [bodies[b] for b in rel["bodies"]], rng,
                                int(manifest.get("probes", 400)))
        report.checks.append(Check(f"{rel['kind']}({','.join(rel['bodies'])})",
                                   value == rel["expected"], f"value={str(value).lower()}"))
    return report
