"""Generators for the explicit examples and counterexamples, with exact
deciders for trivial association and congruence.

Segment directions are integer vectors; every family is a positive rescaling
of the normalized version, which leaves the certified equalities intact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from gmpy2 import mpq

from .conetomo import ConvexCone, Polyhedron, cone_from_rays, cross_cov_polyhedra
from .covariogram import cross_cov
from .exactgeom import (
    ZERO, DegenerateInput, Empty, Halfspace, Polytope, Rat, Unbounded, centroid, convex_hull,
    halfspace_intersection, rat, reflect, translate, vadd, vec, vneg, vscale, vsub,
)
from .faces import difference_body, direct_sum, exposed_face

__all__ = [
    "ParameterConstraintViolated", "SymmetricFactor", "GalleryFamily", "FAMILIES",
    "zonogon", "prism", "parse_params", "interiors_meet", "cross_cov_any", "parall_family",
    "parall_due_family", "cone_quadruple", "lifted_prisms",
    "product", "product_counterexample", "reflected_face_example", "trivial_associates",
    "congruent", "centrally_symmetric", "dk_decomposition_check", "reflected_face_relations",
    "REFLECTED_FACE_W",
]


class ParameterConstraintViolated(ValueError):
    pass


class SymmetricFactor(ValueError):
    pass


I1, I2, I3, I4 = (1, 0), (1, 1), (0, 1), (-1, 1)


def _imj(m) -> tuple:
    return (rat(m), mpq(1))


def zonogon(terms: Sequence[tuple], y: Sequence = (0, 0)) -> Polytope:
    """``sum c_i [-u_i, u_i] + y`` for ``terms = [(c_i, u_i), ...]``."""
    pts = [vec(y)]
    for c, u in terms:
        d = vscale(rat(c), vec(u))
        pts = [vadd(p, s) for p in pts for s in (d, vneg(d))]
    return convex_hull(pts)


def _positive(*xs):
    for x in xs:
        if rat(x) <= 0:
            raise ParameterConstraintViolated("parameters must be positive")


def parall_family(alpha, beta, gamma, delta, y: Sequence = (0, 0)):
    """Parallelograms ``K1, L1, K2, L2`` with equal cross covariograms whose
    pairs ``(K1, -L1)`` and ``(K2, -L2)`` are not synisothetic."""
    _positive(alpha, beta, gamma, delta)
    K1 = zonogon([(alpha, I1), (beta, I2)])
    L1 = zonogon([(gamma, I3), (delta, I4)], y)
    K2 = zonogon([(alpha, I1), (delta, I4)])
    L2 = zonogon([(beta, I2), (gamma, I3)], y)
    return K1, L1, K2, L2


def parall_due_family(alpha, beta, gamma, delta, m=0, y: Sequence = (0, 0)):
    """Parallelograms ``K3, L3, K4, L4`` with equal cross covariograms whose
    pairs are synisothetic but not trivial associates."""
    _positive(alpha, beta, gamma, delta)
    a, b, c, d, m = (rat(v) for v in (alpha, beta, gamma, delta, m))
    if not ((m == 0 and a != c and b != d) or (m != 0 and a != c)):
        raise ParameterConstraintViolated(
            "need (m = 0, alpha != gamma, beta != delta) or (m != 0, alpha != gamma)")
    K3 = zonogon([(a, I1), (b, I3)])
    L3 = zonogon([(c, I1), (d, _imj(m))], y)
    K4 = zonogon([(c, I1), (b, I3)])
    L4 = zonogon([(a, I1), (d, _imj(m))], y)
    return K3, L3, K4, L4


def cone_quadruple() -> tuple[ConvexCone, ConvexCone, ConvexCone, ConvexCone]:
    """Planar cones ``A1, B1, A2, B2`` with ``g_{A1,B1} = g_{A2,B2}``.

    ``A1`` spans angles [0, 3pi/4], ``B1`` spans [5pi/4, 3pi/2], ``A2`` spans
    [0, pi/4] and ``B2`` spans [3pi/2, 7pi/4].
    """
    A1 = cone_from_rays([(1, 0), (-1, 1)])
    B1 = cone_from_rays([(-1, -1), (0, -1)])
    A2 = cone_from_rays([(1, 0), (1, 1)])
    B2 = cone_from_rays([(0, -1), (1, -1)])
    return A1, B1, A2, B2


def prism(A: ConvexCone, height) -> Polyhedron:
    """``A x [0, height]`` as a polyhedron in one dimension more."""
    h = rat(height)
    hs = [Halfspace(tuple(a.normal) + (ZERO,), ZERO) for a in A.halfspaces]
    n = A.dim + 1
    top = [ZERO] * n
    top[-1] = mpq(1)
    hs += [Halfspace(tuple(top), h), Halfspace(tuple(-c for c in top), ZERO)]
    return Polyhedron(n, tuple(hs))


def lifted_prisms(height=1) -> tuple[Polyhedron, ...]:
    return tuple(prism(A, height) for A in cone_quadruple())


def product(K: Polytope, L: Polytope) -> Polytope:
    return direct_sum([(K, range(K.dim)), (L, range(K.dim, K.dim + L.dim))])


def centrally_symmetric(K: Polytope) -> bool:
    return translate(reflect(K), vscale(2, centroid(K))) == K


def product_counterexample(K: Polytope, L: Polytope) -> tuple[Polytope, Polytope]:
    """``K x L`` and ``K x (-L)``: equal covariograms, not congruent."""
    if centrally_symmetric(K) or centrally_symmetric(L):
        raise SymmetricFactor("both factors must be non centrally symmetric")
    return product(K, L), product(K, reflect(L))


def congruent(P: Polytope, Q: Polytope) -> bool:
    """Is ``P`` a translate of ``Q`` or of ``-Q``?"""
    cp, cq = centroid(P), centroid(Q)
    return translate(Q, vsub(cp, cq)) == P or translate(reflect(Q), vadd(cp, cq)) == P


def trivial_associates(K: Polytope, L: Polytope, Kp: Polytope, Lp: Polytope) -> bool:
    """``(K, L) = (K' + x, L' + x)`` or ``(K, L) = (-L' + x, -K' + x)`` for some ``x``."""
    x = vsub(centroid(K), centroid(Kp))
    if translate(Kp, x) == K and translate(Lp, x) == L:
        return True
    x = vadd(centroid(K), centroid(Lp))
    return translate(reflect(Lp), x) == K and translate(reflect(Kp), x) == L


@dataclass(frozen=True)
class ReflectedFaceExample:
    K: Polytope
    L: Polytope
    P: Polytope
    Pp: Polytope
    w: tuple
    reflected_face: bool      # P'_w = -P_w
    no_matching_motion: bool  # no translate of P' or -P' has the same w-face as P


def _translates(A: Sequence, B: Sequence) -> bool:
    a, b = sorted(A), sorted(B)
    if len(a) != len(b):
        return False
    x = vsub(b[0], a[0])
    return all(vadd(p, x) == q for p, q in zip(a, b))


def reflected_face_relations(P: Polytope, Pp: Polytope, w: Sequence) -> tuple[bool, bool]:
    """``(P'_w = -P_w, no translate of P' or of -P' has the same w-face as P)``."""
    w = vec(w)
    Fw = exposed_face(P, w).vertices
    Fpw = exposed_face(Pp, w).vertices
    reflected = sorted(Fpw) == sorted(vneg(v) for v in Fw)
    no_motion = not _translates(Fpw, Fw) and \
        not _translates(exposed_face(reflect(Pp), w).vertices, Fw)
    return reflected, no_motion


REFLECTED_FACE_W = (-1, 0, 0, 0)


def reflected_face_example(L: Polytope | None = None) -> ReflectedFaceExample:
    """Four-dimensional pair whose w-faces differ by a reflection that no
    global translation or reflection of ``P'`` can undo."""
    K = convex_hull([(0, -2), (0, 2), (1, 1), (1, -1)])
    L = L if L is not None else convex_hull([(0, 0), (1, 0), (0, 1)])
    P, Pp = product(K, L), product(K, reflect(L))
    w = vec(REFLECTED_FACE_W)
    reflected, no_motion = reflected_face_relations(P, Pp, w)
    return ReflectedFaceExample(K, L, P, Pp, w, reflected, no_motion)


def _support_sum(K: Polytope, x: Sequence) -> Rat:
    return K.support(x) + K.support(vneg(x))


def dk_decomposition_check(L: Polytope, M: Polytope, probes: Sequence[Sequence] = ()) -> bool:
    """``D(L + M) = DL + DM`` for ``L`` and ``M`` in complementary coordinate
    subspaces, plus additivity of ``h(x) + h(-x)`` over the split at ``probes``."""
    K = product(L, M)
    DK = difference_body(K)
    if DK != product(difference_body(L), difference_body(M)):
        return False
    k = L.dim
    for x in probes:
        x = vec(x)
        if _support_sum(K, x) != _support_sum(L, x[:k]) + _support_sum(M, x[k:]):
            return False
        if DK.support(x) != _support_sum(K, x):
            return False
    return True


# ---------------------------------------------------------------------------
# families for the command line and the verify suites


@dataclass(frozen=True)
class GalleryFamily:
    """A named example: ``build(params)`` returns named bodies; ``relations``
    lists ``(kind, body names, expected)`` claims that ``verify`` checks."""

    name: str
    defaults: dict
    build: Callable[..., dict]
    relations: tuple = field(default=())


def _build_parall(p):
    K1, L1, K2, L2 = parall_family(p["alpha"], p["beta"], p["gamma"], p["delta"], p["y"])
    return {"K1": K1, "L1": L1, "K2": K2, "L2": L2}


def _build_parall_due(p):
    K3, L3, K4, L4 = parall_due_family(p["alpha"], p["beta"], p["gamma"], p["delta"], p["m"], p["y"])
    return {"K3": K3, "L3": L3, "K4": K4, "L4": L4}


def _build_product(p):
    K = convex_hull([vec(v) for v in p["K"]])
    L = convex_hull([vec(v) for v in p["L"]])
    P, Q = product_counterexample(K, L)
    return {"K": K, "L": L, "KxL": P, "KxminusL": Q}


def _build_cones(p):
    A1, B1, A2, B2 = cone_quadruple()
    return {"A1": A1, "B1": B1, "A2": A2, "B2": B2}


def _build_reflected_face(p):
    r = reflected_face_example(convex_hull([vec(v) for v in p["L"]]))
    return {"K": r.K, "L": r.L, "P": r.P, "Pprime": r.Pp}


_TRI = [["0", "0"], ["1", "0"], ["0", "1"]]

_PAIR_CLAIMS = ("cross_cov_equal", "synisothetic", "trivial_associates")

FAMILIES = {
    "parall": GalleryFamily(
        "parall", {"alpha": "1", "beta": "1", "gamma": "1", "delta": "1", "y": ["0", "0"]},
        _build_parall,
        tuple((k, ("K1", "L1", "K2", "L2"), e) for k, e in zip(_PAIR_CLAIMS, (True, False, False)))),
    "parall-due": GalleryFamily(
        "parall-due", {"alpha": "1", "beta": "1", "gamma": "2", "delta": "1", "m": "1",
                       "y": ["0", "0"]},
        _build_parall_due,
        tuple((k, ("K3", "L3", "K4", "L4"), e) for k, e in zip(_PAIR_CLAIMS, (True, True, False)))),
    "cones": GalleryFamily(
        "cones", {}, _build_cones,
        (("cross_cov_equal", ("A1", "B1", "A2", "B2"), True),
         ("interiors_meet_reflected", ("A1", "B1"), True),
         ("interiors_meet_reflected", ("A2", "B2"), False))),
    "product": GalleryFamily(
        "product", {"K": _TRI, "L": _TRI}, _build_product,
        (("cov_equal", ("KxL", "KxminusL"), True), ("congruent", ("KxL", "KxminusL"), False))),
    "reflected-face": GalleryFamily(
        "reflected-face", {"L": _TRI}, _build_reflected_face,
        (("reflected_face", ("P", "Pprime"), True), ("no_matching_motion", ("P", "Pprime"), True),
         ("congruent", ("P", "Pprime"), False))),
}


def parse_params(family: GalleryFamily, text: str | None) -> dict:
    """Merge ``key=value;key=value`` overrides into the defaults.

    Vector values are comma separated; point lists separate points with
    ``|`` (for example ``K=0,0|1,0|0,1``).
    """
    params = dict(family.defaults)
    if not text:
        return params
    for item in text.split(";"):
        if not item.strip():
            continue
        key, _, value = item.partition("=")
        key, value = key.strip(), value.strip()
        if key not in params:
            raise KeyError(f"unknown parameter {key!r} for family {family.name}")
        default = params[key]
        if isinstance(default, list) and default and isinstance(default[0], list):
            params[key] = [p.split(",") for p in value.split("|")]
        elif isinstance(default, list):
            params[key] = value.split(",")
        else:
            params[key] = value
    return params


def interiors_meet(A: ConvexCone, B: ConvexCone) -> bool:
    """Do the interiors of two full-dimensional cones meet?"""
    n = A.dim
    box_hs = []
    for i in range(n):
        e = [ZERO] * n
        e[i] = mpq(1)
        box_hs += [Halfspace(tuple(e), mpq(1)), Halfspace(tuple(-c for c in e), mpq(1))]
    try:
        halfspace_intersection(list(A.halfspaces) + list(B.halfspaces) + box_hs, n)
    except (DegenerateInput, Empty, Unbounded):
        return False
    return True


def cross_cov_any(A, B, x):
    """Cross covariogram of polytopes, cones or polyhedra."""
    if isinstance(A, Polytope) and isinstance(B, Polytope):
        return cross_cov(A, B, x)
    return cross_cov_polyhedra(A, B, x)

