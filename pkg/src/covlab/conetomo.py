"""Polyhedral cones with apex at the origin and the tomography built on them.

Cones are kept in both forms: halfspaces through the origin and generating
rays (with a +/- pair for every lineality direction, so dihedral cones in
space are representable).  Volumes of bounded intersections of cones and
translated cones are computed exactly through
:func:`covlab.exactgeom.halfspace_intersection`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Sequence

from gmpy2 import mpq

from .covariogram import line_interval, line_point
from .exactgeom import (
    ZERO, DegenerateInput, Empty, GeometryError, Halfspace, Polytope, Rat, Unbounded,
    Vec, _recession_nontrivial, box, clip_volume, convex_hull, det, dot, fmt_vec,
    halfspace_intersection, norm_sq, null_space, polytope_from_json, primitive, rank, rat,
    scaled_measure, solve, vadd, vec, vneg, vscale,
)


class NotPointed(GeometryError):
    pass


class UnboundedIntersection(GeometryError):
    pass


class InfiniteChord(GeometryError):
    pass


class NonSmoothPoint(GeometryError):
    pass


class PInsideBody(GeometryError):
    pass


class StencilUnstable(ArithmeticError):
    pass


class SetupViolated(GeometryError):
    """The cones do not satisfy the geometric hypotheses of the check."""


# ---------------------------------------------------------------------------
# cones


@dataclass(frozen=True)
class ConvexCone:
    dim: int
    rays: tuple
    halfspaces: tuple
    pointed: bool

    def contains(self, x: Sequence) -> bool:
        return all(dot(h.normal, x) <= 0 for h in self.halfspaces)

    @property
    def normals(self) -> tuple:
        return tuple(h.normal for h in self.halfspaces)

    def reflect(self) -> "ConvexCone":
        return cone_from_halfspaces([vneg(a) for a in self.normals], self.dim)

    def linear_image(self, a: Sequence[Sequence]) -> "ConvexCone":
        """Image under the invertible linear map with matrix rows ``a``."""
        a = [vec(r) for r in a]
        if det(a) == 0:
            raise ValueError("map is singular")
        at = [list(c) for c in zip(*a)]
        # x in TA iff n . T^{-1} x <= 0, i.e. the normals become T^{-T} n
        return cone_from_halfspaces([solve(at, n) for n in self.normals], self.dim)


@dataclass(frozen=True)
class Polyhedron:
    """Intersection of finitely many halfspaces (possibly unbounded)."""

    dim: int
    halfspaces: tuple

    def translated(self, x: Sequence) -> "Polyhedron":
        return Polyhedron(self.dim, tuple(h.translated(vec(x)) for h in self.halfspaces))


def as_polyhedron(obj) -> Polyhedron:
    if isinstance(obj, Polyhedron):
        return obj
    return Polyhedron(obj.dim, tuple(obj.halfspaces))


def cone_from_halfspaces(normals: Sequence[Sequence], dim: int) -> ConvexCone:
    """Cone ``{x : a.x <= 0 for all a}``; must have nonempty interior."""
    normals = sorted(set(primitive(vec(a)) for a in normals))
    lineality = [primitive(v) for v in null_space(normals, dim)] if normals else None
    if lineality is None:
        raise DegenerateInput("a cone needs at least one halfspace")
    l = len(lineality)
    rays = set()
    for sub in combinations(normals, dim - 1 - l):
        ns = null_space(list(sub) + lineality, dim)
        if len(ns) != 1:
            continue
        d = primitive(ns[0])
        for cand in (d, vneg(d)):
            if all(dot(a, cand) <= 0 for a in normals):
                rays.add(cand)
    for v in lineality:
        rays.add(v)
        rays.add(vneg(v))
    proper = [r for r in rays if any(dot(a, r) != 0 for a in normals)]
    inner = (ZERO,) * dim
    for r in proper:
        inner = vadd(inner, r)
    if not all(dot(a, inner) < 0 for a in normals):
        raise DegenerateInput("cone has empty interior")
    kept = [a for a in normals if rank([r for r in rays if dot(a, r) == 0]) == dim - 1]
    return ConvexCone(dim, tuple(sorted(rays)), tuple(Halfspace(a, ZERO) for a in kept), l == 0)


def cone_from_rays(rays: Sequence[Sequence]) -> ConvexCone:
    """Pointed cone generated by ``rays``; raises :class:`NotPointed` otherwise."""
    rays = [vec(r) for r in rays]
    dim = len(rays[0])
    origin = (ZERO,) * dim
    hull = convex_hull([origin] + rays)
    if origin not in hull.vertices:
        raise NotPointed("the rays do not generate a pointed cone")
    normals = [h.normal for h in hull.halfspaces if h.offset == 0]
    return cone_from_halfspaces(normals, dim)


def dihedral_cone(n1: Sequence, n2: Sequence) -> ConvexCone:
    """``{x : n1.x <= 0, n2.x <= 0}`` in space; not pointed (it contains its edge)."""
    return cone_from_halfspaces([vec(n1), vec(n2)], len(n1))


def edge_direction(L: ConvexCone) -> Vec:
    """Direction of the edge line of a dihedral cone."""
    ns = null_space(list(L.normals), L.dim)
    if len(ns) != 1:
        raise ValueError("not a dihedral cone")
    return primitive(ns[0])


@dataclass(frozen=True)
class ConeSection:
    cone: ConvexCone
    height: Rat
    polygon: Polytope


def section(A: ConvexCone, height=1) -> ConeSection:
    """Intersection with ``{x_n = height}`` in the first ``n-1`` coordinates."""
    h = rat(height)
    hs = [Halfspace(a[:-1], -a[-1] * h) for a in A.normals if any(c != 0 for c in a[:-1])]
    for a in A.normals:
        if all(c == 0 for c in a[:-1]) and a[-1] * h > 0:
            raise Empty("section is empty")
    return ConeSection(A, h, halfspace_intersection(hs, A.dim - 1))


def cone_from_section(Q: Polytope, height=1) -> ConvexCone:
    h = rat(height)
    if h <= 0:
        raise ValueError("height must be positive")
    return cone_from_rays([tuple(v) + (h,) for v in Q.vertices])


def cone_from_json(obj: dict) -> ConvexCone:
    if "section" in obj:
        return cone_from_section(polytope_from_json(obj["section"]), rat(obj.get("height", 1)))
    if "rays" in obj:
        return cone_from_rays([vec(r) for r in obj["rays"]])
    if "halfspaces" in obj:
        return cone_from_halfspaces([vec(h["normal"]) for h in obj["halfspaces"]], int(obj["dim"]))
    raise ValueError("cone JSON needs 'rays', 'halfspaces' or 'section'")


def cone_to_json(A: ConvexCone) -> dict:
    if A.pointed:
        return {"dim": A.dim, "rays": [fmt_vec(r) for r in A.rays]}
    return {"dim": A.dim, "halfspaces": [{"normal": fmt_vec(a), "offset": "0"} for a in A.normals]}


def load_cone(path) -> ConvexCone:
    return cone_from_json(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# cross covariograms of cones and polyhedra


def polyhedra_meet_trivially(A, B) -> bool:
    """True iff the recession cones of A and B share only the origin."""
    return not _recession_nontrivial(list({h.normal for h in A.halfspaces} |
                                          {h.normal for h in B.halfspaces}), A.dim)


def intersection_volume(halfspaces: Sequence[Halfspace], dim: int) -> Rat:
    try:
        return halfspace_intersection(halfspaces, dim).volume
    except (Empty, DegenerateInput):
        return ZERO
    except Unbounded as exc:
        raise UnboundedIntersection(str(exc)) from exc


def cross_cov_polyhedra(A, B, x: Sequence) -> Rat:
    """Volume of ``A`` intersected with ``B + x`` for polyhedra (or cones)."""
    x = vec(x)
    hs = list(A.halfspaces) + [h.translated(x) for h in B.halfspaces]
    return intersection_volume(hs, A.dim)


def sandwich_holds(A: ConvexCone, B: ConvexCone) -> bool:
    """``A`` lies in ``{x_n >= 0}`` and ``B`` in ``{x_n <= 0}``."""
    return all(r[-1] >= 0 for r in A.rays) and all(r[-1] <= 0 for r in B.rays)


@lru_cache(maxsize=1024)
def _pair_bounded(A: ConvexCone, B: ConvexCone) -> bool:
    return polyhedra_meet_trivially(A, B)


def cross_cov_cones(A: ConvexCone, B: ConvexCone, x: Sequence, check_setup: bool = True) -> Rat:
    """Area/volume of ``A`` intersected with ``B + x``.

    With ``check_setup`` the cones must lie on opposite sides of
    ``{x_n = 0}``.  A common recession direction makes every nonempty
    intersection unbounded and raises :class:`UnboundedIntersection`.
    """
    if check_setup and not sandwich_holds(A, B):
        raise SetupViolated("cones are not separated by the last coordinate hyperplane")
    if not _pair_bounded(A, B):
        raise UnboundedIntersection("the cones share a recession direction")
    return cross_cov_polyhedra(A, B, x)


# ---------------------------------------------------------------------------
# X-rays and chord functionals


def _clip_halfspaces(clip) -> list:
    if clip is None:
        return []
    if isinstance(clip, Polytope):
        return list(clip.halfspaces)
    return list(clip)


def xray_cone(A: ConvexCone, d: Sequence, y: Sequence, clip=None):
    """Length of ``A`` (optionally clipped) on the line ``y + R d``."""
    d = vec(d)
    if all(c == 0 for c in d):
        raise ValueError("d must be nonzero")
    iv = line_interval(list(A.halfspaces) + _clip_halfspaces(clip), line_point(d, y), d)
    if iv is None:
        return ZERO
    tlo, thi = iv
    if tlo is None or thi is None:
        raise InfiniteChord("the line meets the cone in a ray or a line")
    return scaled_measure(thi - tlo, norm_sq(d))


def minus_one_chord(K: Polytope, p: Sequence, d: Sequence):
    """Integral of ``|x - p|^-2`` over the chord of ``K`` on the line ``p + R d``.

    Equals ``1/r1 - 1/r2`` for the endpoint distances ``r1 <= r2`` (zero when
    the line misses ``K``).  Exact when ``|d|`` is rational.
    """
    p, d = vec(p), vec(d)
    if K.contains(p):
        raise PInsideBody("p must lie outside K")
    iv = line_interval(K.halfspaces, p, d)
    if iv is None:
        return ZERO
    t1, t2 = sorted((abs(iv[0]), abs(iv[1])))
    return scaled_measure(1 / t1 - 1 / t2, 1 / norm_sq(d))


# ---------------------------------------------------------------------------
# mixed derivative of the dihedral-cone cross covariogram


@dataclass(frozen=True)
class MixedDerivativeReport:
    residual: float
    mixed: Rat
    xray: object
    alpha: object
    fitted_alpha: float | None


def _mixed_difference(f, t, s, h):
    return (f(t + h, s + h) - f(t + h, s - h) - f(t - h, s + h) + f(t - h, s - h)) / (4 * h * h)


def _on_breakline(At: ConvexCone, e: Vec, base: Vec) -> bool:
    """Does the line ``base + R e`` meet an extreme ray of ``At``?

    These are the parameters where the volume stops being a single cubic
    polynomial in ``(t, s)``.
    """
    for r in At.rays:
        if rank([e, r]) < 2 or det([base, e, r]) != 0:
            continue
        mu, _ = solve([[r[i], -e[i]] for i in _independent_rows([r, e])],
                      [base[i] for i in _independent_rows([r, e])])
        if mu >= 0:
            return True
    return False


def _independent_rows(cols) -> list[int]:
    n = len(cols[0])
    for i in range(n):
        for j in range(i + 1, n):
            if det([[c[i] for c in cols], [c[j] for c in cols]]) != 0:
                return [i, j]
    raise DegenerateInput("columns are dependent")


def mixed_derivative_check(At: ConvexCone, L: ConvexCone, v1: Sequence, v2: Sequence,
                           t, s, h=mpq(1, 256)) -> MixedDerivativeReport:
    """Compare the mixed second derivative of ``(t, s) -> vol(At and L + t v1 + s v2)``
    with ``alpha`` times the X-ray of ``At`` along the edge of ``L``.

    ``L`` is a dihedral cone with facets R1 (first normal) and R2, ``v_i`` lie
    in the relative interior of ``R_i``, and
    ``alpha = |det(v1, v2, e)| / |e|`` for the edge direction ``e``.  The
    difference quotient is Richardson-extrapolated over steps h, h/2, h/4.
    """
    v1, v2, t, s, h = vec(v1), vec(v2), rat(t), rat(s), rat(h)
    n1, n2 = L.normals[0], L.normals[1]
    if not (dot(n1, v1) == 0 and dot(n2, v1) < 0 and dot(n2, v2) == 0 and dot(n1, v2) < 0):
        if dot(n2, v1) == 0 and dot(n1, v1) < 0 and dot(n1, v2) == 0 and dot(n2, v2) < 0:
            pass  # facets listed in the other order
        else:
            raise ValueError("v1, v2 must lie in the relative interiors of the two facets")
    if not polyhedra_meet_trivially(At, L):
        raise SetupViolated("the cone must meet L only at the origin")
    e = edge_direction(L)
    base = vadd(vscale(t, v1), vscale(s, v2))
    shifted = [hs.translated(base) for hs in L.halfspaces]
    try:
        halfspace_intersection(list(At.halfspaces) + shifted, L.dim)
    except DegenerateInput as exc:
        raise NonSmoothPoint("the intersection is nonempty with empty interior") from exc
    except Empty:
        pass

    if any(dot(n, base) == 0 for n in L.normals) or _on_breakline(At, e, base):
        raise NonSmoothPoint("the edge of the translated dihedral cone meets an edge of the cone")

    def f(a, b):
        shift = vadd(vscale(a, v1), vscale(b, v2))
        return cross_cov_polyhedra(At, L, shift)

    d1, d2, d4 = (_mixed_difference(f, t, s, h / k) for k in (1, 2, 4))
    mixed = (4 * d4 - d2) / 3
    alpha = scaled_measure(abs(det([v1, v2, e])), 1 / norm_sq(e))
    ray = xray_cone(At, e, base)
    target = float(alpha) * float(ray)
    if mixed == 0 and target == 0:
        res = 0.0
    else:
        res = abs(float(mixed) - target) / max(abs(target), 1e-300)
    fitted = float(mixed) / float(ray) if ray != 0 else None
    return MixedDerivativeReport(res, mixed, ray, alpha, fitted)


# ---------------------------------------------------------------------------
# third-derivative jumps for two dihedral cones


def rational_ball() -> Polytope:
    """Polytope inscribed in the unit sphere with rational vertices.

    Uses the 6 axis points and the 24 signed permutations of (1, 2, 2)/3.
    """
    pts = set()
    for i in range(3):
        for sg in (1, -1):
            p = [ZERO] * 3
            p[i] = mpq(sg)
            pts.add(tuple(p))
    for big in range(3):
        for sgns in [(a, b, c) for a in (1, -1) for b in (1, -1) for c in (1, -1)]:
            p = [mpq(2, 3)] * 3
            p[big] = mpq(1, 3)
            pts.add(tuple(sg * x for sg, x in zip(sgns, p)))
    return convex_hull(pts)


def _shift_volume(C: ConvexCone, D: ConvexCone, t: Rat, clip: Polytope) -> Rat:
    e3 = (ZERO, ZERO, t)
    cuts = [(h.normal, h.offset) for h in C.halfspaces]
    cuts += [(h.normal, h.offset + dot(h.normal, e3)) for h in D.halfspaces]
    return clip_volume(clip, cuts)


def one_sided_third_derivatives(C: ConvexCone, D: ConvexCone, t, clip: Polytope | None = None):
    """Right and left stencils (-1, 3, -3, 1)/t^3 on t..4t and on -t..-4t."""
    t = rat(t)
    clip = clip if clip is not None else box((-1,) * 3, (1,) * 3)
    g = lambda u: _shift_volume(C, D, u, clip)  # noqa: E731

    def stencil(step):
        return (g(4 * step) - 3 * g(3 * step) + 3 * g(2 * step) - g(step)) / step ** 3

    return stencil(t), stencil(-t)


def _crosses(A: ConvexCone) -> bool:
    return any(r[-1] > 0 for r in A.rays) and any(r[-1] < 0 for r in A.rays)


def _side(A: ConvexCone) -> int:
    """+1 if A lies in {x3 >= 0}, -1 if in {x3 <= 0}, 0 if it crosses."""
    if all(r[-1] >= 0 for r in A.rays):
        return 1
    if all(r[-1] <= 0 for r in A.rays):
        return -1
    return 0


def third_derivative_jump(C: ConvexCone, D: ConvexCone, t_probe=mpq(1, 64),
                          clip: Polytope | None = None) -> int:
    """Sign of the jump of the third derivative of ``t -> vol(C and D + t e3 and clip)`` at 0.

    Evaluated at two dyadic scales ``t_probe`` and ``t_probe / 2``; they must
    agree in sign, else :class:`StencilUnstable`.
    """
    if edge_direction(C)[1:] != (0, 0) or edge_direction(D)[::2] != (0, 0):
        raise SetupViolated("C must have edge the x1 axis and D the x2 axis")
    for A in (C, D):
        for a in A.normals:
            if a[0] == 0 and a[1] == 0:
                raise SetupViolated("a facet lies in the plane x3 = 0")
    t = rat(t_probe)
    signs = []
    for step in (t, t / 2):
        right, left = one_sided_third_derivatives(C, D, step, clip)
        diff = right - left
        signs.append((diff > 0) - (diff < 0))
    if signs[0] != signs[1]:
        raise StencilUnstable(f"stencil signs {signs} disagree")
    return signs[0]


def expected_jump_sign(C: ConvexCone, D: ConvexCone) -> int | None:
    """Sign predicted from which side of ``{x3 = 0}`` the cones occupy.

    Both crossing gives +1, exactly one crossing gives -1 and cones on
    opposite sides give +1.  Reflecting in ``{x3 = 0}`` or swapping the roles
    of C and D maps ``t`` to ``-t`` in a way that keeps the sign, which covers
    the mirrored configurations.  Cones on the same side return ``None``.
    """
    sc, sd = _side(C), _side(D)
    if sc == 0 and sd == 0:
        return 1
    if sc == 0 or sd == 0:
        return -1
    if sc != sd:
        return 1
    return None


def dihedral_from_wedge(edge_axis: int, u: Sequence, v: Sequence) -> ConvexCone:
    """Dihedral cone in space whose edge is coordinate axis ``edge_axis`` and whose
    cross-section in the other two coordinates is the planar wedge ``pos{u, v}``."""
    u, v = vec(u), vec(v)
    if u[0] * v[1] - u[1] * v[0] == 0:
        raise DegenerateInput("wedge rays must be independent")
    others = [i for i in range(3) if i != edge_axis]
    normals = []
    for a, b in ((u, v), (v, u)):
        n = (a[1], -a[0])
        if n[0] * b[0] + n[1] * b[1] > 0:
            n = (-n[0], -n[1])
        full = [ZERO] * 3
        full[others[0]], full[others[1]] = n
        normals.append(tuple(full))
    return dihedral_cone(*normals)


# ---------------------------------------------------------------------------
# the four-cone exchange identity


def exchange_setup_holds(A: ConvexCone, B: ConvexCone, C: ConvexCone, D: ConvexCone) -> bool:
    """A and B above ``{x_n = 0}`` touching it only at O, C and D below, conv(C u D) pointed."""
    for X in (A, B):
        if not X.pointed or any(r[-1] <= 0 for r in X.rays):
            return False
    for X in (C, D):
        if any(r[-1] > 0 for r in X.rays):
            return False
    try:
        cone_from_rays(list(C.rays) + list(D.rays))
    except (NotPointed, DegenerateInput):
        return False
    return True


def exchange_identity_probe(A: ConvexCone, B: ConvexCone, C: ConvexCone, D: ConvexCone,
                            probes: Sequence, check_setup: bool = True) -> bool:
    """Does ``g_{A,C} + g_{B,D} = g_{A,D} + g_{B,C}`` hold at every probe (exactly)?"""
    if check_setup and not exchange_setup_holds(A, B, C, D):
        raise SetupViolated("cones violate the exchange-identity hypotheses")
    for x in probes:
        lhs = cross_cov_cones(A, C, x, False) + cross_cov_cones(B, D, x, False)
        rhs = cross_cov_cones(A, D, x, False) + cross_cov_cones(B, C, x, False)
        if lhs != rhs:
            return False
    return True
