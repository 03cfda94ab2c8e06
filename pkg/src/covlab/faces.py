"""Faces, exposed faces, support and normal cones, difference bodies,
Steiner points and direct sums."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Sequence

from gmpy2 import mpq

from .exactgeom import (
    ONE, ZERO, Halfspace, Polytope, Vec, _bits, _subfaces, centroid, convex_hull,
    dot, extreme_points, minkowski_sum, rank, reflect, vadd, vec, vscale, vsub,
)

__all__ = [
    "Face", "FaceCone", "face_lattice", "face_from_mask", "exposed_face", "support_cone",
    "normal_cone", "normal_cone_interior", "difference_body", "check_face_additivity",
    "centroid", "steiner_point", "direct_sum", "SubspacesNotComplementary",
]


class SubspacesNotComplementary(ValueError):
    pass


@dataclass(frozen=True)
class Face:
    """A proper face, identified by the indices of the owner's vertices on it."""

    dim: int
    vertex_ids: tuple
    relint_point: Vec
    facet_ids: tuple      # facets of the owner containing this face
    vertices: tuple

    @property
    def mask(self) -> int:
        return sum(1 << i for i in self.vertex_ids)


@dataclass(frozen=True)
class FaceCone:
    """Support cone (halfspaces through the origin) or normal cone (rays)."""

    apex: Vec
    halfspaces: tuple = ()
    rays: tuple = ()

    def contains(self, x: Sequence) -> bool:
        if self.halfspaces:
            return all(dot(h.normal, x) <= 0 for h in self.halfspaces)
        raise NotImplementedError("membership is defined for the halfspace form")

    def canonical(self) -> tuple:
        return tuple(sorted(h.normal for h in self.halfspaces))


def _affine_dim(points: Sequence[Vec]) -> int:
    if len(points) <= 1:
        return 0
    return rank([vsub(p, points[0]) for p in points[1:]])


def face_from_mask(P: Polytope, mask: int) -> Face:
    ids = tuple(_bits(mask))
    verts = tuple(P.vertices[i] for i in ids)
    facets = ~0
    for i in ids:
        facets &= P.vertex_facets[i]
    relint = vscale(mpq(1, len(ids)), _sum(verts))
    return Face(_affine_dim(verts), ids, relint, tuple(_bits(facets)), verts)


def _sum(vs: Sequence[Vec]) -> Vec:
    acc = vs[0]
    for v in vs[1:]:
        acc = vadd(acc, v)
    return acc


@lru_cache(maxsize=512)
def face_lattice(P: Polytope) -> tuple:
    """All proper faces of ``P``, each once, sorted by (dim, vertex ids)."""
    seen = set()
    stack = list(P.incidence)
    while stack:
        m = stack.pop()
        if m in seen or m == 0:
            continue
        seen.add(m)
        if m.bit_count() > 1:
            stack.extend(_subfaces(m, P.incidence))
    faces = [face_from_mask(P, m) for m in seen]
    return tuple(sorted(faces, key=lambda f: (f.dim, f.vertex_ids)))


def exposed_face(P: Polytope, w: Sequence) -> Face:
    w = vec(w)
    if all(x == 0 for x in w):
        raise ValueError("w must be nonzero")
    vals = [dot(w, v) for v in P.vertices]
    top = max(vals)
    return face_from_mask(P, sum(1 << i for i, x in enumerate(vals) if x == top))


def support_cone(P: Polytope, F: Face) -> FaceCone:
    hs = tuple(Halfspace(P.halfspaces[h].normal, ZERO) for h in F.facet_ids)
    return FaceCone(F.relint_point, halfspaces=hs)


def normal_cone(P: Polytope, F: Face) -> FaceCone:
    """Positive hull of the outer facet normals at ``F``.

    For an edge of a 3-polytope both generating normals are stored; the
    cone itself does not depend on their order.
    """
    rays = tuple(P.halfspaces[h].normal for h in F.facet_ids)
    return FaceCone(F.relint_point, rays=rays)


def normal_cone_interior(P: Polytope, F: Face, weights: Sequence | None = None) -> Vec:
    """A point of the relative interior of the normal cone of ``F``."""
    rays = normal_cone(P, F).rays
    if weights is None:
        weights = [ONE] * len(rays)
    acc = (ZERO,) * P.dim
    for c, r in zip(weights, rays):
        if c <= 0:
            raise ValueError("weights must be positive")
        acc = vadd(acc, vscale(c, r))
    return acc


@lru_cache(maxsize=256)
def _cached_sum(P: Polytope, Q: Polytope) -> Polytope:
    return minkowski_sum(P, Q)


def difference_body(P: Polytope) -> Polytope:
    return _cached_sum(P, reflect(P))


def check_face_additivity(P: Polytope, Q: Polytope | None, w: Sequence) -> bool:
    """Exposed face of a Minkowski sum is the sum of exposed faces.

    ``Q=None`` means ``Q = -P``, i.e. the difference-body case.  Also checks
    additivity of the support function in direction ``w``.
    """
    w = vec(w)
    if Q is None:
        Q = reflect(P)
    S = _cached_sum(P, Q)
    lhs = exposed_face(S, w).vertices
    fp, fq = exposed_face(P, w), exposed_face(Q, w)
    rhs = extreme_points(vadd(a, b) for a in fp.vertices for b in fq.vertices)
    return tuple(sorted(lhs)) == tuple(sorted(rhs)) and S.support(w) == P.support(w) + Q.support(w)


def _unit(v: Sequence) -> list[float]:
    f = [float(x) for x in v]
    n = math.sqrt(sum(x * x for x in f))
    return [x / n for x in f]


def _triangle_solid_angle(a, b, c) -> float:
    """Solid angle of the spherical triangle with unit vertices a, b, c."""
    cross = (b[1] * c[2] - b[2] * c[1], b[2] * c[0] - b[0] * c[2], b[0] * c[1] - b[1] * c[0])
    num = abs(sum(x * y for x, y in zip(a, cross)))
    den = 1 + sum(x * y for x, y in zip(a, b)) + sum(x * y for x, y in zip(b, c)) \
        + sum(x * y for x, y in zip(c, a))
    return 2 * math.atan2(num, den)


def _cone_solid_angle(normals: Sequence[Sequence[float]]) -> float:
    """Solid angle of the pointed cone spanned by unit vectors (fan triangulation)."""
    m = [sum(v[i] for v in normals) for i in range(3)]
    mn = math.sqrt(sum(x * x for x in m))
    m = [x / mn for x in m]
    # orthonormal frame of the plane orthogonal to m
    seed = [1.0, 0.0, 0.0] if abs(m[0]) < 0.9 else [0.0, 1.0, 0.0]
    e1 = [s - m[i] * sum(a * b for a, b in zip(seed, m)) for i, s in enumerate(seed)]
    n1 = math.sqrt(sum(x * x for x in e1))
    e1 = [x / n1 for x in e1]
    e2 = [m[1] * e1[2] - m[2] * e1[1], m[2] * e1[0] - m[0] * e1[2], m[0] * e1[1] - m[1] * e1[0]]
    order = sorted(normals, key=lambda v: math.atan2(sum(a * b for a, b in zip(v, e2)),
                                                     sum(a * b for a, b in zip(v, e1))))
    return sum(_triangle_solid_angle(order[0], order[i], order[i + 1])
               for i in range(1, len(order) - 1))


def steiner_point(P: Polytope) -> tuple[float, ...]:
    """Steiner point as the normal-cone-angle weighted mean of vertices (float).

    In the plane the weight of a vertex is its exterior angle over 2*pi; in
    space it is the solid angle of its normal cone over 4*pi.
    """
    n = P.dim
    if n == 1:
        return ((float(P.vertices[0][0]) + float(P.vertices[1][0])) / 2,)
    if n not in (2, 3):
        raise NotImplementedError("Steiner point implemented for dimensions 1 to 3")
    units = [_unit(h.normal) for h in P.halfspaces]
    acc = [0.0] * n
    total = 0.0
    for v, fmask in zip(P.vertices, P.vertex_facets):
        normals = [units[h] for h in _bits(fmask)]
        if n == 2:
            a, b = normals
            wgt = math.acos(max(-1.0, min(1.0, a[0] * b[0] + a[1] * b[1]))) / (2 * math.pi)
        else:
            wgt = _cone_solid_angle(normals) / (4 * math.pi)
        total += wgt
        for i in range(n):
            acc[i] += wgt * float(v[i])
    return tuple(x / total for x in acc)


def direct_sum(parts: Sequence[tuple[Polytope, Sequence[int]]]) -> Polytope:
    """Sum of polytopes placed in complementary coordinate subspaces."""
    coords = [tuple(c) for _, c in parts]
    flat = [c for cs in coords for c in cs]
    n = len(flat)
    if sorted(flat) != list(range(n)):
        raise SubspacesNotComplementary(f"coordinate sets {coords} do not partition 0..{n - 1}")
    for P, cs in parts:
        if P.dim != len(cs):
            raise SubspacesNotComplementary("part dimension does not match its coordinates")
    pts = []
    for combo in product(*(P.vertices for P, _ in parts)):
        x = [ZERO] * n
        for v, cs in zip(combo, coords):
            for val, c in zip(v, cs):
                x[c] = val
        pts.append(tuple(x))
    return convex_hull(pts)


def faces_summary(P: Polytope) -> list[dict]:
    """JSON-friendly dump of the face lattice with normal-cone rays."""
    from .exactgeom import fmt_vec
    out = []
    for F in face_lattice(P):
        out.append({"dim": F.dim, "vertex_ids": list(F.vertex_ids),
                    "normal_cone": [fmt_vec(r) for r in normal_cone(P, F).rays]})
    return out
