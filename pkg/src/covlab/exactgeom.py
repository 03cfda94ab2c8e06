"""Exact rational geometry for convex polytopes in dimensions 1 to 4.

All coordinates are ``gmpy2.mpq`` rationals and every predicate is decided
exactly.  A :class:`Polytope` carries both representations: its extreme
points (sorted lexicographically, which is also the canonical form used for
equality) and an irredundant list of facet halfspaces with primitive integer
normals.  Vertex/facet incidences are stored as integer bitmasks.
"""
from __future__ import annotations

import enum
import json
import math
import operator
from dataclasses import dataclass
from functools import cached_property, reduce
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import gmpy2
from gmpy2 import mpq

Rat = type(mpq())
Vec = tuple  # tuple of Rat

ZERO = mpq(0)
ONE = mpq(1)


class GeometryError(ValueError):
    pass


class DegenerateInput(GeometryError):
    """The point set or halfspace system is not full-dimensional."""


class Unbounded(GeometryError):
    pass


class Empty(GeometryError):
    pass


class SingularMatrix(GeometryError):
    pass


class Degenerate(enum.Enum):
    """Non-polytope outcomes of :func:`intersect`."""

    EMPTY = "empty"
    LOWER_DIM = "lower-dimensional"


# ---------------------------------------------------------------------------
# scalars and vectors


def rat(x) -> Rat:
    if isinstance(x, Rat):
        return x
    if isinstance(x, str):
        return mpq(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
        return mpq(int(x.numerator), int(x.denominator))
    return mpq(x)


def vec(xs: Iterable) -> Vec:
    return tuple(rat(x) for x in xs)


def parse_vec(text: str) -> Vec:
    """Parse ``"1/4, -2, 3/5"`` into a rational vector."""
    return vec(t for t in text.split(",") if t.strip())


def fmt_rat(q) -> str:
    return str(rat(q))


def fmt_vec(v: Sequence) -> list[str]:
    return [fmt_rat(x) for x in v]


def dot(u: Sequence, v: Sequence) -> Rat:
    return sum(map(operator.mul, u, v), ZERO)


def vadd(u: Sequence, v: Sequence) -> Vec:
    return tuple(map(operator.add, u, v))


def vsub(u: Sequence, v: Sequence) -> Vec:
    return tuple(map(operator.sub, u, v))


def vneg(u: Sequence) -> Vec:
    return tuple(-x for x in u)


def vscale(c, u: Sequence) -> Vec:
    return tuple(c * x for x in u)


def norm_sq(u: Sequence) -> Rat:
    return dot(u, u)


def exact_sqrt(q) -> Rat | None:
    """Square root of a nonnegative rational, or ``None`` if it is irrational."""
    q = rat(q)
    if q < 0:
        raise ValueError("negative argument")
    num, den = gmpy2.mpz(q.numerator), gmpy2.mpz(q.denominator)
    if gmpy2.is_square(num) and gmpy2.is_square(den):
        return mpq(gmpy2.isqrt(num), gmpy2.isqrt(den))
    return None


def scaled_measure(value, factor_sq):
    """``value * sqrt(factor_sq)``, exact when the root is rational, float otherwise."""
    root = exact_sqrt(factor_sq)
    if root is not None:
        return rat(value) * root
    return float(value) * math.sqrt(float(factor_sq))


def primitive(v: Sequence) -> Vec:
    """Positive multiple of ``v`` with coprime integer entries."""
    den = reduce(gmpy2.lcm, (x.denominator for x in v), gmpy2.mpz(1))
    ints = [x.numerator * (den // x.denominator) for x in v]
    g = reduce(gmpy2.gcd, ints, gmpy2.mpz(0))
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(mpq(i // g) for i in ints)


# ---------------------------------------------------------------------------
# exact linear algebra


def _rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(_rref(rows, len(rows[0]))[1])


def null_space(rows: Sequence[Sequence], n: int) -> list[Vec]:
    if not rows:
        return [tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n)]
    red, piv = _rref(rows, n)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        x = [ZERO] * n
        x[f] = ONE
        for r, p in zip(red, piv):
            x[p] = -r[f]
        basis.append(tuple(x))
    return basis


def det(rows: Sequence[Sequence]) -> Rat:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        (a, b), (c, d) = rows
        return a * d - b * c
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    m = [list(r) for r in rows]
    sign = ONE
    acc = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return ZERO
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        acc *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return sign * acc


def solve(a: Sequence[Sequence], b: Sequence) -> Vec:
    n = len(a)
    red, piv = _rref([list(r) + [rat(v)] for r, v in zip(a, b)], n)
    if len(piv) < n:
        raise SingularMatrix("matrix is singular")
    return tuple(r[n] for r in red)


def matvec(a: Sequence[Sequence], x: Sequence) -> Vec:
    return tuple(dot(r, x) for r in a)


# ---------------------------------------------------------------------------
# halfspaces


class Halfspace(NamedTuple):
    """The closed set ``{x : normal . x <= offset}``."""

    normal: Vec
    offset: Rat

    def slack(self, x: Sequence) -> Rat:
        return self.offset - dot(self.normal, x)

    def contains(self, x: Sequence) -> bool:
        return dot(self.normal, x) <= self.offset

    def canonical(self) -> "Halfspace":
        a = vec(self.normal)
        p = primitive(a)
        k = next(i for i, x in enumerate(a) if x != 0)
        return Halfspace(p, rat(self.offset) * (p[k] / a[k]))

    def translated(self, x: Sequence) -> "Halfspace":
        return Halfspace(self.normal, self.offset + dot(self.normal, x))


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# ---------------------------------------------------------------------------
# the polytope type


@dataclass(frozen=True, eq=False)
class Polytope:
    """A full-dimensional convex polytope with both V- and H-representation.

    Do not build directly; use :func:`convex_hull` or
    :func:`halfspace_intersection`.  ``incidence[h]`` is the bitmask of vertex
    indices lying on facet ``h``.
    """

    vertices: tuple
    halfspaces: tuple
    incidence: tuple

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    @cached_property
    def vertex_facets(self) -> tuple:
        """Per vertex, the bitmask of facets containing it."""
        out = [0] * len(self.vertices)
        for h, mask in enumerate(self.incidence):
            for v in _bits(mask):
                out[v] |= 1 << h
        return tuple(out)

    @cached_property
    def volume(self) -> Rat:
        return _volume_from_incidence(self.vertices, self.incidence, self.dim)

    def contains(self, x: Sequence, strict: bool = False) -> bool:
        if strict:
            return all(dot(h.normal, x) < h.offset for h in self.halfspaces)
        return all(dot(h.normal, x) <= h.offset for h in self.halfspaces)

    def support(self, u: Sequence) -> Rat:
        return max(dot(u, v) for v in self.vertices)

    def bbox(self) -> tuple[Vec, Vec]:
        cols = list(zip(*self.vertices))
        return tuple(min(c) for c in cols), tuple(max(c) for c in cols)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polytope) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return (f"Polytope(dim={self.dim}, vertices={len(self.vertices)}, "
                f"facets={len(self.halfspaces)})")


def _assemble(vertices: Iterable[Sequence], halfspaces: Iterable[Halfspace]) -> Polytope:
    verts = tuple(sorted(set(vec(v) for v in vertices)))
    hs = tuple(sorted(set(Halfspace(vec(h.normal), rat(h.offset)).canonical() for h in halfspaces)))
    inc = []
    for h in hs:
        mask = 0
        for i, v in enumerate(verts):
            if dot(h.normal, v) == h.offset:
                mask |= 1 << i
        inc.append(mask)
    return Polytope(verts, hs, tuple(inc))


def _independent_subset(pts: Sequence[Vec], n: int) -> list[int]:
    """Indices of a maximal affinely independent subset (greedy, first point kept)."""
    chosen = [0]
    echelon: list[tuple[int, list]] = []
    p0 = pts[0]
    for i in range(1, len(pts)):
        r = list(vsub(pts[i], p0))
        for c, row in echelon:
            if r[c] != 0:
                f = r[c]
                r = [a - f * b for a, b in zip(r, row)]
        c = next((j for j in range(n) if r[j] != 0), None)
        if c is None:
            continue
        inv = 1 / r[c]
        echelon.append((c, [x * inv for x in r]))
        chosen.append(i)
        if len(chosen) == n + 1:
            break
    return chosen


def _hyperplane_through(points: Sequence[Vec], n: int) -> Vec:
    p0 = points[0]
    ns = null_space([vsub(p, p0) for p in points[1:]], n)
    if len(ns) != 1:
        raise DegenerateInput("points do not span a hyperplane")
    return ns[0]


def convex_hull(points: Iterable[Sequence]) -> Polytope:
    """Convex hull by exact beneath-beyond insertion.

    Raises :class:`DegenerateInput` if the points do not affinely span the
    ambient space; use :func:`flat_hull` for lower-dimensional sets.
    """
    pts = sorted(set(vec(p) for p in points))
    if not pts:
        raise DegenerateInput("no points")
    n = len(pts[0])
    if n == 1:
        lo, hi = pts[0][0], pts[-1][0]
        if lo == hi:
            raise DegenerateInput("segment has zero length")
        return _assemble([(lo,), (hi,)], [Halfspace((-ONE,), -lo), Halfspace((ONE,), hi)])
    base = _independent_subset(pts, n)
    if len(base) < n + 1:
        raise DegenerateInput(f"points span fewer than {n} dimensions")

    work = [pts[i] for i in base]
    inside = vscale(mpq(1, n + 1), reduce(vadd, work))
    facets: list[list] = []  # [normal, offset, on-mask over work]
    for omit in range(n + 1):
        others = [work[i] for i in range(n + 1) if i != omit]
        a = primitive(_hyperplane_through(others, n))
        b = dot(a, others[0])
        if dot(a, inside) > b:
            a, b = vneg(a), -b
        facets.append([a, b, ((1 << (n + 1)) - 1) ^ (1 << omit)])

    in_base = set(base)
    for idx, p in enumerate(pts):
        if idx in in_base:
            continue
        s = [dot(f[0], p) - f[1] for f in facets]
        vis = [i for i, si in enumerate(s) if si > 0]
        if not vis:
            continue
        k = len(work)
        work.append(p)
        pbit = 1 << k
        invis = [i for i, si in enumerate(s) if si <= 0]
        for j in invis:
            if s[j] == 0:
                facets[j][2] |= pbit
        created: dict[tuple, int] = {}
        for i in vis:
            fi = facets[i][2]
            for j in invis:
                ridge = fi & facets[j][2] & ~pbit
                if ridge.bit_count() < n - 1:
                    continue
                if any(h != i and h != j and (facets[h][2] & ridge) == ridge
                       for h in range(len(facets))):
                    continue
                if s[j] == 0:
                    continue  # p extends facet j itself
                rp = [work[b] for b in _bits(ridge)]
                a = primitive(_hyperplane_through([p] + rp, n))
                b = dot(a, p)
                if dot(a, inside) > b:
                    a, b = vneg(a), -b
                created[(a, b)] = created.get((a, b), 0) | ridge | pbit
        keep = [f for i, f in enumerate(facets) if s[i] <= 0]
        for (a, b), mask in created.items():
            for t, q in enumerate(work):
                if dot(a, q) == b:
                    mask |= 1 << t
            keep.append([a, b, mask])
        facets = keep

    full = (1 << len(work)) - 1
    vmask = [full] * len(work)
    touched = [False] * len(work)
    for a, b, on in facets:
        for t in _bits(on):
            vmask[t] &= on
            touched[t] = True
    verts = [work[t] for t in range(len(work)) if touched[t] and vmask[t] == 1 << t]
    return _assemble(verts, [Halfspace(a, b) for a, b, _ in facets])


def _recession_nontrivial(normals: Sequence[Vec], n: int) -> bool:
    """True unless the normals positively span R^n (origin interior to their hull)."""
    try:
        H = convex_hull(normals)
    except DegenerateInput:
        return True
    return not H.contains((ZERO,) * n, strict=True)


def _vertex_bound(hs: Sequence[Halfspace]) -> Rat:
    """Hadamard bound on the coordinates of any vertex of an integer-normal system."""
    norms = sorted((math.isqrt(int(math.ceil(float(norm_sq(h.normal) + h.offset * h.offset)))) + 1
                    for h in hs), reverse=True)
    n = len(hs[0].normal)
    return mpq(math.prod(norms[:n]) + 1)


def _box_clip(hs: Sequence[Halfspace], n: int):
    m = _vertex_bound(hs)
    B = box((-m,) * n, (m,) * n)
    return clip(B, [(h.normal, h.offset) for h in hs])


def halfspace_intersection(hs: Iterable[Halfspace], dim: int) -> Polytope:
    """Bounded full-dimensional intersection of halfspaces.

    Vertices are found by clipping a box large enough to contain every
    vertex of the system, so no interior point is needed in advance.
    """
    hs = sorted(set(Halfspace(vec(h.normal), rat(h.offset)).canonical() for h in hs))
    if any(len(h.normal) != dim for h in hs):
        raise ValueError("halfspace dimension mismatch")
    if not hs:
        raise Unbounded("no halfspaces")
    normals = [h.normal for h in hs]
    probe = list(hs)
    if rank(normals) < dim:
        # the set, if nonempty, contains a line; decide feasibility on a slice
        for d in null_space(normals, dim):
            d = primitive(d)
            probe += [Halfspace(d, ZERO), Halfspace(vneg(d), ZERO)]
        if rank([h.normal for h in probe]) < dim or _box_clip(probe, dim) != Degenerate.EMPTY:
            raise Unbounded("intersection contains a line")
        raise Empty("halfspaces are infeasible")
    res = _box_clip(hs, dim)
    if res == Degenerate.EMPTY:
        raise Empty("halfspaces are infeasible")
    if _recession_nontrivial(normals, dim):
        raise Unbounded("intersection has a recession direction")
    if res == Degenerate.LOWER_DIM:
        raise DegenerateInput("intersection is not full-dimensional")
    return res


def hull_or_degenerate(points: Iterable[Sequence]):
    try:
        return convex_hull(points)
    except DegenerateInput:
        return Degenerate.LOWER_DIM


# ---------------------------------------------------------------------------
# volumes via pulling triangulations


def _subfaces(mask: int, facet_masks: Sequence[int]) -> list[int]:
    cands = {mask & f for f in facet_masks}
    cands.discard(mask)
    return [c for c in cands if not any(c != d and (c & d) == c for d in cands)]


def _simplices(mask: int, d: int, facet_masks: Sequence[int]):
    if d == 1:
        b = _bits(mask)
        if len(b) != 2:
            raise GeometryError("edge with %d vertices" % len(b))
        yield (b[0], b[1])
        return
    apex_bit = mask & -mask
    apex = apex_bit.bit_length() - 1
    for sub in _subfaces(mask, facet_masks):
        if sub & apex_bit:
            continue
        for s in _simplices(sub, d - 1, facet_masks):
            yield (apex,) + s


def triangulate(vertices: Sequence[Vec], facet_masks: Sequence[int]) -> list[tuple]:
    """Pulling triangulation from the facet-vertex incidences."""
    n = len(vertices[0])
    full = (1 << len(vertices)) - 1
    if n == 1:
        return [(0, len(vertices) - 1)] if len(vertices) == 2 else []
    return list(_simplices(full, n, facet_masks))


def _simplex_det(vertices: Sequence[Vec], s: tuple) -> Rat:
    a = vertices[s[0]]
    return det([vsub(vertices[i], a) for i in s[1:]])


def _volume_from_incidence(vertices, facet_masks, n) -> Rat:
    if n == 1:
        return abs(vertices[-1][0] - vertices[0][0])
    total = sum((abs(_simplex_det(vertices, s)) for s in triangulate(vertices, facet_masks)), ZERO)
    return total / math.factorial(n)


def volume(P: Polytope) -> Rat:
    return P.volume


def centroid(P: Polytope) -> Vec:
    """Exact centroid (center of mass) of a full-dimensional polytope."""
    n = P.dim
    if n == 1:
        return (((P.vertices[0][0] + P.vertices[-1][0]) / 2),)
    acc = [ZERO] * n
    tot = ZERO
    for s in triangulate(P.vertices, P.incidence):
        w = abs(_simplex_det(P.vertices, s))
        tot += w
        for i in s:
            for c in range(n):
                acc[c] += w * P.vertices[i][c]
    return tuple(x / (tot * (n + 1)) for x in acc)


# ---------------------------------------------------------------------------
# clipping: incremental vertex enumeration under extra halfspaces


def _clip(verts: list, tights: list, cuts: Sequence[tuple], base: int, n: int):
    """Cut the polytope (verts, tights) by ``a.x <= b`` for each cut.

    ``tights[i]`` is the bitmask of constraint indices tight at vertex i;
    cut j gets index ``base + j``.  Returns ``(verts, tights, status)`` with
    status one of ``"full"``, ``"lower"``, ``"empty"``.
    """
    for j, (a, b) in enumerate(cuts):
        bit = 1 << (base + j)
        s = [dot(a, v) - b for v in verts]
        if all(x <= 0 for x in s):
            tights = [t | bit if x == 0 else t for t, x in zip(tights, s)]
            continue
        inn = [i for i, x in enumerate(s) if x < 0]
        if not inn:
            on = [i for i, x in enumerate(s) if x == 0]
            if not on:
                return [], [], "empty"
            return [verts[i] for i in on], [tights[i] | bit for i in on], "lower"
        out = [i for i, x in enumerate(s) if x > 0]
        nv, nt = [], []
        nverts = len(verts)
        for i in inn:
            ti = tights[i]
            for o in out:
                c = ti & tights[o]
                if c.bit_count() < n - 1:
                    continue
                if any(k != i and k != o and (tights[k] & c) == c for k in range(nverts)):
                    continue
                lam = s[i] / (s[i] - s[o])
                vi, vo = verts[i], verts[o]
                nv.append(tuple(x + lam * (y - x) for x, y in zip(vi, vo)))
                nt.append(c | bit)
        keep = [i for i, x in enumerate(s) if x <= 0]
        verts = [verts[i] for i in keep] + nv
        tights = [tights[i] | bit if s[i] == 0 else tights[i] for i in keep] + nt
    return verts, tights, "full"


def _facet_masks_from_tights(tights: Sequence[int], nconstraints: int, n: int) -> list[int]:
    by_c = [0] * nconstraints
    for i, t in enumerate(tights):
        for c in _bits(t):
            by_c[c] |= 1 << i
    masks = {m for m in by_c if m.bit_count() >= n}
    return [m for m in masks if not any(m != d and (m & d) == m for d in masks)]


def clip_volume(P: Polytope, cuts: Sequence[tuple]) -> Rat:
    """Volume of ``P`` intersected with the halfspaces ``a.x <= b`` in ``cuts``."""
    verts, tights, status = _clip(list(P.vertices), list(P.vertex_facets), cuts,
                                  len(P.halfspaces), P.dim)
    if status != "full":
        return ZERO
    masks = _facet_masks_from_tights(tights, len(P.halfspaces) + len(cuts), P.dim)
    return _volume_from_incidence(verts, masks, P.dim)


def clip(P: Polytope, cuts: Sequence[tuple]):
    """``P`` cut by halfspaces; a :class:`Polytope` or a :class:`Degenerate` flag."""
    verts, tights, status = _clip(list(P.vertices), list(P.vertex_facets), cuts,
                                  len(P.halfspaces), P.dim)
    if status == "empty":
        return Degenerate.EMPTY
    if status == "lower":
        return Degenerate.LOWER_DIM
    hs = list(P.halfspaces) + [Halfspace(a, b) for a, b in cuts]
    masks = _facet_masks_from_tights(tights, len(hs), P.dim)
    # keep one representative constraint per facet
    chosen = []
    by_c = {}
    for i, t in enumerate(tights):
        for c in _bits(t):
            by_c[c] = by_c.get(c, 0) | (1 << i)
    for m in masks:
        c = min(c for c, cm in by_c.items() if cm == m)
        chosen.append(hs[c])
    return _assemble(verts, chosen)


def intersect(P: Polytope, Q: Polytope):
    """``P`` intersected with ``Q``: a polytope, or ``Degenerate.EMPTY`` / ``LOWER_DIM``."""
    if P.dim != Q.dim:
        raise ValueError("dimension mismatch")
    return clip(P, [(h.normal, h.offset) for h in Q.halfspaces])


# ---------------------------------------------------------------------------
# transformations


def translate(P: Polytope, x: Sequence) -> Polytope:
    x = vec(x)
    verts = [vadd(v, x) for v in P.vertices]
    return _assemble(verts, [h.translated(x) for h in P.halfspaces])


def reflect(P: Polytope) -> Polytope:
    return _assemble([vneg(v) for v in P.vertices],
                     [Halfspace(vneg(h.normal), h.offset) for h in P.halfspaces])


def scale(P: Polytope, c) -> Polytope:
    c = rat(c)
    if c <= 0:
        raise ValueError("scale factor must be positive")
    return _assemble([vscale(c, v) for v in P.vertices],
                     [Halfspace(h.normal, c * h.offset) for h in P.halfspaces])


def affine_image(P: Polytope, a: Sequence[Sequence], b: Sequence | None = None) -> Polytope:
    a = [vec(r) for r in a]
    if det(a) == 0:
        raise SingularMatrix("affine map is not invertible")
    b = vec(b) if b is not None else (ZERO,) * P.dim
    return convex_hull(vadd(matvec(a, v), b) for v in P.vertices)


def project(P: Polytope, coords: Sequence[int]) -> Polytope:
    """Coordinate projection onto the listed axes."""
    return convex_hull(tuple(v[c] for c in coords) for v in P.vertices)


def minkowski_sum(P: Polytope, Q: Polytope) -> Polytope:
    if P.dim != Q.dim:
        raise ValueError("dimension mismatch")
    return convex_hull(vadd(p, q) for p in P.vertices for q in Q.vertices)


def box(lo: Sequence, hi: Sequence) -> Polytope:
    lo, hi = vec(lo), vec(hi)
    n = len(lo)
    hs = []
    for i in range(n):
        e = tuple(ONE if j == i else ZERO for j in range(n))
        hs += [Halfspace(e, hi[i]), Halfspace(vneg(e), -lo[i])]
    corners = [()]
    for i in range(n):
        corners = [c + (x,) for c in corners for x in (lo[i], hi[i])]
    return _assemble(corners, hs)


def simplex(n: int) -> Polytope:
    pts = [(ZERO,) * n] + [tuple(ONE if j == i else ZERO for j in range(n)) for i in range(n)]
    return convex_hull(pts)


# ---------------------------------------------------------------------------
# lower-dimensional sets


@dataclass(frozen=True)
class AffineChart:
    """Affine parametrization of a flat by a subset of ambient coordinates.

    A point of the flat is ``origin + sum(y[i] * basis[i])`` and its chart
    coordinates are ``y[i] = x[coords[i]] - origin[coords[i]]``.
    """

    origin: Vec
    coords: tuple
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.coords)

    def to_chart(self, x: Sequence) -> Vec:
        return tuple(x[c] - self.origin[c] for c in self.coords)

    def lift(self, y: Sequence) -> Vec:
        out = list(self.origin)
        for yi, b in zip(y, self.basis):
            for j, bj in enumerate(b):
                if bj:
                    out[j] += yi * bj
        return tuple(out)

    @cached_property
    def measure_sq(self) -> Rat:
        """Squared Jacobian: Hausdorff measure = chart measure * sqrt(this)."""
        gram = [[dot(u, v) for v in self.basis] for u in self.basis]
        return det(gram) if gram else ONE


def chart_for(points: Sequence[Sequence]) -> AffineChart:
    pts = [vec(p) for p in points]
    n = len(pts[0])
    idx = _independent_subset(pts, n)
    p0 = pts[idx[0]]
    diffs = [vsub(pts[i], p0) for i in idx[1:]]
    if not diffs:
        return AffineChart(p0, (), ())
    red, piv = _rref(diffs, n)
    return AffineChart(p0, tuple(piv), tuple(tuple(r) for r in red))


def chart_for_hyperplane(normal: Sequence, offset) -> AffineChart:
    a = vec(normal)
    n = len(a)
    k = max(range(n), key=lambda i: (abs(a[i]), -i))
    origin = tuple(rat(offset) / a[k] if i == k else ZERO for i in range(n))
    coords = tuple(i for i in range(n) if i != k)
    basis = []
    for c in coords:
        e = [ZERO] * n
        e[c] = ONE
        e[k] = -a[c] / a[k]
        basis.append(tuple(e))
    return AffineChart(origin, coords, tuple(basis))


@dataclass(frozen=True)
class FlatPolytope:
    """A polytope of any dimension k <= n, stored as a full-dimensional
    polytope in the coordinates of an :class:`AffineChart`."""

    chart: AffineChart
    body: Polytope | None  # None for a single point
    vertices: tuple

    @property
    def dim(self) -> int:
        return self.chart.dim

    def measure(self):
        """k-dimensional Hausdorff measure (exact if the Jacobian is rational)."""
        if self.body is None:
            return ONE
        return scaled_measure(self.body.volume, self.chart.measure_sq)

    def __eq__(self, other) -> bool:
        return isinstance(other, FlatPolytope) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)


def flat_hull(points: Iterable[Sequence], chart: AffineChart | None = None) -> FlatPolytope:
    """Convex hull of points that may span a lower-dimensional flat."""
    pts = sorted(set(vec(p) for p in points))
    if chart is None:
        chart = chart_for(pts)
    if chart.dim == 0:
        return FlatPolytope(chart, None, (pts[0],))
    body = convex_hull(chart.to_chart(p) for p in pts)
    verts = tuple(sorted(chart.lift(y) for y in body.vertices))
    return FlatPolytope(chart, body, verts)


def extreme_points(points: Iterable[Sequence]) -> tuple:
    return flat_hull(points).vertices


# ---------------------------------------------------------------------------
# JSON I/O


def polytope_to_json(P: Polytope, hrep: bool = False) -> dict:
    if hrep:
        return {"dim": P.dim, "halfspaces": [
            {"normal": fmt_vec(h.normal), "offset": fmt_rat(h.offset)} for h in P.halfspaces]}
    return {"dim": P.dim, "vertices": [fmt_vec(v) for v in P.vertices]}


def polytope_from_json(obj: dict) -> Polytope:
    dim = int(obj["dim"])
    if "vertices" in obj:
        P = convex_hull(vec(v) for v in obj["vertices"])
    elif "halfspaces" in obj:
        P = halfspace_intersection(
            [Halfspace(vec(h["normal"]), rat(h["offset"])) for h in obj["halfspaces"]], dim)
    else:
        raise ValueError("polytope JSON needs 'vertices' or 'halfspaces'")
    if P.dim != dim:
        raise ValueError(f"declared dim {dim} but coordinates have dim {P.dim}")
    return P


def load_polytope(path) -> Polytope:
    return polytope_from_json(json.loads(Path(path).read_text()))


def save_polytope(P: Polytope, path) -> None:
    Path(path).write_text(json.dumps(polytope_to_json(P)) + "\n")
