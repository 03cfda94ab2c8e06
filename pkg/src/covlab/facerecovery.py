"""Face information carried by the covariogram of a polytope.

* :func:`singular_part` evaluates the parallel-facet part of the second
  directional derivative of ``g_P`` (exact).
* :class:`ParallelFacetData` gives the planar covariograms of the
  projections of the two faces exposed by ``w`` and ``-w``.
* :func:`verify_second_derivative` checks the weak form of the second
  derivative against a polynomial bump test function (floating point).
* :func:`classify_antipodal` reads the dimensions of ``P_w`` and ``P_{-w}``
  off the decay rate of ``g_P`` near the boundary of the difference body.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np
from gmpy2 import mpq

from .covariogram import _project_chart, cov, cross_cov
from .exactgeom import (
    ZERO, DegenerateInput, GeometryError, Polytope, Rat, Vec,
    convex_hull, dot, exact_sqrt, norm_sq, rank, vec, vneg, vscale, vsub,
)
from .faces import Face, difference_body, exposed_face


class QuadratureTooCoarse(ArithmeticError):
    pass


class ExponentFitAmbiguous(ValueError):
    pass


class ClassificationMismatch(GeometryError):
    pass


# ---------------------------------------------------------------------------
# exact singular part


def _dropped_coord(a: Sequence) -> int:
    return max(range(len(a)), key=lambda i: (abs(a[i]), -i))


@lru_cache(maxsize=256)
def _facet_data(P: Polytope) -> tuple:
    """Per facet: (dropped coordinate, kept coordinates, facet in chart coordinates)."""
    out = []
    for h, mask in zip(P.halfspaces, P.incidence):
        k = _dropped_coord(h.normal)
        coords = tuple(i for i in range(P.dim) if i != k)
        pts = [tuple(P.vertices[v][c] for c in coords)
               for v in range(len(P.vertices)) if mask >> v & 1]
        out.append((k, coords, convex_hull(pts)))
    return tuple(out)


@lru_cache(maxsize=256)
def parallel_pairs(P: Polytope) -> tuple:
    """Ordered pairs (i, j, s) of facets with normal_j = s * normal_i (i == j included)."""
    hs = P.halfspaces
    out = []
    for i, hi in enumerate(hs):
        for j, hj in enumerate(hs):
            if hj.normal == hi.normal:
                out.append((i, j, 1))
            elif hj.normal == vneg(hi.normal):
                out.append((i, j, -1))
    return tuple(out)


def _combine(groups: dict):
    """Sum of q * sqrt(f) over {f: q}; exact when every root is rational."""
    exact = ZERO
    inexact = 0.0
    use_float = False
    for fsq, q in groups.items():
        if q == 0:
            continue
        root = exact_sqrt(fsq)
        if root is None:
            use_float = True
            inexact += float(q) * math.sqrt(float(fsq))
        else:
            exact += q * root
    return float(exact) + inexact if use_float else exact


def singular_part(P: Polytope, w: Sequence, x: Sequence):
    """Parallel-facet term of the second derivative of ``g_P`` along ``w/|w|``.

    Sum over ordered pairs of parallel facets (i, j), including i == j, of
    ``(u.n_i)(u.n_j) * area(F_i and F_j + x)`` with ``u`` the unit vector along
    ``w`` and ``n_i`` unit outer normals.  Exact whenever the facet-plane
    area factors are rational (e.g. axis-parallel facets).
    """
    w, x = vec(w), vec(x)
    nw = norm_sq(w)
    hs = P.halfspaces
    data = _facet_data(P)
    groups: dict = {}
    for i, j, s in parallel_pairs(P):
        a, bi = hs[i]
        wi = dot(w, a)
        if wi == 0:
            continue
        if s * hs[j].offset + dot(a, x) != bi:
            continue  # F_j + x is not in the plane of F_i
        k, coords, Fi = data[i]
        _, _, Fj = data[j]
        area = cross_cov(Fi, Fj, tuple(x[c] for c in coords))
        if area == 0:
            continue
        na = norm_sq(a)
        coef = s * wi * wi / (nw * na)
        fsq = na / (a[k] * a[k])
        groups[fsq] = groups.get(fsq, ZERO) + coef * area
    return _combine(groups)


# ---------------------------------------------------------------------------
# planar data of the antipodal faces


@dataclass(frozen=True)
class ParallelFacetData:
    """Projections F0, G0 of ``P_w`` and ``P_{-w}`` onto the hyperplane orthogonal to ``w``.

    Both are stored in the coordinate chart that drops the coordinate where
    ``|w|`` is largest; ``None`` when the projection is lower-dimensional.
    """

    w: Vec
    coords: tuple
    F0: Polytope | None
    G0: Polytope | None
    F_dim: int
    G_dim: int
    factor_sq: Rat   # squared area stretch of the chart
    gap: Rat         # (h(w) + h(-w)) / |w|^2

    def chart(self, x: Sequence) -> Vec:
        x = vec(x)
        if len(x) == len(self.w):
            if dot(self.w, x) != 0:
                raise ValueError("x must be orthogonal to w")
            return tuple(x[c] for c in self.coords)
        if len(x) != len(self.coords):
            raise ValueError("x has the wrong length")
        return x

    def _scaled(self, q):
        return _combine({self.factor_sq: q})

    def sum_field(self, x: Sequence):
        """``g_{F0}(x) + g_{G0}(x)`` for ``x`` orthogonal to ``w``."""
        xc = self.chart(x)
        total = ZERO
        for Q in (self.F0, self.G0):
            if Q is not None:
                total += cov(Q, xc)
        return self._scaled(total)

    def cross_field(self, x: Sequence):
        """``g_{F0,G0}(x)`` for ``x`` orthogonal to ``w``."""
        xc = self.chart(x)
        if self.F0 is None or self.G0 is None:
            return ZERO
        return self._scaled(cross_cov(self.F0, self.G0, xc))


def _chart_hull(w: Vec, face: Face):
    pts = [_project_chart(w, v) for v in face.vertices]
    try:
        return convex_hull(pts)
    except DegenerateInput:
        return None


def parallel_facet_data(P: Polytope, w: Sequence) -> ParallelFacetData:
    w = vec(w)
    if all(c == 0 for c in w):
        raise ValueError("w must be nonzero")
    F, G = exposed_face(P, w), exposed_face(P, vneg(w))
    k = _dropped_coord(w)
    coords = tuple(i for i in range(P.dim) if i != k)
    nw = norm_sq(w)
    return ParallelFacetData(
        w, coords, _chart_hull(w, F), _chart_hull(w, G), F.dim, G.dim,
        nw / (w[k] * w[k]), (P.support(w) + P.support(vneg(w))) / nw)


def singular_sum_restriction(P: Polytope, w: Sequence, x: Sequence):
    """Singular part at ``x`` orthogonal to ``w``; equals ``g_{F0}+g_{G0}`` there
    away from a measure-zero set."""
    return singular_part(P, w, x)


def singular_cross_restriction(P: Polytope, w: Sequence, x: Sequence):
    """Minus the singular part on the far plane ``x + gap * w``; equals ``g_{F0,G0}(x)``."""
    w = vec(w)
    gap = (P.support(w) + P.support(vneg(w))) / norm_sq(w)
    z = tuple(a + gap * b for a, b in zip(vec(x), w))
    val = singular_part(P, w, z)
    return -val


# ---------------------------------------------------------------------------
# weak second derivative (floating point)


def bump(points: np.ndarray, center: np.ndarray, radius: float) -> np.ndarray:
    """Test function (1 - |(x - c)/r|^2)^4 where positive, else 0."""
    u = (points - center) / radius
    s = np.clip(1.0 - np.einsum("...i,...i->...", u, u), 0.0, None)
    return s ** 4


def bump_second_derivative(points: np.ndarray, center: np.ndarray, radius: float,
                           unit_w: np.ndarray) -> np.ndarray:
    u = (points - center) / radius
    s = np.clip(1.0 - np.einsum("...i,...i->...", u, u), 0.0, None)
    uw = u @ unit_w
    return (48.0 * s ** 2 * uw ** 2 - 8.0 * s ** 3) / radius ** 2


class _FloatBody:
    """Vectorized float geometry of ``P`` intersected with ``P + z`` for many z."""

    def __init__(self, P: Polytope):
        if P.dim != 3:
            raise ValueError("quadrature check implemented for dimension 3")
        self.A = np.array([[float(c) for c in h.normal] for h in P.halfspaces])
        self.b = np.array([float(h.offset) for h in P.halfspaces])
        self.norms = np.linalg.norm(self.A, axis=1)
        self.units = self.A / self.norms[:, None]
        self.m = len(self.b)
        scale = max(1.0, float(np.abs(self.b).max()))
        self.tol = 1e-9 * scale
        self.triples = []
        invs = []
        for t in combinations(range(self.m), 3):
            M = self.A[list(t)]
            if abs(np.linalg.det(M)) > 1e-12:
                self.triples.append(t)
                invs.append(np.linalg.inv(M))
        self.inv = np.array(invs)
        self.tidx = np.array(self.triples)
        self.by_facet = [[n for n, t in enumerate(self.triples) if i in t] for i in range(self.m)]
        self.frames = []
        for i in range(self.m):
            nrm = self.units[i]
            seed = np.eye(3)[int(np.argmin(np.abs(nrm)))]
            e1 = seed - nrm * (seed @ nrm)
            e1 /= np.linalg.norm(e1)
            self.frames.append((e1, np.cross(nrm, e1)))

    def offsets(self, z: np.ndarray) -> np.ndarray:
        """Offsets of the overlap P and P + z; shape (m, N)."""
        return self.b[:, None] + np.minimum(0.0, self.A @ z.T)

    def vertices(self, offs: np.ndarray):
        rhs = offs[self.tidx]                      # (T, 3, N)
        verts = np.einsum("tij,tjn->tni", self.inv, rhs)  # (T, N, 3)
        slack = np.einsum("mi,tni->tmn", self.A, verts) - offs[None]
        feasible = (slack <= self.tol).all(axis=1)        # (T, N)
        return verts, feasible

    def facet_area(self, i: int, verts: np.ndarray, feasible: np.ndarray) -> np.ndarray:
        ids = self.by_facet[i]
        if len(ids) < 3:
            return np.zeros(verts.shape[1])
        pts = verts[ids]                # (k, N, 3)
        ok = feasible[ids]              # (k, N)
        e1, e2 = self.frames[i]
        x = pts @ e1
        y = pts @ e2
        count = ok.sum(axis=0)
        safe = np.maximum(count, 1)
        mx = (x * ok).sum(axis=0) / safe
        my = (y * ok).sum(axis=0) / safe
        first = np.argmax(ok, axis=0)
        cols = np.arange(x.shape[1])
        x = np.where(ok, x, x[first, cols]) - mx
        y = np.where(ok, y, y[first, cols]) - my
        order = np.argsort(np.arctan2(y, x), axis=0, kind="stable")
        x = np.take_along_axis(x, order, axis=0)
        y = np.take_along_axis(y, order, axis=0)
        xn, yn = np.roll(x, -1, axis=0), np.roll(y, -1, axis=0)
        area = 0.5 * np.abs((x * yn - xn * y).sum(axis=0))
        return np.where(count >= 3, area, 0.0)

    def overlap_volume(self, z: np.ndarray) -> np.ndarray:
        offs = self.offsets(z)
        verts, feasible = self.vertices(offs)
        vol = np.zeros(z.shape[0])
        for i in range(self.m):
            vol += offs[i] / self.norms[i] * self.facet_area(i, verts, feasible)
        return vol / 3.0

    def overlap_facet_area(self, i: int, z: np.ndarray) -> np.ndarray:
        offs = self.offsets(z)
        verts, feasible = self.vertices(offs)
        return self.facet_area(i, verts, feasible)

    def pair_segment_length(self, i: int, j: int, z: np.ndarray) -> np.ndarray:
        """Length of F_i intersected with F_j + z for non-parallel facets."""
        ai, aj = self.A[i], self.A[j]
        d = np.cross(ai, aj)
        M = np.linalg.inv(np.array([ai, aj, d]))
        offs = self.offsets(z)
        rhs = np.stack([np.full(z.shape[0], self.b[i]), self.b[j] + z @ aj,
                        np.zeros(z.shape[0])])
        p = (M @ rhs).T                                   # (N, 3)
        ad = self.A @ d                                   # (m,)
        room = offs - self.A @ p.T                        # (m, N)
        tol = self.tol
        lo = np.full(z.shape[0], -np.inf)
        hi = np.full(z.shape[0], np.inf)
        ok = np.ones(z.shape[0], dtype=bool)
        for k in range(self.m):
            if ad[k] > tol:
                hi = np.minimum(hi, room[k] / ad[k])
            elif ad[k] < -tol:
                lo = np.maximum(lo, room[k] / ad[k])
            else:
                ok &= room[k] >= -tol
        length = np.clip(hi - lo, 0.0, None) * np.linalg.norm(d)
        return np.where(ok, length, 0.0)


def _midpoints(center: np.ndarray, radius: float, n: int, dims: int) -> tuple[np.ndarray, float]:
    h = 2.0 * radius / n
    ax = -radius + h * (np.arange(n) + 0.5)
    mesh = np.stack(np.meshgrid(*([ax] * dims), indexing="ij"), axis=-1).reshape(-1, dims)
    return mesh, h


def _weak_sides(body: _FloatBody, unit_w: np.ndarray, center: np.ndarray, radius: float,
                n: int, pairs: Sequence, chunk: int = 1 << 15) -> tuple[float, float]:
    offsets, h = _midpoints(np.zeros(3), radius, n, 3)
    cell = h ** 3
    wn = body.units @ unit_w
    nonpar = [(i, j, wn[i] * wn[j] / math.sqrt(max(1e-300, 1.0 - (body.units[i] @ body.units[j]) ** 2)))
              for i in range(body.m) for j in range(body.m)
              if abs(wn[i]) > 1e-15 and abs(wn[j]) > 1e-15
              and np.linalg.norm(np.cross(body.units[i], body.units[j])) > 1e-12]
    lhs = 0.0
    line = 0.0
    for start in range(0, offsets.shape[0], chunk):
        z = offsets[start:start + chunk] + center
        d2 = bump_second_derivative(z, center, radius, unit_w)
        live = np.abs(d2) > 0
        if live.any():
            zl = z[live]
            lhs -= float(np.sum(body.overlap_volume(zl) * d2[live])) * cell
        phi = bump(z, center, radius)
        live = phi > 0
        if live.any() and nonpar:
            zl = z[live]
            acc = np.zeros(zl.shape[0])
            for i, j, c in nonpar:
                acc += c * body.pair_segment_length(i, j, zl)
            line += float(np.sum(acc * phi[live])) * cell
    surf = 0.0
    flat, h2 = _midpoints(np.zeros(2), radius, n, 2)
    for i, j, s in pairs:
        c = s * wn[i] * wn[i]
        if abs(c) < 1e-15:
            continue
        nrm = body.units[i]
        level = (body.b[i] - s * body.b[j]) / body.norms[i]   # plane nrm . z = level
        e1, e2 = body.frames[i]
        base = center + (level - center @ nrm) * nrm
        z = base + flat[:, :1] * e1 + flat[:, 1:] * e2
        phi = bump(z, center, radius)
        live = phi > 0
        if not live.any():
            continue
        area = body.overlap_facet_area(i, z[live])
        surf += c * float(np.sum(area * phi[live])) * h2 * h2
    return lhs, line + surf


@dataclass(frozen=True)
class SecondDerivativeReport:
    residual: float
    residual_coarse: float
    lhs: float
    rhs: float
    lhs_coarse: float
    rhs_coarse: float
    resolution: int


def _relative(lhs: float, rhs: float) -> float:
    if abs(lhs) < 1e-14 and abs(rhs) < 1e-14:
        return 0.0
    return float(abs(lhs - rhs) / max(abs(lhs), 1e-300))


def verify_second_derivative(P: Polytope, w: Sequence, center: Sequence | None = None,
                             radius: float | None = None, resolution: int = 64,
                             strict: bool = True) -> SecondDerivativeReport:
    """Weak second-derivative identity for ``g_P`` against a bump test function.

    Left side: minus the integral of ``g_P`` times the second derivative of
    the bump along ``w``.  Right side: the line-integral sum over
    non-parallel facet pairs plus the surface-integral sum over parallel
    pairs.  Both are midpoint-rule quadratures at ``resolution`` nodes per
    axis; the run is repeated at half resolution and
    :class:`QuadratureTooCoarse` is raised (``strict``) if either side moves
    by more than 10%.
    """
    body = _FloatBody(P)
    wf = np.array([float(c) for c in vec(w)])
    unit_w = wf / np.linalg.norm(wf)
    if center is None:
        center = np.zeros(3)
    else:
        center = np.array([float(c) for c in vec(center)])
    if radius is None:
        lo, hi = difference_body(P).bbox()
        radius = 1.1 * max(float(c) for c in hi)
    pairs = parallel_pairs(P)
    lhs, rhs = _weak_sides(body, unit_w, center, radius, resolution, pairs)
    lhs_c, rhs_c = _weak_sides(body, unit_w, center, radius, resolution // 2, pairs)
    if strict:
        for fine, coarse in ((lhs, lhs_c), (rhs, rhs_c)):
            if abs(fine - coarse) > 0.1 * max(abs(fine), 1e-14) and abs(fine) > 1e-14:
                raise QuadratureTooCoarse(
                    f"refinement moved the integral from {coarse:.6g} to {fine:.6g}")
    return SecondDerivativeReport(_relative(lhs, rhs), _relative(lhs_c, rhs_c), float(lhs),
                                  float(rhs), float(lhs_c), float(rhs_c), resolution)


# ---------------------------------------------------------------------------
# antipodal face classification


@dataclass(frozen=True)
class AntipodalCase:
    case_id: int
    leading_exponent: int
    dim_DPw: int
    sum_vanishes: bool
    constant: float = 0.0
    slopes: tuple = field(default=(), compare=False)


# expected leading exponent per case
CASE_EXPONENT = {1: 1, 2: 2, 3: 3, 4: 2, 5: 3, 6: 3, 7: 3}


def case_from_dimensions(dim_F: int, dim_G: int, dim_DPw: int) -> int:
    a, b = max(dim_F, dim_G), min(dim_F, dim_G)
    table = {(2, 2): 1, (2, 1): 2, (2, 0): 3, (1, 0): 6, (0, 0): 7}
    if (a, b) == (1, 1):
        return 4 if dim_DPw == 1 else 5
    return table[(a, b)]


def case_from_signature(exponent: int, dim_DPw: int, sum_vanishes: bool) -> int:
    if dim_DPw == 2:
        if exponent == 1:
            return 1
        if exponent == 2:
            return 2
        if exponent == 3:
            return 5 if sum_vanishes else 3
    elif dim_DPw == 1:
        if exponent == 2:
            return 4
        if exponent == 3:
            return 6
    elif dim_DPw == 0 and exponent == 3:
        return 7
    raise ClassificationMismatch(
        f"no case with exponent {exponent}, face dimension {dim_DPw}, sum vanishing {sum_vanishes}")


def fit_exponent(values: Sequence[Rat], tol: float = 0.1) -> tuple[int, tuple]:
    """Leading exponent from values at eps, eps/2, eps/4, ...

    Consecutive log2 ratios are the local slopes; the last two must round
    to the same integer within ``tol``.
    """
    slopes = tuple(math.log2(float(a / b)) for a, b in zip(values, values[1:]))
    k = round(slopes[-1])
    if abs(slopes[-1] - k) > tol or abs(slopes[-2] - k) > tol:
        raise ExponentFitAmbiguous(f"slopes {slopes[-2]:.4f}, {slopes[-1]:.4f} do not settle")
    return k, slopes


def classify_antipodal(P: Polytope, w: Sequence, finest: int = 10) -> AntipodalCase:
    """Which of the seven face-pair configurations ``(P_w, P_{-w})`` is in.

    ``g_P`` is evaluated exactly at ``(1 - eps) p0`` for ``eps = 2^-4 ... 2^-finest``,
    where ``p0`` is the vertex-average point of the exposed face of the
    difference body; the decay exponent, the dimension of that face and
    whether the planar sum ``g_{F0} + g_{G0}`` vanishes pin down the case,
    which is then cross-checked against the face dimensions.
    """
    if P.dim != 3:
        raise ValueError("classification is for 3-polytopes")
    w = vec(w)
    F, G = exposed_face(P, w), exposed_face(P, vneg(w))
    p0 = vsub(F.relint_point, G.relint_point)
    eps = [mpq(1, 2 ** e) for e in range(4, finest + 1)]
    values = [cov(P, vscale(1 - e, p0)) for e in eps]
    if any(v <= 0 for v in values):
        raise ExponentFitAmbiguous("covariogram vanished along the probe ray")
    k, slopes = fit_exponent(values)
    sums = [vsub(a, b) for a in F.vertices for b in G.vertices]
    dim_dpw = rank([vsub(s, sums[0]) for s in sums[1:]]) if len(sums) > 1 else 0
    data = parallel_facet_data(P, w)
    sum_vanishes = data.sum_field((ZERO,) * P.dim) == 0
    case = case_from_signature(k, dim_dpw, sum_vanishes)
    direct = case_from_dimensions(F.dim, G.dim, dim_dpw)
    if case != direct:
        raise ClassificationMismatch(f"decay gives case {case}, face dimensions give {direct}")
    const = float(values[-1] / eps[-1] ** k)
    return AntipodalCase(case, k, dim_dpw, sum_vanishes, const, slopes)


# ---------------------------------------------------------------------------
# the planar system


def system_cov_report(F: Polytope, G: Polytope, Fp: Polytope, Gp: Polytope,
                      probes: Sequence) -> tuple[bool, bool]:
    """(sum equation holds, cross equation holds) at every probe, exactly."""
    sum_ok = all(cov(F, x) + cov(G, x) == cov(Fp, x) + cov(Gp, x) for x in probes)
    cross_ok = all(cross_cov(F, G, x) == cross_cov(Fp, Gp, x) for x in probes)
    return sum_ok, cross_ok


def system_cov_check(F: Polytope, G: Polytope, Fp: Polytope, Gp: Polytope,
                     probes: Sequence) -> bool:
    """Both ``g_F + g_G = g_F' + g_G'`` and ``g_{F,G} = g_{F',G'}`` at all probes."""
    return all(system_cov_report(F, G, Fp, Gp, probes))
