"""Covariograms, cross covariograms, sampled fields and chord functionals.

``cov(K, x)`` is the volume of ``K`` intersected with ``K + x``;
``cross_cov(K, L, x)`` the volume of ``K`` intersected with ``L + x``.
Both are evaluated exactly by clipping ``K`` with the translated
halfspaces.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from functools import partial
from itertools import product
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from gmpy2 import mpq

from .exactgeom import (
    ZERO, Degenerate, Polytope, Rat, Vec, chart_for_hyperplane, clip, clip_volume,
    convex_hull, DegenerateInput, dot, fmt_rat, minkowski_sum, norm_sq, rat, reflect,
    scaled_measure, vadd, vec, vneg, vscale, vsub,
)
from .faces import difference_body, direct_sum
from .parallel import pmap
from .rng import SplitMix64


class RAtKink(ValueError):
    """The probe radius sits on (or too close to) a breakpoint of the
    piecewise-polynomial structure; perturb ``r``."""


# ---------------------------------------------------------------------------
# exact evaluation


def _translated_cuts(L: Polytope, x: Vec, skip_redundant_for: Polytope | None = None):
    cuts = []
    for h in L.halfspaces:
        s = dot(h.normal, x)
        if skip_redundant_for is not None and s >= 0:
            continue  # K lies in {a.y <= b} which is inside {a.y <= b + a.x}
        cuts.append((h.normal, h.offset + s))
    return cuts


def cov(K: Polytope, x: Sequence) -> Rat:
    """Covariogram of ``K`` at ``x``: volume of K and K + x overlapping."""
    x = vec(x)
    if len(x) != K.dim:
        raise ValueError("dimension mismatch")
    cuts = _translated_cuts(K, x, skip_redundant_for=K)
    if not cuts:
        return K.volume
    return clip_volume(K, cuts)


def cross_cov(K: Polytope, L: Polytope, x: Sequence) -> Rat:
    """Cross covariogram: volume of ``K`` intersected with ``L + x``."""
    x = vec(x)
    if len(x) != K.dim or L.dim != K.dim:
        raise ValueError("dimension mismatch")
    if L is K or L == K:
        return cov(K, x)
    return clip_volume(K, _translated_cuts(L, x))


def overlap(K: Polytope, L: Polytope, x: Sequence):
    """``K`` intersected with ``L + x`` as a polytope or a :class:`Degenerate` flag."""
    return clip(K, _translated_cuts(L, vec(x)))


def difference_box(K: Polytope, L: Polytope | None = None) -> tuple[Vec, Vec]:
    """Bounding box of K + (-L) (of the difference body when L is None)."""
    L = K if L is None else L
    klo, khi = K.bbox()
    llo, lhi = L.bbox()
    return vsub(klo, lhi), vsub(khi, llo)


# ---------------------------------------------------------------------------
# sampled fields


def grid_nodes(lo: Sequence, hi: Sequence, res) -> list[Vec]:
    lo, hi = vec(lo), vec(hi)
    n = len(lo)
    res = (res,) * n if isinstance(res, int) else tuple(res)
    if any(r < 2 for r in res):
        raise ValueError("resolution must be at least 2 per axis")
    axes = [[lo[i] + (hi[i] - lo[i]) * mpq(k, res[i] - 1) for k in range(res[i])]
            for i in range(n)]
    return [tuple(p) for p in product(*axes)]


@dataclass(frozen=True)
class ScalarField:
    """Exact samples on a regular grid (C order: last axis varies fastest)."""

    lo: Vec
    hi: Vec
    res: tuple
    values: tuple

    @property
    def dim(self) -> int:
        return len(self.lo)

    def nodes(self) -> list[Vec]:
        return grid_nodes(self.lo, self.hi, self.res)

    def cell_volume(self) -> Rat:
        v = mpq(1)
        for a, b, r in zip(self.lo, self.hi, self.res):
            v *= (b - a) / (r - 1)
        return v

    def as_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.values]).reshape(self.res)

    def max_abs_diff(self, other: "ScalarField") -> Rat:
        if (self.lo, self.hi, self.res) != (other.lo, other.hi, other.res):
            raise ValueError("fields live on different grids")
        return max(abs(a - b) for a, b in zip(self.values, other.values))

    def to_csv(self, path, as_float: bool = False) -> None:
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([f"x{i + 1}" for i in range(self.dim)] + ["value"])
            for node, val in zip(self.nodes(), self.values):
                row = list(node) + [val]
                w.writerow([_fmt(q, as_float) for q in row])
        sidecar = {"dim": self.dim, "lo": [fmt_rat(q) for q in self.lo],
                   "hi": [fmt_rat(q) for q in self.hi], "res": list(self.res)}
        path.with_suffix(path.suffix + ".json").write_text(json.dumps(sidecar) + "\n")

    @classmethod
    def from_csv(cls, path) -> "ScalarField":
        path = Path(path)
        meta = json.loads(path.with_suffix(path.suffix + ".json").read_text())
        with path.open() as fh:
            rows = list(csv.reader(fh))[1:]
        values = tuple(rat(r[-1]) for r in rows)
        return cls(vec(meta["lo"]), vec(meta["hi"]), tuple(meta["res"]), values)


def _fmt(q, as_float: bool) -> str:
    if as_float:
        return format(float(q), ".17g")
    return fmt_rat(q)


def cov_grid(K: Polytope, res) -> ScalarField:
    lo, hi = difference_box(K)
    nodes = grid_nodes(lo, hi, res)
    res = tuple(res) if not isinstance(res, int) else (res,) * K.dim
    return ScalarField(lo, hi, res, tuple(pmap(partial(cov, K), nodes)))


def cross_cov_grid(K: Polytope, L: Polytope, res) -> ScalarField:
    lo, hi = difference_box(K, L)
    nodes = grid_nodes(lo, hi, res)
    res = tuple(res) if not isinstance(res, int) else (res,) * K.dim
    return ScalarField(lo, hi, res, tuple(pmap(partial(cross_cov, K, L), nodes)))


# ---------------------------------------------------------------------------
# identities


def random_probes(rng: SplitMix64, lo: Sequence, hi: Sequence, count: int,
                  den: int = 1 << 20) -> list[Vec]:
    return [tuple(rng.rational(a, b, den) for a, b in zip(lo, hi)) for _ in range(count)]


def equal_on_probes(f: Callable, g: Callable, probes: Sequence) -> tuple[bool, Vec | None]:
    """Exact comparison; returns (all equal, first counterexample)."""
    for x in probes:
        if f(x) != g(x):
            return False, x
    return True, None


def support_identity_check(K: Polytope, L: Polytope | None = None, trials: int = 100,
                           rng: SplitMix64 | None = None) -> bool:
    """Positivity of the (cross) covariogram matches the interior of K + (-L).

    Random points of an enlarged bounding box are tested, and the relative
    interior point of every facet of K + (-L) must give exactly zero.
    """
    rng = rng or SplitMix64(0)
    if L is None:
        D, g = difference_body(K), partial(cov, K)
    else:
        D, g = minkowski_sum(K, reflect(L)), partial(cross_cov, K, L)
    lo, hi = D.bbox()
    pad = vscale(mpq(1, 4), vsub(hi, lo))
    for x in random_probes(rng, vsub(lo, pad), vadd(hi, pad), trials):
        if (g(x) > 0) != D.contains(x, strict=True):
            return False
    for mask in D.incidence:
        ids = [i for i in range(len(D.vertices)) if mask >> i & 1]
        p = vscale(mpq(1, len(ids)), _vsum(D.vertices[i] for i in ids))
        if g(p) != 0:
            return False
    return True


def _vsum(vs) -> Vec:
    vs = list(vs)
    acc = vs[0]
    for v in vs[1:]:
        acc = vadd(acc, v)
    return acc


def product_factorization_check(K: Polytope, L: Polytope, res: int = 5) -> Rat:
    """Max |g_{KxL} - g_K g_L| over a grid covering D(KxL); exactly zero in theory."""
    n1 = K.dim
    P = direct_sum([(K, tuple(range(n1))), (L, tuple(range(n1, n1 + L.dim)))])
    lo, hi = difference_box(P)
    worst = ZERO
    for x in grid_nodes(lo, hi, res):
        r = abs(cov(P, x) - cov(K, x[:n1]) * cov(L, x[n1:]))
        worst = max(worst, r)
    return worst


# ---------------------------------------------------------------------------
# chords and X-rays


def line_point(u: Sequence, y: Sequence) -> Vec:
    """Base point of the line ``y + R u``.

    ``y`` is either an ambient point or ``n-1`` coordinates on the
    hyperplane orthogonal to ``u`` (the coordinate where ``|u|`` is largest is
    dropped and solved for).
    """
    u, y = vec(u), vec(y)
    if len(y) == len(u):
        return y
    if len(y) == len(u) - 1:
        return chart_for_hyperplane(u, 0).lift(y)
    raise ValueError("offset has the wrong length")


def line_interval(halfspaces, p: Vec, d: Vec):
    """Parameter interval of ``{p + t d}`` inside the halfspaces.

    Returns ``None`` when empty, else ``(tlo, thi)`` with ``None`` marking an
    unbounded end.
    """
    tlo = thi = None
    for h in halfspaces:
        a, b = h
        ad = dot(a, d)
        rhs = b - dot(a, p)
        if ad == 0:
            if rhs < 0:
                return None
        elif ad > 0:
            t = rhs / ad
            thi = t if thi is None else min(thi, t)
        else:
            t = rhs / ad
            tlo = t if tlo is None else max(tlo, t)
    if tlo is not None and thi is not None and tlo > thi:
        return None
    return tlo, thi


def xray_body(K: Polytope, u: Sequence, y: Sequence):
    """Length of the chord of ``K`` on the line ``y + R u``."""
    u = vec(u)
    if all(c == 0 for c in u):
        raise ValueError("u must be nonzero")
    iv = line_interval(K.halfspaces, line_point(u, y), u)
    if iv is None:
        return ZERO
    tlo, thi = iv
    return scaled_measure(thi - tlo, norm_sq(u))


@dataclass(frozen=True)
class ChordDistribution:
    direction: Vec
    samples: tuple  # (chart coordinates in the orthogonal hyperplane, length)


def _project_chart(u: Vec, v: Vec) -> Vec:
    """Chart coordinates of the orthogonal projection of ``v`` onto u-perp."""
    chart = chart_for_hyperplane(u, 0)
    pv = vsub(v, vscale(dot(u, v) / norm_sq(u), u))
    return chart.to_chart(pv)


def chord_distribution(K: Polytope, u: Sequence, res: int = 9) -> ChordDistribution:
    u = vec(u)
    pts = [_project_chart(u, v) for v in K.vertices]
    lo = tuple(min(c) for c in zip(*pts))
    hi = tuple(max(c) for c in zip(*pts))
    samples = tuple((y, xray_body(K, u, y)) for y in grid_nodes(lo, hi, res))
    return ChordDistribution(u, samples)


def chord_tail_measure(K: Polytope, u: Sequence, r) -> Rat:
    """Measure of the set of lines parallel to ``u`` whose chord exceeds ``r |u|``.

    Equals the measure of the projection of K and K + r u overlapping onto
    the hyperplane orthogonal to ``u``; always rational.
    """
    u, r = vec(u), rat(r)
    inter = overlap(K, K, vscale(r, u))
    if isinstance(inter, Degenerate):
        return ZERO
    try:
        shadow = convex_hull(_project_chart(u, v) for v in inter.vertices)
    except DegenerateInput:
        return ZERO
    k = max(range(len(u)), key=lambda i: (abs(u[i]), -i))
    # the coordinate chart on u-perp stretches measure by |u| / |u_k|
    return scaled_measure(shadow.volume / abs(u[k]), norm_sq(u))


def _richardson_derivative(f: Callable, r: Rat, h: Rat) -> tuple[Rat, Rat]:
    def central(step):
        return (f(r + step) - f(r - step)) / (2 * step)

    d1, d2, d4 = central(h), central(h / 2), central(h / 4)
    return (4 * d2 - d1) / 3, (4 * d4 - d2) / 3


def matheron_chord_check(K: Polytope, u: Sequence, r_samples: Sequence,
                         max_refinements: int = 12) -> float:
    """Max relative residual between the radial derivative of the covariogram
    along ``u`` and the chord-tail measure.

    The derivative uses central differences at steps 1/100, 1/200 and 1/400
    of the width along ``u`` with one Richardson level.  The covariogram is
    piecewise cubic along rays, so the two Richardson estimates agree exactly
    when no breakpoint lies within the stencil; otherwise the steps shrink,
    and :class:`RAtKink` is raised if they never settle.
    """
    u = vec(u)
    nu = norm_sq(u)
    width = (K.support(u) + K.support(vneg(u))) / nu
    f = lambda t: cov(K, vscale(t, u))  # noqa: E731
    worst = 0.0
    for r in map(rat, r_samples):
        if r <= 0:
            raise RAtKink("radius must be positive")
        tail = chord_tail_measure(K, u, r)
        # d/dr of g(r u) is -|u| times the tail measure
        if isinstance(tail, Rat):
            expected = scaled_measure(-tail, nu)
        else:
            expected = -tail * math.sqrt(float(nu))
        if r >= width:
            worst = max(worst, abs(float(expected)))
            continue
        h = width / 100
        for _ in range(max_refinements):
            a, b = _richardson_derivative(f, r, h)
            if a == b and r - h > 0:
                break
            h /= 8
        else:
            raise RAtKink(f"no smooth neighbourhood found around r={r}")
        scale = max(abs(float(expected)), 1e-300)
        worst = max(worst, abs(float(a - expected)) / scale if expected != 0 else abs(float(a)))
    return worst


def fourier_min_ratio(K: Polytope, res: int = 65, pad: int = 2) -> float:
    """Smallest DFT coefficient of a sampled planar covariogram, relative to the largest.

    The covariogram is the autocorrelation of an indicator, so its Fourier
    transform is a squared modulus; the sampled surrogate should be
    nonnegative up to discretization error.
    """
    if K.dim != 2:
        raise ValueError("the Fourier check is planar")
    if res % 2 == 0:
        raise ValueError("use an odd resolution so the origin is a node")
    field = cov_grid(K, res)
    vals = field.as_array()
    m = pad * res
    arr = np.zeros((m, m))
    c = res // 2
    idx = (np.arange(res) - c) % m
    arr[np.ix_(idx, idx)] = vals
    spec = np.fft.fft2(arr).real
    return float(spec.min() / spec.max())
