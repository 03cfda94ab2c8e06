"""Independent reference implementations used only by the tests.

They use ``fractions.Fraction`` and plain numpy so that a bug shared with the
library's gmpy2 code paths cannot hide.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import numpy as np


def frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator)) if hasattr(x, "numerator") else Fraction(x)


def fvec(v):
    return tuple(frac(c) for c in v)


def solve(a, b):
    """Gauss-Jordan elimination over Fractions; None if singular."""
    n = len(a)
    m = [list(r) + [bb] for r, bb in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(r[n] for r in m)


def brute_vertices(halfspaces, n):
    """Vertices of ``{x : a.x <= b}`` by trying every n-subset of constraints."""
    hs = [(fvec(a), frac(b)) for a, b in halfspaces]
    out = set()
    for sub in combinations(hs, n):
        x = solve([a for a, _ in sub], [b for _, b in sub])
        if x is None:
            continue
        if all(sum(ai * xi for ai, xi in zip(a, x)) <= b for a, b in hs):
            out.add(x)
    return sorted(out)


def facet_volume_3d(vertices, halfspaces):
    """Volume of a 3-polytope as a sum of cones from an interior point over facets."""
    verts = [fvec(v) for v in vertices]
    center = tuple(sum(c) / len(verts) for c in zip(*verts))
    total = Fraction(0)
    for a, b in halfspaces:
        a, b = fvec(a), frac(b)
        face = [v for v in verts if sum(x * y for x, y in zip(a, v)) == b]
        fc = tuple(sum(c) / len(face) for c in zip(*face))
        # order the facet polygon by angle in a float frame
        af = np.array([float(x) for x in a])
        e1 = np.array([float(x - y) for x, y in zip(face[0], fc)])
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(af / np.linalg.norm(af), e1)
        ang = [math.atan2(np.dot(e2, [float(x - y) for x, y in zip(v, fc)]),
                          np.dot(e1, [float(x - y) for x, y in zip(v, fc)])) for v in face]
        ring = [v for _, v in sorted(zip(ang, face))]
        for i in range(1, len(ring) - 1):
            rows = [[p - q for p, q in zip(v, center)] for v in (ring[0], ring[i], ring[i + 1])]
            total += abs(det3(rows)) / 6
    return total


def det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _inside(points, halfspaces):
    a = np.array([[float(c) for c in h[0]] for h in halfspaces])
    b = np.array([float(h[1]) for h in halfspaces])
    return np.all(points @ a.T <= b + 1e-12, axis=1)


def monte_carlo_volume(halfspace_sets, lo, hi, samples=10 ** 6, seed=0):
    """Estimate the volume of the intersection of several H-polytopes.

    Returns ``(estimate, standard error)``.
    """
    rng = np.random.default_rng(seed)
    lo = np.array([float(x) for x in lo])
    hi = np.array([float(x) for x in hi])
    box = float(np.prod(hi - lo))
    hits = 0
    chunk = 200_000
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        pts = lo + (hi - lo) * rng.random((m, len(lo)))
        mask = np.ones(m, dtype=bool)
        for hs in halfspace_sets:
            mask &= _inside(pts, hs)
        hits += int(mask.sum())
        done += m
    p = hits / samples
    return box * p, box * math.sqrt(max(p * (1 - p), 1e-300) / samples)


def box_covariogram(lo, hi, x):
    out = Fraction(1)
    for a, b, xi in zip(lo, hi, x):
        out *= max(Fraction(0), frac(b) - frac(a) - abs(frac(xi)))
    return out


def support(vertices, u):
    return max(sum(frac(a) * frac(b) for a, b in zip(v, u)) for v in vertices)


def polygon_area(points):
    """Area of the convex hull of planar points (monotone chain, exact)."""
    pts = sorted(set(fvec(p) for p in points))
    if len(pts) < 3:
        return Fraction(0)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return abs(sum(hull[i][0] * hull[i - 1][1] - hull[i - 1][0] * hull[i][1]
                   for i in range(len(hull)))) / 2


def clip_polygon(poly, a, b):
    """Sutherland-Hodgman clip of a convex polygon (ordered) by a.x <= b."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp = a[0] * p[0] + a[1] * p[1] - b
        fq = a[0] * q[0] + a[1] * q[1] - b
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def polygon_overlap(P_vertices, Q_halfspaces):
    """Exact area of a convex polygon clipped by halfspaces."""
    pts = [fvec(v) for v in P_vertices]
    c = tuple(sum(x) / len(pts) for x in zip(*pts))
    ring = sorted(pts, key=lambda v: math.atan2(float(v[1] - c[1]), float(v[0] - c[0])))
    for a, b in Q_halfspaces:
        ring = clip_polygon(ring, fvec(a), frac(b))
        if not ring:
            return Fraction(0)
    return polygon_area(ring)
