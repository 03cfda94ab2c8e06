"""Portable seeded randomness (SplitMix64) for reproducible probe sets.

The generator is fully specified here so probe sets can be regenerated by
any implementation:

    state <- state + 0x9E3779B97F4A7C15            (mod 2**64)
    z <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9      (mod 2**64)
    z <- (z ^ (z >> 27)) * 0x94D049BB133111EB      (mod 2**64)
    out <- z ^ (z >> 31)

Bounded integers use rejection sampling on the top of the 64-bit range.
"""
from __future__ import annotations

from gmpy2 import mpq

from .exactgeom import DegenerateInput, Polytope, convex_hull

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def rational(self, lo, hi, den: int = 1 << 20) -> mpq:
        """Uniform rational on the grid ``lo + (hi-lo) k/den``, k in [0, den]."""
        lo, hi = mpq(lo), mpq(hi)
        return lo + (hi - lo) * mpq(self.below(den + 1), den)

    def vector(self, n: int, lo, hi, den: int = 1 << 20) -> tuple:
        return tuple(self.rational(lo, hi, den) for _ in range(n))

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def spawn(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())


def random_polytope(rng: SplitMix64, n: int = 3, npoints: int = 10,
                    coord: int = 6, den: int = 4) -> Polytope:
    """Hull of ``npoints`` random rational points in ``[-coord, coord]^n``."""
    while True:
        pts = [tuple(mpq(rng.integer(-coord * den, coord * den), den) for _ in range(n))
               for _ in range(npoints)]
        try:
            return convex_hull(pts)
        except DegenerateInput:
            continue
