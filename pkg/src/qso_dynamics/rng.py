"""Seedable, portable random number generation.

All randomness in the package flows through :class:`SplitMix64`, chosen over
``numpy.random`` because the algorithm is small enough to restate exactly,
which lets a reimplementation in any language reproduce seed-derived starting
points bit for bit.

SplitMix64 (public domain, Steele/Lea/Flood; also the seeder of xoshiro):

    state  <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z      <- state
    z      <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9  mod 2^64
    z      <- (z XOR (z >> 27)) * 0x94D049BB133111EB  mod 2^64
    output <- z XOR (z >> 31)

Doubles are produced as ``(output >> 11) * 2**-53``, uniform on [0, 1).
Simplex points are drawn by the exponential-spacings construction
``x_i = e_i / sum(e)`` with ``e_i = -log(u_i)``, the Dirichlet(1,...,1)
distribution, i.e. uniform on the simplex.
"""

import math

_MASK = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Deterministic 64-bit generator with a single 64-bit state word."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0**-53

    def next_positive_float(self) -> float:
        """Uniform double in (0, 1); redraws the (2^-53-probability) zero."""
        while True:
            u = self.next_float()
            if u > 0.0:
                return u

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.next_float()

    def simplex_point(self, m: int) -> tuple:
        """Uniformly distributed barycentric vector with ``m`` coordinates."""
        e = [-math.log(self.next_positive_float()) for _ in range(m)]
        s = sum(e)
        return tuple(v / s for v in e)

    def interior_simplex_point(self, m: int, margin: float = 1e-3) -> tuple:
        """Uniform simplex point conditioned on every coordinate > margin."""
        while True:
            x = self.simplex_point(m)
            if min(x) > margin:
                return x
