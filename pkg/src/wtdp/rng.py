"""Portable pseudo-random number generator.

Instance files and every randomized solver in this package draw from
xoshiro256** seeded through splitmix64.  The algorithm is fixed (and named
in generated instance files as ``xoshiro256ss-splitmix64``) so that a seed
reproduces the same instances and solver runs on any platform or in any
other implementation that follows the same recipe.

Derived draws:

* ``next_u64``      raw 64-bit output
* ``randbelow(k)``  rejection sampling: draw ``x`` until ``x < 2**64 - (2**64 % k)``,
                    return ``x % k``
* ``integers(a, b)`` ``a + randbelow(b - a + 1)`` (inclusive)
* ``random()``      ``(next_u64() >> 11) * 2**-53``
"""

from __future__ import annotations

ALGORITHM_ID = "xoshiro256ss-splitmix64"

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step; returns ``(new_state, output)``."""
    state = (state + _GOLDEN) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


class Rng:
    """xoshiro256** generator.

    ``stream`` selects an independent substream for the same seed; it is
    mixed into the splitmix64 seed before expansion.
    """

    __slots__ = ("seed", "stream", "_s")

    def __init__(self, seed: int, stream: int = 0):
        if seed < 0 or seed > _MASK:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self.stream = stream
        sm = (seed ^ ((stream * _GOLDEN) & _MASK)) & _MASK
        s = []
        for _ in range(4):
            sm, out = splitmix64(sm)
            s.append(out)
        self._s = s

    def fork(self, stream: int) -> "Rng":
        return Rng(self.seed, stream)

    def next_u64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & _MASK, 7) * 9) & _MASK
        t = (s[1] << 17) & _MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def randbelow(self, k: int) -> int:
        if k <= 0:
            raise ValueError("randbelow requires k >= 1")
        limit = (1 << 64) - ((1 << 64) % k)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % k

    def integers(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``, both ends inclusive."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.randbelow(hi - lo + 1)

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def sample(self, items: list, m: int) -> list:
        """``m`` distinct items by a partial Fisher-Yates shuffle of a copy."""
        pool = list(items)
        m = min(m, len(pool))
        for t in range(m):
            k = t + self.randbelow(len(pool) - t)
            pool[t], pool[k] = pool[k], pool[t]
        return pool[:m]
