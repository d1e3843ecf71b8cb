"""SplitMix64, the generator behind every random coefficient sequence.

Output i (i = 0, 1, ...) for seed s is mix(s + (i + 1) * GOLDEN mod 2^64) with

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

all arithmetic mod 2^64. Uniform doubles are (x >> 11) * 2^-53. Any port
that follows these constants reproduces the sequences bit for bit.
"""

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK = (1 << 64) - 1


def splitmix64(seed: int, count: int) -> np.ndarray:
    """The first ``count`` outputs for ``seed`` as uint64."""
    with np.errstate(over="ignore"):
        i = np.arange(1, count + 1, dtype=np.uint64)
        z = np.uint64(seed & MASK) + i * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
        return z ^ (z >> np.uint64(31))


def splitmix64_scalar(seed: int, count: int) -> list:
    """Reference implementation on Python ints."""
    out, state = [], seed & MASK
    for _ in range(count):
        state = (state + GOLDEN) & MASK
        z = state
        z = ((z ^ (z >> 30)) * MIX1) & MASK
        z = ((z ^ (z >> 27)) * MIX2) & MASK
        out.append(z ^ (z >> 31))
    return out


def uniform(seed: int, count: int) -> np.ndarray:
    """Doubles in [0, 1)."""
    return (splitmix64(seed, count) >> np.uint64(11)).astype(np.float64) * 2.0**-53


class SplitMixRandom:
    """Sequential draws from one SplitMix64 stream.

    Provides the two methods the samplers use (``integers`` with an exclusive
    upper end, ``uniform``) so parameter sampling shares the documented
    generator with the coefficient sequences.
    """

    def __init__(self, seed: int):
        self._state = seed & MASK

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK
        z = self._state
        z = ((z ^ (z >> 30)) * MIX1) & MASK
        z = ((z ^ (z >> 27)) * MIX2) & MASK
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def integers(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi) by rejection, no modulo bias."""
        span = hi - lo
        if span <= 0:
            raise ValueError("empty range")
        limit = (1 << 64) - (1 << 64) % span
        while True:
            x = self.next_u64()
            if x < limit:
                return lo + x % span

    def uniform(self, a: float, b: float) -> float:
        return a + (b - a) * self.random()
