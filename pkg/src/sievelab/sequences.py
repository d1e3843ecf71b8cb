"""Coefficient sequences for the verification campaigns."""

import numpy as np

from .expsums import CoeffSequence
from .rng import splitmix64, uniform

KINDS = ("all-ones", "random-unit", "random-complex", "single-spike")


def generate_sequence(kind: str, N: int, M: int = 0, seed: int = 0) -> CoeffSequence:
    """a_{M+1}, ..., a_{M+N} of the given kind.

    random-unit uses e(u_n) with u_n the n-th uniform double of the seed's
    stream; random-complex takes real and imaginary parts 2u - 1 from
    consecutive draws. Deterministic kinds ignore the seed.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if kind == "all-ones":
        a = np.ones(N, dtype=np.complex128)
    elif kind == "single-spike":
        a = np.zeros(N, dtype=np.complex128)
        a[0] = 1.0
    elif kind == "random-unit":
        u = 2 * np.pi * uniform(seed, N)
        a = np.cos(u) + 1j * np.sin(u)
    elif kind == "random-complex":
        u = uniform(seed, 2 * N)
        a = (2 * u[0::2] - 1) + 1j * (2 * u[1::2] - 1)
    else:
        raise ValueError(f"unknown sequence kind {kind!r}")
    return CoeffSequence(M, a)


__all__ = ["KINDS", "generate_sequence", "splitmix64"]
