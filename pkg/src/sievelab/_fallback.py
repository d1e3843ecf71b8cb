"""Pure numpy versions of the kernels in ``_core.pyx``."""

import numpy as np

BACKEND = "python"

_CHUNK = 1 << 21


def power_residue_histogram(k, g, m):
    """counts[l] = #{x in [0, m) : x**k * g == l (mod m)}."""
    if m < 1 or m >= (1 << 32):
        raise ValueError("modulus out of range for the scan kernel")
    counts = np.zeros(m, dtype=np.int64)
    # unsigned so that products of two residues below 2^32 cannot overflow
    gm, mu = np.uint64(g % m), np.uint64(m)
    for lo in range(0, m, _CHUNK):
        x = np.arange(lo, min(m, lo + _CHUNK), dtype=np.uint64)
        v = np.full_like(x, 1 % m)
        for _ in range(k):
            v = v * x % mu
        v = v * gm % mu
        counts += np.bincount(v.astype(np.int64), minlength=m)
    return counts


def exp_sums_rational(coeffs, M, D, numerators):
    """S(a/D) = sum_{i<N} coeffs[i] * e(a*(M+1+i)/D) for every a in numerators."""
    if D < 1 or D >= (1 << 31):
        raise ValueError("denominator out of range for the kernel")
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    nums = np.asarray(numerators, dtype=np.int64) % D
    table = np.exp(2j * np.pi * np.arange(D) / D)
    n = np.arange(coeffs.size, dtype=np.int64)
    first = (M + 1) % D
    out = np.empty(nums.size, dtype=np.complex128)
    rows = max(1, _CHUNK // max(1, coeffs.size))
    for lo in range(0, nums.size, rows):
        a = nums[lo : lo + rows, None]
        idx = (a * first + a * n[None, :]) % D
        out[lo : lo + rows] = (table[idx] * coeffs[None, :]).sum(axis=1)
    return out


def cubic_sum(c, kcoef, l):
    """sum_{d=1}^{c} e((kcoef*d**3 + l*d)/c) with exact residue reduction."""
    if c < 1 or c >= (1 << 31):
        raise ValueError("modulus out of range for the kernel")
    d = np.arange(1, c + 1, dtype=np.int64) % c
    r = d * d % c * d % c
    r = ((kcoef % c) * r + (l % c) * d) % c
    return complex(np.exp(2j * np.pi * r / c).sum())
