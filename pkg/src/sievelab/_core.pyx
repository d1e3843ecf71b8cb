# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Mirrors sievelab._fallback function for function."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, fabs, M_PI
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()

BACKEND = "compiled"

cdef enum:
    _BLOCK = 64


cdef inline uint64_t _mulmod(uint64_t a, uint64_t b, uint64_t m) nogil:
    # callers keep m below 2**32, so a*b fits in 64 bits
    return (a * b) % m


def power_residue_histogram(long long k, long long g, long long m):
    """counts[l] = #{x in [0, m) : x**k * g == l (mod m)}."""
    if m < 1 or m >= (1 << 32):
        raise ValueError("modulus out of range for the scan kernel")
    cdef cnp.ndarray[int64_t, ndim=1] counts = np.zeros(m, dtype=np.int64)
    cdef int64_t[::1] cv = counts
    cdef uint64_t um = <uint64_t>m
    cdef uint64_t ug = <uint64_t>(g % m + m) % um
    cdef uint64_t x, v
    cdef long long j
    with nogil:
        for x in range(um):
            v = 1 % um
            for j in range(k):
                v = _mulmod(v, x, um)
            v = _mulmod(v, ug, um)
            cv[v] += 1
    return counts


def exp_sums_rational(coeffs, long long M, long long D, numerators):
    """S(a/D) = sum_{i<N} coeffs[i] * e(a*(M+1+i)/D) for every a in numerators.

    Phases are reduced mod D in integer arithmetic and looked up in a table
    of D roots of unity. Terms are summed plainly in blocks of 64 and the
    block sums are Neumaier-compensated.
    """
    if D < 1 or D >= (1 << 31):
        raise ValueError("denominator out of range for the kernel")
    cdef const double[::1] cre = np.ascontiguousarray(np.real(coeffs), dtype=np.float64)
    cdef const double[::1] cim = np.ascontiguousarray(np.imag(coeffs), dtype=np.float64)
    cdef const int64_t[::1] nums = np.ascontiguousarray(numerators, dtype=np.int64)
    cdef Py_ssize_t n_terms = cre.shape[0]
    cdef Py_ssize_t n_out = nums.shape[0]
    cdef cnp.ndarray out = np.empty(n_out, dtype=np.complex128)
    cdef double[::1] ore = np.empty(n_out, dtype=np.float64)
    cdef double[::1] oim = np.empty(n_out, dtype=np.float64)
    cdef double[::1] tc = np.empty(D, dtype=np.float64)
    cdef double[::1] ts = np.empty(D, dtype=np.float64)
    cdef Py_ssize_t j, i, t, stop
    cdef int64_t a, step, idx, first
    cdef double sr, si, cr, ci, br, bi, tr, ti
    cdef double two_pi_over_d = 2.0 * M_PI / <double>D
    first = ((M + 1) % D + D) % D
    with nogil:
        for j in range(D):
            tc[j] = cos(two_pi_over_d * j)
            ts[j] = sin(two_pi_over_d * j)
        for t in range(n_out):
            a = ((nums[t] % D) + D) % D
            step = a
            idx = (a * first) % D
            sr = 0.0; si = 0.0; cr = 0.0; ci = 0.0
            i = 0
            while i < n_terms:
                # plain sum over a short block, compensated sum across blocks
                stop = i + _BLOCK
                if stop > n_terms:
                    stop = n_terms
                br = 0.0; bi = 0.0
                while i < stop:
                    br += cre[i] * tc[idx] - cim[i] * ts[idx]
                    bi += cre[i] * ts[idx] + cim[i] * tc[idx]
                    idx += step
                    if idx >= D:
                        idx -= D
                    i += 1
                tr = sr + br
                if fabs(sr) >= fabs(br):
                    cr += (sr - tr) + br
                else:
                    cr += (br - tr) + sr
                sr = tr
                ti = si + bi
                if fabs(si) >= fabs(bi):
                    ci += (si - ti) + bi
                else:
                    ci += (bi - ti) + si
                si = ti
            ore[t] = sr + cr
            oim[t] = si + ci
    out.real = np.asarray(ore)
    out.imag = np.asarray(oim)
    return out


def cubic_sum(long long c, long long kcoef, long long l):
    """sum_{d=1}^{c} e((kcoef*d**3 + l*d)/c) with exact residue reduction."""
    if c < 1 or c >= (1 << 31):
        raise ValueError("modulus out of range for the kernel")
    cdef int64_t kc = ((kcoef % c) + c) % c
    cdef int64_t lc = ((l % c) + c) % c
    cdef int64_t d, r
    cdef double sr = 0.0, si = 0.0, w = 2.0 * M_PI / <double>c
    cdef double[::1] tc = np.empty(c, dtype=np.float64)
    cdef double[::1] ts = np.empty(c, dtype=np.float64)
    with nogil:
        for d in range(c):
            tc[d] = cos(w * d)
            ts[d] = sin(w * d)
        # d = c contributes the same term as d = 0
        for d in range(c):
            r = d * d % c
            r = r * d % c
            r = (kc * r + lc * d) % c
            sr += tc[r]
            si += ts[r]
    return complex(sr, si)
