"""Left-hand sides of the large sieve inequalities over power moduli.

The sum over a/q^k with gcd(a, q) = 1 is filtered by gcd(a, q^k) = 1;
the two agree because q and q^k have the same prime divisors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Dict, List, Optional, Tuple

import numpy as np

from .expsums import CoeffSequence, exp_sums_all_residues, exp_sums_at
from .moduli_sets import kth_powers_in

FRACTION_GUARD = 10**9
METHODS = ("naive", "accelerated")


@dataclass(frozen=True)
class SieveSumResult:
    lhs: float
    term_count: int
    N: int
    M: int
    Q: float
    k: int
    method: str
    max_term: float = 0.0
    # modulus D -> sum over reduced a of |S(a/D)|^2
    per_modulus: Dict[int, float] = field(default_factory=dict, repr=False, compare=False)


def _coprime_mask(D: int) -> np.ndarray:
    """mask[a] for a = 0..D-1: gcd(a, D) == 1 (index 0 stands for a = D)."""
    mask = np.ones(D, dtype=bool)
    if D == 1:
        return mask
    x = D
    p = 2
    while p * p <= x:
        if x % p == 0:
            mask[::p] = False
            while x % p == 0:
                x //= p
        p += 1
    if x > 1:
        mask[::x] = False
    return mask


def modulus_contribution(seq: CoeffSequence, D: int, method: str = "accelerated") -> Tuple[float, int, float]:
    """(sum, count, max) of |S(a/D)|^2 over 1 <= a <= D, gcd(a, D) = 1."""
    mask = _coprime_mask(D)
    if method == "accelerated":
        vals = exp_sums_all_residues(seq, D)[mask]
    elif method == "naive":
        a = np.nonzero(mask)[0]
        a[a == 0] = D
        vals = exp_sums_at(seq, D, a)
    else:
        raise ValueError(f"unknown method {method!r}")
    sq = vals.real**2 + vals.imag**2
    return math.fsum(sq.tolist()), int(sq.size), float(sq.max()) if sq.size else 0.0


def _sum_over_moduli(seq, moduli, method, Q, k, extra_guard=True) -> SieveSumResult:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    total_fracs = sum(moduli)
    if extra_guard and total_fracs > FRACTION_GUARD:
        raise ValueError(f"{total_fracs} fractions exceed the desk-scale guard {FRACTION_GUARD}")
    per = {}
    parts, count, mx = [], 0, 0.0
    for D in moduli:
        s, c, m = modulus_contribution(seq, D, method)
        per[D] = s
        parts.append(s)
        count += c
        mx = max(mx, m)
    return SieveSumResult(math.fsum(parts), count, seq.N, seq.M, Q, k, method, mx, per)


def sieve_sum_power_moduli(seq: CoeffSequence, Q: int, k: int, method: str = "accelerated") -> SieveSumResult:
    """sum_{q <= Q} sum_{a <= q^k, (a, q) = 1} |S(a / q^k)|^2."""
    if Q < 1 or k < 1:
        raise ValueError("need Q >= 1 and k >= 1")
    if seq.N < 1:
        raise ValueError("empty sequence")
    if Q ** (k + 1) > FRACTION_GUARD:
        raise ValueError("Q^(k+1) exceeds the desk-scale guard")
    return _sum_over_moduli(seq, [q**k for q in range(1, Q + 1)], method, Q, k)


def sieve_sum_dyadic(seq: CoeffSequence, Q0, k: int, method: str = "accelerated") -> SieveSumResult:
    """Sum restricted to moduli q in S(Q0): the k-th powers in (Q0, 2Q0]."""
    moduli = [s**k for s in kth_powers_in(Q0, 2 * Q0, k)]
    return _sum_over_moduli(seq, moduli, method, Q0, k)


def classical_sieve_sum(seq: CoeffSequence, Q: int, method: str = "naive") -> SieveSumResult:
    """sum_{q <= Q} sum_{a <= q, (a, q) = 1} |S(a/q)|^2."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    return _sum_over_moduli(seq, list(range(1, Q + 1)), method, Q, 1)


def cumulative_power_sums(seq: CoeffSequence, Qs, k: int, method: str = "accelerated") -> Dict[int, SieveSumResult]:
    """sieve_sum_power_moduli for every Q in ``Qs``, sharing per-modulus work."""
    Qs = sorted(set(Qs))
    full = sieve_sum_power_moduli(seq, Qs[-1], k, method)
    out = {}
    for Q in Qs:
        moduli = [q**k for q in range(1, Q + 1)]
        parts = [full.per_modulus[D] for D in moduli]
        count = sum(int(_coprime_mask(D).sum()) for D in moduli)
        out[Q] = SieveSumResult(
            math.fsum(parts), count, seq.N, seq.M, Q, k, method,
            per_modulus={D: full.per_modulus[D] for D in moduli},
        )
    return out


def dyadic_cover(N: int, Q: int, k: int) -> Tuple[List[int], List[Tuple[int, List[int]]]]:
    """Split the moduli {q^k : q <= Q} as in the dyadic argument.

    Returns the moduli handled by the classical block (those <= sqrt(N)) and
    a list of (Q0, moduli in S(Q0)) with Q0 = floor(sqrt N) * 2^j covering
    the rest. Since moduli are integers, D > floor(sqrt N) iff D > sqrt N.
    """
    r = isqrt(N)
    top = Q**k
    small = [q**k for q in range(1, Q + 1) if q**k <= r]
    blocks = []
    Q0 = r
    while Q0 < top:
        mods = [s**k for s in kth_powers_in(Q0, 2 * Q0, k) if s <= Q]
        blocks.append((Q0, mods))
        Q0 *= 2
    return small, blocks
