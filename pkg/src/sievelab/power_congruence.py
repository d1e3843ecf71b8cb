"""Counting solutions of x**k * g == l (mod m).

Prime-power counts come from solving mod p and lifting the solution set one
level at a time (Hensel); composite moduli are assembled by CRT. The
exhaustive scan used as the oracle lives in :mod:`sievelab.kernels`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, prod
from typing import Dict, Optional, Tuple

from . import kernels
from .modmath import (
    FactoredInteger,
    crt_product_sets,
    factorize,
    is_prime,
    mod_inverse,
    primitive_root,
    discrete_log,
)

ENUMERATION_LIMIT = 10**7


@dataclass(frozen=True)
class RootCount:
    modulus: FactoredInteger
    k: int
    g: int
    l: int
    count: int
    roots: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.roots is not None and len(self.roots) != self.count:
            raise ValueError("root list length disagrees with count")


def _check_prime_power(p: int, e: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e < 1:
        raise ValueError("exponent must be >= 1")


_SCAN_PRIME_LIMIT = 4096


@lru_cache(maxsize=1 << 10)
def _power_table(k: int, p: int) -> Dict[int, Tuple[int, ...]]:
    """residue -> sorted x in [1, p) with x**k == residue (mod p)."""
    table: Dict[int, list] = {}
    for x in range(1, p):
        table.setdefault(pow(x, k, p), []).append(x)
    return {v: tuple(xs) for v, xs in table.items()}


@lru_cache(maxsize=1 << 15)
def _roots_mod_p(k: int, a: int, p: int) -> Tuple[int, ...]:
    a %= p
    if p <= _SCAN_PRIME_LIMIT:
        return _power_table(k, p).get(a, ())
    # cyclic group of order n: roots form a coset of the d-torsion
    n = p - 1
    d = gcd(k, n)
    if pow(a, n // d, p) != 1:
        return ()
    g0 = primitive_root(p)
    ind = discrete_log(a, g0, p)
    x0 = pow(g0, (ind // d) * pow(k // d, -1, n // d) % n, p) if n // d > 1 else 1
    h = pow(g0, n // d, p)
    roots, cur = [], x0
    for _ in range(d):
        roots.append(cur)
        cur = cur * h % p
    return tuple(sorted(roots))


@lru_cache(maxsize=1 << 16)
def lift_power_roots(k: int, a: int, p: int, e: int) -> Tuple[int, ...]:
    """Sorted roots of x**k == a (mod p**e) for a prime to p.

    A root r mod p**j with f'(r) = k*r**(k-1) not divisible by p lifts to
    exactly one root mod p**(j+1). Otherwise r + t*p**j is a root for every t
    when p**(j+1) divides f(r), and for no t when it does not; the quadratic
    and higher Taylor terms vanish mod p**(j+1) because 2j >= j+1.
    """
    _check_prime_power(p, e)
    a %= p**e
    if a % p == 0:
        raise ValueError("target must be prime to p")
    roots = list(_roots_mod_p(k, a % p, p))
    pj = p
    for _ in range(1, e):
        nxt = pj * p
        target = a % nxt
        lifted = []
        for r in roots:
            fr = (pow(r, k, nxt) - target) % nxt
            dfr = k * pow(r, k - 1, p) % p
            if dfr:
                # f(r + t p^j) = f(r) + t p^j f'(r) (mod p^(j+1))
                t = (-(fr // pj) * pow(dfr, -1, p)) % p
                lifted.append(r + t * pj)
            elif fr == 0:
                lifted.extend(r + t * pj for t in range(p))
        roots = lifted
        pj = nxt
    return tuple(sorted(roots))


def count_power_roots_prime_power(k: int, a: int, p: int, e: int) -> int:
    """Number of x mod p**e with x**k == a (mod p**e), gcd(a, p) = 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    _check_prime_power(p, e)
    if a % p == 0:
        raise ValueError("target must be prime to p")
    return len(lift_power_roots(k, a, p, e))


def kernel_size(k: int, p: int, e: int) -> int:
    """|{x in (Z/p^e)^* : x**k == 1}|."""
    return count_power_roots_prime_power(k, 1, p, e)


def kernel_size_prime_factor_bound(k: int, p: int, e: int) -> int:
    """Upper bound prod |ker sigma_pi|**a over k = prod pi**a.

    An independent route to |ker sigma_k|: sigma_k is the composite of the
    sigma_pi, so the kernel size is at most the product of the factors'.
    """
    return prod(kernel_size(pi, p, e) ** a for pi, a in factorize(k).factors)


def _delta_parts(k: int, g: int, m: int, l: int):
    if gcd(l, m) != 1:
        raise ValueError(f"gcd(l={l}, m={m}) must be 1")
    fm = factorize(m)
    if gcd(g, m) != 1:
        return fm, None
    gbar = mod_inverse(g, m)
    target = gbar * l % m
    return fm, target


def delta_t(k: int, g: int, m: int, l: int) -> RootCount:
    """Count x mod m with x**k * g == l (mod m); requires gcd(l, m) = 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    fm, target = _delta_parts(k, g, m, l)
    if target is None:
        return RootCount(fm, k, g, l, 0)
    count = 1
    for p, e in fm.factors:
        count *= count_power_roots_prime_power(k, target, p, e)
        if count == 0:
            break
    return RootCount(fm, k, g, l, count)


def enumerate_power_roots(k: int, g: int, m: int, l: int) -> list:
    """Sorted list of the solutions counted by :func:`delta_t`."""
    if m > ENUMERATION_LIMIT:
        raise ValueError(f"m={m} exceeds the enumeration limit {ENUMERATION_LIMIT}")
    fm, target = _delta_parts(k, g, m, l)
    if target is None:
        return []
    sets = [lift_power_roots(k, target, p, e) for p, e in fm.factors]
    return crt_product_sets(sets, fm.prime_powers())


def scan_delta_counts(k: int, g: int, m: int):
    """Exhaustive-scan oracle: array c with c[l] = #{x < m : x**k g == l}."""
    if m > ENUMERATION_LIMIT:
        raise ValueError(f"m={m} exceeds the enumeration limit {ENUMERATION_LIMIT}")
    return kernels.power_residue_histogram(k, g, m)


def divisor_bound(k: int, m: int) -> int:
    """k**(2 omega(m)), the uniform bound on delta_t(m, l)."""
    return k ** (2 * factorize(m).omega)
