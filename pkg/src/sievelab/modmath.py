"""Exact integer and modular arithmetic used throughout the package.

Everything here works on Python ints, so products never overflow. Moduli
are still capped below 2**63 to keep the library's inputs in the range a
64-bit port would accept.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from math import gcd, prod
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

MODULUS_LIMIT = 1 << 63

# wheel mod 30 for trial division past 2, 3, 5
_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _check_modulus(m: int) -> None:
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    if m >= MODULUS_LIMIT:
        raise ValueError(f"modulus {m} exceeds the 2**63 limit")


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer together with its prime factorization."""

    value: int
    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if prod(p**e for p, e in self.factors) != self.value:
            raise ValueError("factors do not multiply to value")
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise ValueError("primes must be distinct and sorted")
        if not all(is_prime(p) and e >= 1 for p, e in self.factors):
            raise ValueError("factors must be primes with positive exponents")

    @property
    def phi(self) -> int:
        return prod(p ** (e - 1) * (p - 1) for p, e in self.factors)

    @property
    def omega(self) -> int:
        return len(self.factors)

    @property
    def tau(self) -> int:
        return prod(e + 1 for _, e in self.factors)

    @property
    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]

    def prime_powers(self) -> List[int]:
        return [p**e for p, e in self.factors]

    def divisors(self) -> List[int]:
        """All positive divisors in increasing order."""
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**i for d in divs for i in range(e + 1)]
        return sorted(divs)

    def __int__(self) -> int:
        return self.value


def _trial_division(n: int) -> Tuple[List[Tuple[int, int]], int]:
    out = []
    for p in (2, 3, 5):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    d, i = 7, 0
    # a prime cofactor ends the search early; retest only when n shrinks
    if n > 1 << 20 and is_prime(n):
        return out, n
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
            if n > 1 << 20 and is_prime(n):
                break
        d += _WHEEL[i]
        i = (i + 1) & 7
    return out, n


@lru_cache(maxsize=1 << 16)
def factorize(n: int) -> FactoredInteger:
    """Factor ``n`` (1 <= n < 2**63) by wheel trial division."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    if n >= MODULUS_LIMIT:
        raise ValueError(f"{n} exceeds the 2**63 limit")
    factors, rest = _trial_division(n)
    if rest > 1:
        factors.append((rest, 1))
    return FactoredInteger(n, tuple(sorted(factors)))


def mod_pow(base: int, exp: int, m: int) -> int:
    """base**exp mod m as a residue in [0, m)."""
    _check_modulus(m)
    if exp < 0:
        raise ValueError("exponent must be nonnegative")
    return pow(base, exp, m)


def mod_inverse(a: int, m: int) -> Optional[int]:
    """Inverse of a mod m, or None when gcd(a, m) > 1."""
    _check_modulus(m)
    if m == 1:
        return 0
    if gcd(a, m) != 1:
        return None
    return pow(a, -1, m)


def crt_combine(congruences: Sequence[Tuple[int, int]]) -> Tuple[int, int]:
    """Solve x = r_i (mod m_i) for pairwise coprime m_i.

    Returns (x, M) with 0 <= x < M = prod(m_i).
    """
    x, big = 0, 1
    for r, m in congruences:
        _check_modulus(m)
        if gcd(big, m) != 1:
            raise ValueError(f"modulus {m} is not coprime to the others")
        # x + big*s = r (mod m)
        s = ((r - x) * pow(big, -1, m)) % m if m > 1 else 0
        x += big * s
        big *= m
    if big >= MODULUS_LIMIT:
        raise ValueError("combined modulus exceeds the 2**63 limit")
    return x % big, big


def crt_product_sets(
    residue_sets: Sequence[Iterable[int]], moduli: Sequence[int]
) -> List[int]:
    """Every CRT combination of one residue from each set, sorted."""
    combos = [(0, 1)]
    for residues, m in zip(residue_sets, moduli):
        residues = list(residues)
        combos = [
            crt_combine([(x, big), (r, m)]) for x, big in combos for r in residues
        ]
    return sorted(x for x, _ in combos)


def iroot(n: int, k: int) -> int:
    """Largest integer s with s**k <= n (n >= 0, k >= 1)."""
    if n < 0:
        raise ValueError("iroot needs n >= 0")
    if k == 1 or n < 2:
        return n
    s = int(round(n ** (1.0 / k))) if n < (1 << 1000) else 1 << (n.bit_length() // k)
    # float start is within a few units; settle exactly
    while s**k > n:
        s -= 1
    while (s + 1) ** k <= n:
        s += 1
    return s


@lru_cache(maxsize=4096)
def primitive_root(p: int) -> int:
    """Smallest generator of (Z/p)^* for an odd prime p (1 for p = 2)."""
    if p == 2:
        return 1
    qs = factorize(p - 1).primes
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise ValueError(f"{p} is not prime")


def discrete_log(a: int, g: int, p: int) -> Optional[int]:
    """x in [0, p-1) with g**x == a (mod p), by baby-step giant-step."""
    a %= p
    n = p - 1
    step = iroot(n, 2) + 1
    baby = {}
    cur = 1
    for j in range(step):
        baby.setdefault(cur, j)
        cur = cur * g % p
    giant = pow(g, -step, p) if p > 2 else 1
    cur = a
    for i in range(step + 1):
        if cur in baby:
            return (i * step + baby[cur]) % max(n, 1)
        cur = cur * giant % p
    return None


def iter_coprime(m: int, start: int = 1, stop: Optional[int] = None) -> Iterator[int]:
    stop = m if stop is None else stop
    for a in range(start, stop + 1):
        if gcd(a, m) == 1:
            yield a


def lcm(*values: int) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), values, 1)
