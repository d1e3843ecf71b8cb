"""Sets of moduli q with t*q a k-th power in (Q0, 2Q0], and counts over them."""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, gcd, prod, sqrt
from numbers import Rational
from typing import List, Tuple, Union

from .modmath import factorize, iroot
from .power_congruence import delta_t

Real = Union[int, float, Fraction]


def as_fraction(x: Real) -> Fraction:
    """Exact rational for an int, Fraction, or float (floats convert exactly)."""
    if isinstance(x, Rational):
        return Fraction(x)
    return Fraction(float(x))


def f_t(t: int, k: int) -> int:
    """prod p**ceil(v/k) over t = prod p**v: the least s with t | s**k."""
    return prod(p ** (-(-v // k)) for p, v in factorize(t).factors)


def g_t(t: int, k: int) -> int:
    f = f_t(t, k)
    g, rem = divmod(f**k, t)
    if rem:
        raise ArithmeticError(f"f_t**k not divisible by t={t}")
    return g


def kth_powers_in(lo: Real, hi: Real, k: int) -> List[int]:
    """Bases s >= 1 with lo < s**k <= hi, compared exactly."""
    lo_i = floor(as_fraction(lo))
    hi_i = floor(as_fraction(hi))
    if hi_i < 1:
        return []
    first = iroot(max(lo_i, 0), k) + 1
    last = iroot(hi_i, k)
    return list(range(max(first, 1), last + 1))


@dataclass(frozen=True)
class PowerModuliFamily:
    """S_t(Q0) = {q : t*q is a k-th power in (Q0, 2Q0]} with its gadgets."""

    k: int
    Q0: Fraction
    t: int
    f_t: int
    g_t: int
    elements: Tuple[int, ...] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def lower(self) -> Fraction:
        return self.Q0 / self.t

    @property
    def upper(self) -> Fraction:
        return 2 * self.Q0 / self.t

    def size_bound(self) -> float:
        """(2 Q0)**(1/k) / f_t."""
        return float(2 * self.Q0) ** (1.0 / self.k) / self.f_t


def build_family(k: int, Q0: Real, t: int) -> PowerModuliFamily:
    if k < 2:
        raise ValueError("k must be >= 2")
    Q0 = as_fraction(Q0)
    if Q0 < 1 or t < 1:
        raise ValueError("need Q0 >= 1 and t >= 1")
    f = f_t(t, k)
    g = g_t(t, k)
    # t | s**k  <=>  f | s, so s = q1*f and q = s**k / t = q1**k * g
    lo_i = floor(Q0)
    hi_i = floor(2 * Q0)
    q1_lo = iroot(lo_i // f**k, k)
    while (q1_lo * f) ** k <= lo_i:
        q1_lo += 1
    q1_hi = iroot(hi_i // f**k, k)
    elements = tuple(q1**k * g for q1 in range(max(q1_lo, 1), q1_hi + 1))
    return PowerModuliFamily(k, Q0, t, f, g, elements)


def count_in_window(family: PowerModuliFamily, u: Real, m: int, l: int) -> int:
    """A_t(u, m, l): max over y in [Q0/t, 2Q0/t] of #{q in S_t cap (y, y+u] : q = l mod m}.

    Sliding a half-open window (y, y+u] right until y sits just below its
    first member never loses a member, so the maximum is attained with
    y = s - 0 for some member s and equals #{s' : s <= s' < s + u}. Every
    such y lies in the admissible range because S_t sits in (Q0/t, 2Q0/t].
    """
    if gcd(m, l) != 1:
        raise ValueError(f"gcd(m={m}, l={l}) must be 1")
    u = as_fraction(u)
    if u <= 0:
        raise ValueError("window width must be positive")
    pts = [q for q in family.elements if (q - l) % m == 0]
    best = 0
    for i, s in enumerate(pts):
        j = bisect_left(pts, s + u, lo=i)
        best = max(best, j - i)
    return best


def count_in_window_bruteforce(family: PowerModuliFamily, u: Real, m: int, l: int) -> int:
    """Oracle for :func:`count_in_window` sweeping y over all candidates s - u and s - 0."""
    u = as_fraction(u)
    pts = [q for q in family.elements if (q - l) % m == 0]
    lo, hi = family.lower, family.upper
    eps = Fraction(1, 10**9)
    cands = {lo, hi}
    for s in pts:
        cands.update((s - u, s - eps, s, s - u + eps))
    best = 0
    for y in cands:
        if lo <= y <= hi:
            best = max(best, sum(1 for q in pts if y < q <= y + u))
    return best


def divisor_gadget_sum(r: int, k: int) -> Fraction:
    """G(r) = sum over t | r of 1/f_t, exactly."""
    if r < 1:
        raise ValueError("r must be >= 1")
    return sum((Fraction(1, f_t(t, k)) for t in factorize(r).divisors()), Fraction(0))


def totient_ratio_power(r: int, k: int) -> Fraction:
    """(r / phi(r))**k."""
    return Fraction(r, factorize(r).phi) ** k


def family_sizes_over_divisors(r: int, k: int, Q0: Real) -> int:
    """sum over t | r of |S_t(Q0)|."""
    return sum(build_family(k, Q0, t).size for t in factorize(r).divisors())


@dataclass(frozen=True)
class ConditionC5Report:
    A: int
    delta: int
    factor: Fraction
    minimal_C: float

    def holds(self, C: float) -> bool:
        return self.A <= C * self.factor * self.delta


def verify_condition_C5(
    family: PowerModuliFamily, m: int, l: int, u: Real, N: int
) -> ConditionC5Report:
    """Both sides of A_t <= C (1 + u |S_t| / (m Q0/t)) delta_t and the least such C.

    Parameters must satisfy t <= sqrt(N), m <= sqrt(N)/t and
    m Q0/sqrt(N) <= u <= Q0/t.
    """
    u = as_fraction(u)
    t, Q0 = family.t, family.Q0
    rootN = sqrt(N)
    # exact forms: t^2 <= N, (m t)^2 <= N, (m Q0)^2 <= u^2 N, u <= Q0/t
    if t * t > N or (m * t) ** 2 > N:
        raise ValueError("need t <= sqrt(N) and m <= sqrt(N)/t")
    if (m * Q0) ** 2 > u * u * N or u > Q0 / t:
        raise ValueError(f"u must lie in [m Q0/sqrt(N), Q0/t] = [{float(m * Q0) / rootN}, {float(Q0 / t)}]")
    A = count_in_window(family, u, m, l)
    d = delta_t(family.k, family.g_t, m, l).count
    factor = 1 + Fraction(family.size, m) / (Q0 / t) * u
    if A == 0:
        minC = 0.0
    elif d == 0:
        minC = float("inf")
    else:
        minC = float(Fraction(A) / (factor * d))
    return ConditionC5Report(A, d, factor, minC)
