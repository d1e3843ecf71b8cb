"""Farey fractions with k-th power denominators and the counting functions
K(Delta), P(alpha), Pi(delta, y) built on them.

Points and windows are exact rationals. Pi involves y^(1/3) and Q0^(2/3)
and is evaluated in floating point; its integral over y is assembled from
exact interval intersections rather than sampled.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd, ceil
from typing import Iterable, List, Optional, Sequence, Tuple

from .moduli_sets import Real, as_fraction, kth_powers_in

POINT_GUARD = 10**7
DEFAULT_EPS = 0.05


def farey_points(Q0: Real, k: int) -> List[Fraction]:
    """Sorted a/q with q a k-th power in (Q0, 2Q0], 1 <= a <= q, gcd(a, q) = 1."""
    moduli = [s**k for s in kth_powers_in(Q0, 2 * as_fraction(Q0), k)]
    if sum(moduli) > POINT_GUARD:
        raise ValueError("point count exceeds the guard")
    pts = [Fraction(a, q) for q in moduli for a in range(1, q + 1) if gcd(a, q) == 1]
    pts.sort()
    return pts


def _circular(points: Sequence[Fraction]) -> List[Fraction]:
    """points in [0, 1) followed by the same points shifted by +1."""
    base = sorted(p - floor(p) for p in points)
    return base + [p + 1 for p in base]


def spacing_count(points: Sequence[Fraction], Delta: Real) -> int:
    """K(Delta) = max over alpha of #{r : ||alpha_r - alpha|| <= Delta}.

    Some maximizing window has a point on its left edge, so it suffices to
    count, for each point p, the points in the closed arc [p, p + 2 Delta].
    """
    Delta = as_fraction(Delta)
    if not 0 < Delta <= Fraction(1, 2):
        raise ValueError("Delta must lie in (0, 1/2]")
    n = len(points)
    if n == 0:
        return 0
    if 2 * Delta >= 1:
        return n
    ring = _circular(points)
    best, j = 0, 0
    for i in range(n):
        j = max(j, i)
        while j < i + n and ring[j] <= ring[i] + 2 * Delta:
            j += 1
        best = max(best, j - i)
    return best


def spacing_count_grid(points: Sequence[Fraction], Delta: Real, steps_per_delta: int = 100) -> int:
    """Brute-force K(Delta): evaluate the window count on the grid alpha = j*Delta/steps."""
    Delta = as_fraction(Delta)
    n = len(points)
    if n == 0:
        return 0
    h = Delta / steps_per_delta
    base = sorted(p - floor(p) for p in points)
    ext = [p - 1 for p in base] + base + [p + 1 for p in base]
    lo = hi = 0
    best = 0
    j = 0
    while True:
        alpha = j * h
        if alpha >= 1:
            break
        while lo < len(ext) and ext[lo] < alpha - Delta:
            lo += 1
        while hi < len(ext) and ext[hi] <= alpha + Delta:
            hi += 1
        best = max(best, min(hi - lo, n))
        j += 1
    return best


class FareySystem:
    """Sorted point set with window counting P(alpha)."""

    def __init__(self, points: Iterable[Fraction]):
        self.points = sorted(p - floor(p) for p in points)

    @classmethod
    def cubic(cls, Q0: Real, k: int = 3) -> "FareySystem":
        return cls(farey_points(Q0, k))

    def __len__(self):
        return len(self.points)

    def count(self, alpha: Real, Delta: Real) -> int:
        """#{points with distance to alpha mod 1 at most Delta}."""
        alpha, Delta = as_fraction(alpha), as_fraction(Delta)
        n = len(self.points)
        if n == 0:
            return 0
        if 2 * Delta >= 1:
            return n
        a = alpha - floor(alpha)
        lo, hi = a - Delta, a + Delta
        pts = self.points
        total = bisect_right(pts, min(hi, Fraction(1))) - bisect_left(pts, max(lo, Fraction(0)))
        if lo < 0:
            total += len(pts) - bisect_left(pts, lo + 1)
        if hi >= 1:
            total += bisect_right(pts, hi - 1)
        return total


def p_alpha(Q0: Real, k: int, alpha: Real, Delta: Real, system: Optional[FareySystem] = None) -> int:
    """P(alpha): number of Farey points (q in S(Q0)) in [alpha - Delta, alpha + Delta] mod 1."""
    Delta = as_fraction(Delta)
    if not 0 < Delta <= Fraction(1, 2):
        raise ValueError("Delta must lie in (0, 1/2]")
    system = system or FareySystem.cubic(Q0, k)
    return system.count(alpha, Delta)


def continued_fraction(x: Fraction) -> List[int]:
    x = Fraction(x)
    out = []
    while True:
        a = floor(x)
        out.append(a)
        frac = x - a
        if frac == 0:
            return out
        x = 1 / frac


def convergents(x: Real):
    """Yield the continued-fraction convergents (p, q) of x."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    for a in continued_fraction(as_fraction(x)):
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield p1, q1


def dirichlet_approx(alpha: Real, tau: Real) -> Tuple[int, int, Fraction]:
    """alpha = b/r + z with r <= tau, gcd(b, r) = 1, |z| <= 1/(r tau).

    Takes the last convergent with denominator <= tau; the next one has
    denominator > tau, which gives |z| < 1/(r q_next) < 1/(r tau).
    """
    alpha, tau = as_fraction(alpha), as_fraction(tau)
    if tau < 1:
        raise ValueError("tau must be >= 1")
    best = None
    for p, q in convergents(alpha):
        if q > tau:
            break
        best = (p, q)
    b, r = best
    return b, r, alpha - Fraction(b, r)


def check_dirichlet(alpha: Real, tau: Real, b: int, r: int, z: Fraction) -> bool:
    alpha, tau = as_fraction(alpha), as_fraction(tau)
    return (
        1 <= r <= tau
        and gcd(b, r) == 1
        and Fraction(b, r) + z == alpha
        and abs(z) * r * tau <= 1
    )


@dataclass(frozen=True)
class FareyContext:
    """alpha = b/r + z near a Farey system at scale Q0 with parameters tau, Delta."""

    Q0: float
    tau: float
    Delta: float
    b: int
    r: int
    z: float
    k: int = 3

    def __post_init__(self):
        if not 0 < self.Delta <= 0.5:
            raise ValueError("Delta must lie in (0, 1/2]")
        if not 1 <= self.tau <= self.Delta ** -0.5 * (1 + 1e-12):
            raise ValueError("need 1 <= tau <= Delta^(-1/2)")
        if not (1 <= self.r <= self.tau * (1 + 1e-12) and gcd(self.b, self.r) == 1):
            raise ValueError("need r <= tau and gcd(b, r) = 1")
        if abs(self.z) * self.r * self.tau > 1 + 1e-12:
            raise ValueError("need |z| <= 1/(r tau)")

    @property
    def alpha(self) -> float:
        return self.b / self.r + self.z

    @property
    def reduced(self) -> bool:
        """Whether z >= Delta (the case the propositions address)."""
        return self.z >= self.Delta

    def delta_default(self) -> float:
        """Q0 Delta / z."""
        return self.Q0 * self.Delta / self.z


def _check_delta_range(ctx: FareyContext, delta: float) -> None:
    lo = ctx.Q0 * ctx.Delta / ctx.z
    if not (lo * (1 - 1e-12) <= delta <= ctx.Q0 * (1 + 1e-12)):
        raise ValueError(f"delta={delta} outside [Q0 Delta / z, Q0] = [{lo}, {ctx.Q0}]")


def _count_congruent(lo: float, hi: float, c: int, r: int, exclude_zero: bool = True) -> int:
    """#{m in [lo, hi] integer : m = c mod r}, optionally excluding m = 0."""
    if hi < lo:
        return 0
    n = floor((hi - c) / r) - ceil((lo - c) / r) + 1
    n = max(n, 0)
    if exclude_zero and lo <= 0 <= hi and c % r == 0:
        n -= 1
    return n


def _q_halfwidth(ctx: FareyContext, delta: float, c6: float) -> float:
    return c6 * delta / ctx.Q0 ** (2 / 3)


def pi_count(ctx: FareyContext, delta: float, y: float, c6: float = 1.0) -> int:
    """Pi(delta, y): pairs (q, m) with q in I(delta, y), m in J(delta, y) nonzero, m = -b q^3 (mod r)."""
    if ctx.z <= 0:
        raise ValueError("pi_count needs z > 0")
    _check_delta_range(ctx, delta)
    w = _q_halfwidth(ctx, delta, c6)
    cy = y ** (1 / 3)
    rz = ctx.r * ctx.z
    jlo, jhi = (y - 4 * delta) * rz, (y + 4 * delta) * rz
    total = 0
    for q in range(ceil(cy - w), floor(cy + w) + 1):
        total += _count_congruent(jlo, jhi, (-ctx.b * q**3) % ctx.r, ctx.r)
    return total


def pi_integral(ctx: FareyContext, delta: float, c6: float = 1.0) -> float:
    """int_{Q0}^{2Q0} Pi(delta, y) dy.

    Pi is a sum of indicator products: q counts for y in [(q-w)^3, (q+w)^3]
    and m counts for y in [m/(rz) - 4 delta, m/(rz) + 4 delta]; the integral
    is the total length of the pairwise intersections with [Q0, 2Q0].
    """
    if ctx.z <= 0:
        raise ValueError("pi_integral needs z > 0")
    _check_delta_range(ctx, delta)
    a, b = float(ctx.Q0), 2.0 * float(ctx.Q0)
    w = _q_halfwidth(ctx, delta, c6)
    rz = ctx.r * ctx.z
    r = ctx.r
    parts = []
    q_lo = ceil(a ** (1 / 3) - w)
    q_hi = floor(b ** (1 / 3) + w)
    for q in range(q_lo, q_hi + 1):
        ylo = max(a, (q - w) ** 3)
        yhi = min(b, (q + w) ** 3)
        if yhi <= ylo:
            continue
        c = (-ctx.b * q**3) % r
        # m with [m/rz - 4 delta, m/rz + 4 delta] meeting [ylo, yhi]
        m_lo = ceil((ylo - 4 * delta) * rz)
        m_hi = floor((yhi + 4 * delta) * rz)
        m = m_lo + ((c - m_lo) % r)
        while m <= m_hi:
            if m != 0:
                lo = max(ylo, m / rz - 4 * delta)
                hi = min(yhi, m / rz + 4 * delta)
                if hi > lo:
                    parts.append(hi - lo)
            m += r
    return math.fsum(parts)


def pi_integral_grid(ctx: FareyContext, delta: float, c6: float = 1.0, panels: int = 1 << 12) -> float:
    """Midpoint-rule integral of pi_count on a fixed grid (cross-check)."""
    a = float(ctx.Q0)
    h = a / panels
    return h * math.fsum(pi_count(ctx, delta, a + (i + 0.5) * h, c6) for i in range(panels))


def pi_bound_shape(ctx: FareyContext, delta: float, c6: float = 1.0) -> float:
    """1 + (1/delta) int Pi dy, the bound for P(b/r + z) up to the constant."""
    return 1.0 + pi_integral(ctx, delta, c6) / delta


def prop1_rhs(ctx: FareyContext, eps: float = DEFAULT_EPS) -> float:
    """1 + Delta^(-eps) (Q0^(4/3) Delta + Q0 r z)."""
    if ctx.z < ctx.Delta:
        raise ValueError("needs z >= Delta")
    Q0, D = ctx.Q0, ctx.Delta
    return 1.0 + D ** -eps * (Q0 ** (4 / 3) * D + Q0 * ctx.r * ctx.z)


def prop2_rhs(ctx: FareyContext, eps: float = DEFAULT_EPS) -> float:
    """Delta^(-eps) (Q0^(4/3) Delta + Q0^(1/3) Delta r^(-1/3) / z + Delta^(-1/2) (r z)^(1/2))."""
    if ctx.z < ctx.Delta:
        raise ValueError("needs z >= Delta")
    Q0, D, r, z = ctx.Q0, ctx.Delta, ctx.r, ctx.z
    return D ** -eps * (
        Q0 ** (4 / 3) * D + Q0 ** (1 / 3) * D * r ** (-1 / 3) / z + D**-0.5 * math.sqrt(r * z)
    )


def min_combination(ctx: FareyContext) -> Tuple[float, float]:
    """(min{Q0 r z, Q0^(1/3) Delta r^(-1/3) / z}, Q0^(2/3) Delta^(1/2) r^(1/3))."""
    Q0, D, r, z = ctx.Q0, ctx.Delta, ctx.r, ctx.z
    lhs = min(Q0 * r * z, Q0 ** (1 / 3) * D * r ** (-1 / 3) / z)
    return lhs, Q0 ** (2 / 3) * D**0.5 * r ** (1 / 3)


def choose_tau_delta(N: int, Q0: Real) -> Tuple[float, float]:
    """The (tau, Delta) pair used for the cubic bound at scale Q0.

    tau = N^(6/5) Q0^(-4/5), Delta = 1/N when N^(7/8) <= Q0 <= N^(3/2);
    tau = Q0^(4/7), Delta = Q0^(-8/7) when 1 <= Q0 < N^(7/8).
    Branch tests are exact: Q0^8 >= N^7 and Q0^2 <= N^3.
    """
    Qf = as_fraction(Q0)
    if Qf < 1 or Qf**2 > Fraction(N) ** 3:
        raise ValueError("need 1 <= Q0 <= N^(3/2)")
    lN, lQ = math.log(N), math.log(Qf)
    if Qf**8 >= Fraction(N) ** 7:
        tau = math.exp(1.2 * lN - 0.8 * lQ)
        Delta = 1.0 / N
    else:
        tau = math.exp(lQ * 4 / 7)
        Delta = math.exp(-lQ * 8 / 7)
    # 1 <= tau <= Delta^(-1/2), up to rounding
    assert 1 - 1e-12 <= tau <= Delta**-0.5 * (1 + 1e-12), (tau, Delta)
    return tau, Delta


def max_reduced_count(system: FareySystem, Delta: Real, tau: Real) -> Tuple[int, Tuple[int, int, Fraction]]:
    """max over r <= tau, (b, r) = 1, Delta <= z <= 1/(tau r) of P(b/r + z), with a maximizer.

    P(b/r + z) is a step function of z that is upper semicontinuous (closed
    windows), so its maximum on the closed z-range sits at an endpoint or
    where a window edge touches a point: z = p - b/r -+ Delta mod 1.
    """
    Delta, tau = as_fraction(Delta), as_fraction(tau)
    pts = system.points
    best = (-1, None)
    for r in range(1, floor(tau) + 1):
        zmax = 1 / (tau * r)
        if zmax < Delta:
            continue
        for b in range(r):
            if gcd(b, r) != 1:
                continue
            base = Fraction(b, r)
            cands = {Delta, zmax}
            # points p with p - base in [0, zmax + Delta] (mod 1)
            lo, hi = base, base + zmax + Delta
            for shift in (0, 1):
                i0 = bisect_left(pts, lo - shift)
                i1 = bisect_right(pts, hi - shift)
                for p in pts[i0:i1]:
                    d = p + shift - base
                    for zc in (d - Delta, d + Delta):
                        if Delta <= zc <= zmax:
                            cands.add(zc)
            for zc in cands:
                c = system.count(base + zc, Delta)
                if c > best[0]:
                    best = (c, (b, r, zc))
    return best


def admissible_contexts(Q0: float, Delta: float, tau: float, count: int, rng, k: int = 3):
    """Random contexts satisfying r <= tau, gcd(b, r) = 1, Delta <= z <= 1/(r tau)."""
    out = []
    rmax = floor(tau)
    tries = 0
    while len(out) < count and tries < 100 * count:
        tries += 1
        r = int(rng.integers(1, rmax + 1))
        zmax = 1 / (r * tau)
        if zmax < Delta:
            continue
        b = int(rng.integers(0, r))
        if gcd(b, r) != 1:
            continue
        z = float(math.exp(rng.uniform(math.log(Delta), math.log(zmax))))
        out.append(FareyContext(Q0, tau, Delta, b, r, z, k))
    return out
