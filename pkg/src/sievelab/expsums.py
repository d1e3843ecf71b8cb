"""Trigonometric sums, complete cubic sums, the Fejer-type kernel and
oscillatory integrals.

Rational arguments a/D are reduced mod 1 in integer arithmetic before any
transcendental function sees them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.special import sici, zeta

from . import kernels
from .quadrature import adaptive_gk

TWO_PI = 2.0 * math.pi
PI2_4 = math.pi**2 / 4


@dataclass(frozen=True)
class CoeffSequence:
    """Coefficients a_{M+1}, ..., a_{M+N}."""

    M: int
    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.coeffs, dtype=np.complex128)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("need a nonempty 1-d coefficient array")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def N(self) -> int:
        return self.coeffs.size

    @property
    def Z(self) -> float:
        return math.fsum((self.coeffs.real**2 + self.coeffs.imag**2).tolist())

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.M + 1, self.M + self.N + 1, dtype=np.int64)

    def scaled(self, c: complex) -> "CoeffSequence":
        return CoeffSequence(self.M, self.coeffs * c)

    def shifted(self, m: int) -> "CoeffSequence":
        """Same coefficients attached to indices shifted by m."""
        return CoeffSequence(self.M + m, self.coeffs)


def e(x):
    """exp(2 pi i x)."""
    return np.exp(1j * TWO_PI * np.asarray(x, dtype=np.float64))


def eval_exp_sum(seq: CoeffSequence, alpha) -> complex:
    """sum_n a_n e(alpha n); exact phase reduction when alpha is rational."""
    if isinstance(alpha, (int, Fraction)):
        alpha = Fraction(alpha)
        return complex(
            kernels.exp_sums_rational(seq.coeffs, seq.M, alpha.denominator, [alpha.numerator])[0]
        )
    alpha = float(alpha)
    phase = np.mod(seq.indices.astype(np.float64) * alpha, 1.0)
    terms = seq.coeffs * np.exp(1j * TWO_PI * phase)
    # numpy reduces contiguous arrays pairwise
    return complex(terms.sum())


def exp_sums_at(seq: CoeffSequence, D: int, numerators: Iterable[int]) -> np.ndarray:
    """S(a/D) for each a in ``numerators``, evaluated directly term by term."""
    return kernels.exp_sums_rational(seq.coeffs, seq.M, D, np.fromiter(numerators, dtype=np.int64))


def exp_sums_all_residues(seq: CoeffSequence, D: int) -> np.ndarray:
    """S(a/D) for a = 0..D-1 via one length-D FFT of the folded coefficients."""
    idx = seq.indices % D
    folded = np.bincount(idx, weights=seq.coeffs.real, minlength=D) + 1j * np.bincount(
        idx, weights=seq.coeffs.imag, minlength=D
    )
    # ifft(b)[a] = (1/D) sum_j b_j e(a j / D)
    return np.fft.ifft(folded) * D


def complete_cubic_sum(c: int, kcoef: int, l: int) -> complex:
    """sum_{d=1}^{c} e((kcoef d^3 + l d)/c), requires gcd(kcoef, c) = 1."""
    if c < 1:
        raise ValueError("c must be >= 1")
    if gcd(kcoef, c) != 1:
        raise ValueError(f"gcd(kcoef={kcoef}, c={c}) must be 1")
    return kernels.cubic_sum(c, kcoef, l)


def complete_cubic_sum_reference(c: int, kcoef: int, l: int) -> complex:
    """Term-by-term Python evaluation used to cross-check the kernels."""
    return complex(
        math.fsum(math.cos(TWO_PI * ((kcoef * d**3 + l * d) % c) / c) for d in range(1, c + 1)),
        math.fsum(math.sin(TWO_PI * ((kcoef * d**3 + l * d) % c) / c) for d in range(1, c + 1)),
    )


def kernel_phi(x):
    """phi(x) = (sin(pi x) / (2x))**2, with phi(0) = pi**2/4."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    small = np.abs(x) < 1e-8
    xs = x[~small]
    out[~small] = (np.sin(math.pi * xs) / (2 * xs)) ** 2
    # series: (pi/2)^2 (1 - (pi x)^2/3)
    out[small] = PI2_4 * (1 - (math.pi * x[small]) ** 2 / 3)
    return out if out.ndim else float(out)


def kernel_phi_hat(s):
    """Fourier transform of phi: (pi**2/4) max(1 - |s|, 0)."""
    s = np.asarray(s, dtype=np.float64)
    out = PI2_4 * np.maximum(1 - np.abs(s), 0.0)
    return out if out.ndim else float(out)


def _tail_cos_over_x2(omega: float, A: float) -> float:
    """int_A^inf cos(omega x) / x^2 dx, for A > 0."""
    if omega == 0:
        return 1.0 / A
    w = abs(omega)
    si, ci = sici(w * A)
    # integrate by parts: cos(wA)/A - w * int_{A}^{inf} sin(wx)/x dx
    return math.cos(w * A) / A - w * (math.pi / 2 - si)


def kernel_phi_hat_numeric(s: float, cutoff: float = 64.0, tol: float = 1e-10) -> float:
    """Fourier integral of phi computed by quadrature.

    int phi(x) e(sx) dx = 2 int_0^A phi cos(2 pi s x) dx + 2 int_A^inf ...;
    on the tail sin^2(pi x) cos(2 pi s x) splits into three cosines over
    x^2, each integrated in closed form through sine/cosine integrals.
    """
    w = TWO_PI * s
    head = adaptive_gk(
        lambda x: kernel_phi(x) * np.cos(w * x), 0.0, cutoff, tol=tol, initial_panels=int(cutoff)
    )
    # phi(x) cos(wx) = (1/(8 x^2)) [cos(wx) - (cos((w+2pi)x) + cos((w-2pi)x))/2]
    tail = (
        _tail_cos_over_x2(w, cutoff)
        - 0.5 * _tail_cos_over_x2(w + TWO_PI, cutoff)
        - 0.5 * _tail_cos_over_x2(w - TWO_PI, cutoff)
    ) / 8.0
    return 2.0 * (head + tail)


def poisson_lhs(sigma, cutoff: int = 10**4) -> float:
    """sum over all integers n of phi(n / sigma).

    Terms |n| <= cutoff are summed directly. For rational sigma = P/Q the
    weights sin^2(pi n Q / P) repeat with period P, so the remaining tail is
    a finite combination of Hurwitz zeta values and is added exactly.
    """
    sigma = Fraction(sigma)
    n = np.arange(1, cutoff + 1, dtype=np.float64)
    head = kernel_phi(0.0) + 2 * math.fsum(kernel_phi(n / float(sigma)).tolist())
    P = sigma.numerator
    # phi(n/sigma) = sigma^2 sin^2(pi n / sigma) / (4 n^2)
    tail = 0.0
    for r in range(P):
        n0 = cutoff + 1 + ((r - cutoff - 1) % P)  # first n > cutoff with n = r mod P
        w = math.sin(math.pi * float(Fraction(r) / sigma)) ** 2
        if w:
            tail += w * zeta(2.0, n0 / P) / P**2
    return head + 2 * float(sigma) ** 2 / 4 * tail


def poisson_rhs(sigma) -> float:
    """sigma * sum_n phi_hat(n sigma); finitely many nonzero terms."""
    sigma = float(sigma)
    nmax = int(math.floor(1 / sigma)) + 1
    n = np.arange(-nmax, nmax + 1, dtype=np.float64)
    return sigma * math.fsum(kernel_phi_hat(n * sigma).tolist())


@dataclass(frozen=True)
class OscillatoryIntegral:
    value: complex
    case: str
    bound_shape: Optional[float]

    @property
    def magnitude(self) -> float:
        return abs(self.value)


def oscillatory_integral(
    j: int, z: float, l: int, r_tilde: int, Q0: float, tol: float = 1e-8, max_panels: int = 1 << 20
) -> OscillatoryIntegral:
    """int_{Q0}^{2Q0} e(j y z - l y^(1/3) / r_tilde) dy and its bound shape.

    Bound shapes (constants omitted): 1/(|j| z) when l = 0 and j != 0;
    Q0^(2/3)/|l| when j = 0; sqrt(r_tilde) Q0^(5/6)/sqrt|l| otherwise.
    """
    if Q0 < 1:
        raise ValueError("Q0 must be >= 1")
    if j == 0 and l == 0:
        return OscillatoryIntegral(complex(Q0), "trivial", float(Q0))
    a, b = float(Q0), 2.0 * float(Q0)
    c1, c2 = j * z, l / r_tilde

    def f(y):
        return np.exp(1j * TWO_PI * (c1 * y - c2 * np.cbrt(y)))

    # about one panel per oscillation to start
    turns = abs(c1) * (b - a) + abs(c2) * (np.cbrt(b) - np.cbrt(a))
    val = adaptive_gk(f, a, b, tol=tol, max_panels=max_panels, initial_panels=max(1, int(turns) + 1))
    if l == 0:
        case, shape = "linear", 1.0 / (abs(j) * z)
    elif j == 0:
        case, shape = "cube-root", Q0 ** (2 / 3) / abs(l)
    else:
        case, shape = "mixed", math.sqrt(r_tilde) * Q0 ** (5 / 6) / math.sqrt(abs(l))
    return OscillatoryIntegral(complex(val), case, shape)


def linear_phase_integral(j: int, z: float, Q0: float) -> complex:
    """Closed form of int_{Q0}^{2Q0} e(j z y) dy."""
    w = j * z
    return (e(2 * Q0 * w) - e(Q0 * w)) / (1j * TWO_PI * w)


def cubic_sum_bound_shape(c: int, l: int, eps: float = 0.05) -> float:
    """c^(1/2 + eps) gcd(l, c)."""
    return c ** (0.5 + eps) * gcd(l, c)


def fit_ratio(values: Sequence[float], shapes: Sequence[float]) -> float:
    """Largest value/shape; the least constant C with value <= C*shape throughout."""
    return max(v / s for v, s in zip(values, shapes))
