"""Right-hand sides of the sieve bounds, regime comparison, constant fitting.

Formulas are evaluated in the log domain and exponentiated at the end so
that sweeps to N = 10^12 with Q up to N^(1/2) stay finite. Implied
constants are 1 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

DEFAULT_EPS = 0.05


def _lse(*logs: float) -> float:
    m = max(logs)
    return m + math.log(math.fsum(math.exp(x - m) for x in logs))


def _log(x) -> float:
    return math.log(x) if not isinstance(x, Fraction) else math.log(x.numerator) - math.log(x.denominator)


def kappa(k: int) -> int:
    return 2 ** (k - 1)


def loglog(x: float) -> float:
    return math.log(math.log(x))


# each log_* returns log(RHS / Z); set log_factors=False to drop loglog powers


def log_thm1(N, Q, k, eps=DEFAULT_EPS, log_factors=True) -> float:
    lN, lQ = _log(N), _log(Q)
    core = _lse((k + 1) * lQ, lN, (0.5 + eps) * lN + k * lQ)
    if log_factors:
        core += (k + 1) * math.log(loglog(10 * N * Q))
    return core


def thm2_upper_branch(N, Q) -> bool:
    """Q >= N^(7/24), tested exactly as Q^24 >= N^7 for rational inputs."""
    if isinstance(N, (int, Fraction)) and isinstance(Q, (int, Fraction)):
        return Fraction(Q) ** 24 >= Fraction(N) ** 7
    return 24 * _log(Q) >= 7 * _log(N)


def log_thm2_branches(N, Q, eps=DEFAULT_EPS) -> Tuple[float, float]:
    """(upper-branch, lower-branch) log values, both evaluated at (N, Q)."""
    lN, lQ = _log(N), _log(Q)
    upper = eps * lN + _lse(4 * lQ, 0.9 * lN + 1.2 * lQ)
    lower = lN + (6 / 7 + eps) * lQ
    return upper, lower


def log_thm2(N, Q, eps=DEFAULT_EPS) -> float:
    upper, lower = log_thm2_branches(N, Q, eps)
    return upper if thm2_upper_branch(N, Q) else lower


def log_zhao(N, Q, k, eps=DEFAULT_EPS) -> float:
    if k < 2:
        raise ValueError("Zhao's bound needs k >= 2")
    lN, lQ = _log(N), _log(Q)
    kap = kappa(k)
    inner = _lse(lN + (1 - 1 / kap) * lQ, (1 - 1 / kap) * lN + (1 + k / kap) * lQ)
    return _lse((k + 1) * lQ, inner + eps * lN)


def log_classical(N, Q, k) -> Tuple[float, float]:
    lN, lQ = _log(N), _log(Q)
    return _lse((k + 1) * lQ, lQ + lN), _lse(2 * k * lQ, lN)


def _check_positive(N, Q):
    if N < 1 or Q < 1:
        raise ValueError("need N >= 1 and Q >= 1")


def thm1_rhs(N, Q, k, epsilon=DEFAULT_EPS, Z=1.0) -> float:
    """(log log 10NQ)^(k+1) (Q^(k+1) + N + N^(1/2+eps) Q^k) Z."""
    _check_positive(N, Q)
    if k < 2:
        raise ValueError("k must be >= 2")
    return math.exp(log_thm1(N, Q, k, epsilon)) * Z


def thm2_rhs(N, Q, epsilon=DEFAULT_EPS, Z=1.0) -> float:
    """Cubic-moduli bound: N^eps (Q^4 + N^(9/10) Q^(6/5)) Z if Q >= N^(7/24), else N Q^(6/7+eps) Z."""
    _check_positive(N, Q)
    exact = isinstance(Q, (int, Fraction)) and isinstance(N, (int, Fraction))
    too_big = Fraction(Q) ** 2 > Fraction(N) if exact else Q * Q > N
    if too_big:
        raise ValueError("needs Q <= N^(1/2)")
    return math.exp(log_thm2(N, Q, epsilon)) * Z


def thm2_seam(N, Q, epsilon=DEFAULT_EPS, Z=1.0) -> Tuple[float, float]:
    """Both branches of thm2_rhs evaluated at the same (N, Q)."""
    up, lo = log_thm2_branches(N, Q, epsilon)
    return math.exp(up) * Z, math.exp(lo) * Z


def zhao_rhs(N, Q, k, epsilon=DEFAULT_EPS, Z=1.0) -> float:
    """(Q^(k+1) + (N Q^(1-1/kappa) + N^(1-1/kappa) Q^(1+k/kappa)) N^eps) Z, kappa = 2^(k-1)."""
    _check_positive(N, Q)
    return math.exp(log_zhao(N, Q, k, epsilon)) * Z


def classical_rhs(N, Q, k, Z=1.0) -> Tuple[float, float]:
    """((Q^(k+1) + QN) Z, (Q^(2k) + N) Z)."""
    _check_positive(N, Q)
    a, b = log_classical(N, Q, k)
    return math.exp(a) * Z, math.exp(b) * Z


# ---------------------------------------------------------------- exponents


def exponent_terms(k: int, eps: float, theta: float) -> Dict[str, float]:
    """Leading N-exponent of each bound at Q = N^theta (polylog factors dropped)."""
    kap = kappa(k)
    out = {
        "classical_a": max((k + 1) * theta, 1 + theta),
        "classical_b": max(2 * k * theta, 1.0),
        "zhao": max(
            (k + 1) * theta,
            1 + eps + (1 - 1 / kap) * theta,
            1 - 1 / kap + eps + (1 + k / kap) * theta,
        ),
        "thm1": max((k + 1) * theta, 1.0, 0.5 + eps + k * theta),
    }
    if k == 3:
        if theta >= 7 / 24:
            out["thm2"] = eps + max(4 * theta, 0.9 + 1.2 * theta)
        else:
            out["thm2"] = 1 + (6 / 7 + eps) * theta
    return out


def log_bounds(N, Q, k, eps, log_factors=False) -> Dict[str, float]:
    a, b = log_classical(N, Q, k)
    out = {
        "classical_a": a,
        "classical_b": b,
        "zhao": log_zhao(N, Q, k, eps),
        "thm1": log_thm1(N, Q, k, eps, log_factors),
    }
    if k == 3 and Q * Q <= N:
        out["thm2"] = log_thm2(N, Q, eps)
    return out


def zhao_second_term_crossover(k: int) -> float:
    """Exponent where the N^(1/2) Q^k term of thm1 meets the second term of Zhao's bound.

    Equals (kappa - 2) / (2 (k-1) kappa - 2k). For k <= 4 Zhao's first term
    still dominates there, so the true crossover sits a little higher.
    """
    kap = kappa(k)
    return (kap - 2) / (2 * (k - 1) * kap - 2 * k)


@dataclass
class RegimeRow:
    theta: float
    Q: float
    log10_bounds: Dict[str, float]
    exponents: Dict[str, float]
    winner: str
    improver: Optional[str]


@dataclass
class RegimeTable:
    N: float
    k: int
    eps: float
    rows: List[RegimeRow] = field(repr=False)

    def _window(self, attr: str, name: str) -> Optional[Tuple[float, float]]:
        thetas = [r.theta for r in self.rows if getattr(r, attr) == name]
        return (min(thetas), max(thetas)) if thetas else None

    def winner_window(self, name: str) -> Optional[Tuple[float, float]]:
        """Extent of grid exponents where ``name`` has the smallest value at this N."""
        return self._window("winner", name)

    def improvement_window(self, name: str) -> Optional[Tuple[float, float]]:
        """Extent of grid exponents where ``name`` has a strictly smaller leading exponent."""
        return self._window("improver", name)


def regime_table(
    N, k: int, epsilon: float = DEFAULT_EPS, steps: int = 2000, log_factors: bool = False,
    candidates: Optional[Sequence[str]] = None,
) -> RegimeTable:
    """Compare all bounds at Q = N^theta for theta on a uniform grid in [0, 1/2].

    ``winner`` is the argmin of the finite-N values; ``improver`` is the bound
    whose leading exponent is smaller than every other's by more than 1e-9
    (None on ties), i.e. the bound giving a power saving as N grows.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    lN = _log(N)
    rows = []
    for i in range(steps + 1):
        theta = 0.5 * i / steps
        Q = math.exp(theta * lN)
        Q = min(Q, math.sqrt(N))
        logs = log_bounds(float(N), Q, k, epsilon, log_factors)
        ex = exponent_terms(k, epsilon, theta)
        if candidates is not None:
            logs = {n: v for n, v in logs.items() if n in candidates}
            ex = {n: v for n, v in ex.items() if n in candidates}
        winner = min(logs, key=logs.get)
        best = min(ex, key=ex.get)
        rest = min(v for n, v in ex.items() if n != best)
        improver = best if ex[best] < rest - 1e-9 else None
        rows.append(RegimeRow(theta, Q, {n: v / math.log(10) for n, v in logs.items()}, ex, winner, improver))
    return RegimeTable(N, k, epsilon, rows)


def thm1_upper_crossover(N, k: int, epsilon: float = 0.0, steps: int = 20000) -> Optional[float]:
    """Largest theta where thm1 beats the classical and Zhao bounds at this N."""
    tab = regime_table(N, k, epsilon, steps, candidates=("classical_a", "classical_b", "zhao", "thm1"))
    w = tab.winner_window("thm1")
    return None if w is None else w[1]


# ---------------------------------------------------------------- fitting


@dataclass(frozen=True)
class FitResult:
    C: float
    argmax: int

    def __float__(self):
        return self.C


def fit_constant(measurements: Sequence[Tuple[float, float]]) -> FitResult:
    """Smallest C with lhs <= C rhs on every (lhs, rhs) pair, and where it is attained."""
    if not measurements:
        raise ValueError("no measurements to fit")
    best, arg = -math.inf, -1
    for i, (lhs, rhs) in enumerate(measurements):
        if not rhs > 0:
            raise ValueError("rhs must be positive")
        ratio = lhs / rhs
        if ratio > best:
            best, arg = ratio, i
    return FitResult(best, arg)


@dataclass
class BoundReport:
    N: int
    Q: float
    k: int
    epsilon: float
    Z: float
    rhs_classical_a: float
    rhs_classical_b: float
    rhs_zhao: float
    rhs_thm1: float
    rhs_thm2: Optional[float] = None
    lhs: Optional[float] = None

    def rhs(self) -> Dict[str, float]:
        out = {
            "classical_a": self.rhs_classical_a,
            "classical_b": self.rhs_classical_b,
            "zhao": self.rhs_zhao,
            "thm1": self.rhs_thm1,
        }
        if self.rhs_thm2 is not None:
            out["thm2"] = self.rhs_thm2
        return out

    def ratios(self) -> Dict[str, float]:
        if self.lhs is None:
            return {}
        return {n: self.lhs / v for n, v in self.rhs().items()}


def bound_report(N: int, Q, k: int, epsilon: float = DEFAULT_EPS, Z: float = 1.0, lhs=None) -> BoundReport:
    a, b = classical_rhs(N, Q, k, Z)
    t2 = thm2_rhs(N, Q, epsilon, Z) if k == 3 and Q * Q <= N else None
    return BoundReport(
        N, Q, k, epsilon, Z, a, b, zhao_rhs(N, Q, k, epsilon, Z), thm1_rhs(N, Q, k, epsilon, Z), t2, lhs
    )
