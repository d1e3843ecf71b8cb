import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sievelab.bounds import (
    bound_report,
    classical_rhs,
    exponent_terms,
    fit_constant,
    log_bounds,
    zhao_second_term_crossover,
    regime_table,
    thm1_rhs,
    thm1_upper_crossover,
    thm2_rhs,
    thm2_seam,
    zhao_rhs,
)


# independent direct evaluations, no log domain


def direct_thm1(N, Q, k, eps, Z=1.0):
    return math.log(math.log(10 * N * Q)) ** (k + 1) * (Q ** (k + 1) + N + N ** (0.5 + eps) * Q**k) * Z


def direct_thm2(N, Q, eps, Z=1.0):
    if Q >= N ** (7 / 24):
        return N**eps * (Q**4 + N**0.9 * Q**1.2) * Z
    return N * Q ** (6 / 7 + eps) * Z


def direct_zhao(N, Q, k, eps, Z=1.0):
    kap = 2 ** (k - 1)
    return (Q ** (k + 1) + (N * Q ** (1 - 1 / kap) + N ** (1 - 1 / kap) * Q ** (1 + k / kap)) * N**eps) * Z


def test_thm1_examples():
    assert thm1_rhs(1, 1, 2, 0.0, 1.0) == pytest.approx(3 * math.log(math.log(10)) ** 3, rel=1e-12)
    assert thm1_rhs(10**4, 10, 3, 0.05) == pytest.approx(direct_thm1(10**4, 10, 3, 0.05), rel=1e-12)
    vals = [thm1_rhs(10**6, Q, 3) for Q in range(1, 200)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        thm1_rhs(10, 2, 1)


def test_thm2_examples():
    assert thm2_rhs(10**5, 1, 0.05) == pytest.approx(10**5, rel=1e-12)
    up, lo = thm2_seam(2**24, 2**7, 0.05)
    assert up == pytest.approx(2 ** (24 * 0.05) * (2**28 + 2 ** (24 * 0.9) * 2 ** (7 * 1.2)), rel=1e-12)
    assert lo == pytest.approx(2**24 * 2 ** (7 * (6 / 7 + 0.05)), rel=1e-12)
    # 2^7 = (2^24)^(7/24) exactly, so the upper branch applies
    assert thm2_rhs(2**24, 2**7, 0.05) == pytest.approx(up, rel=1e-12)
    assert thm2_rhs(2**24, 2**7 - 1, 0.05) == pytest.approx(direct_thm2(2**24, 2**7 - 1, 0.05), rel=1e-12)
    assert 50 > 10 ** (28 / 24)
    assert thm2_rhs(10**4, 50, 0.05) == pytest.approx(direct_thm2(10**4, 50, 0.05), rel=1e-12)
    with pytest.raises(ValueError):
        thm2_rhs(100, 11)


def test_zhao_and_classical_examples():
    with pytest.raises(ValueError):
        zhao_rhs(100, 2, 1)
    for Q in (1, 3, 17):
        for k in (2, 3):
            a, b = classical_rhs(Q, Q, k)
            assert a == pytest.approx(Q ** (k + 1) + Q**2, rel=1e-12)
            assert b == pytest.approx(Q ** (2 * k) + Q, rel=1e-12)
    N, Q, k = 10**6, 10**2, 3
    assert zhao_rhs(N, Q, k, 0.05) == pytest.approx(direct_zhao(N, Q, k, 0.05), rel=1e-12)
    a, b = classical_rhs(N, Q, k)
    assert a == pytest.approx(Q**4 + Q * N, rel=1e-12) and b == pytest.approx(Q**6 + N, rel=1e-12)
    assert thm1_rhs(N, Q, k, 0.05) == pytest.approx(direct_thm1(N, Q, k, 0.05), rel=1e-12)


@given(st.integers(1, 10**9), st.integers(1, 1000), st.integers(2, 5), st.floats(1e-6, 1e6))
def test_homogeneous_in_Z(N, Q, k, Z):
    assert thm1_rhs(N, Q, k, 0.05, Z) == pytest.approx(Z * thm1_rhs(N, Q, k, 0.05), rel=1e-12)
    assert zhao_rhs(N, Q, k, 0.05, Z) == pytest.approx(Z * zhao_rhs(N, Q, k, 0.05), rel=1e-12)
    a, b = classical_rhs(N, Q, k, Z)
    a1, b1 = classical_rhs(N, Q, k)
    assert a == pytest.approx(Z * a1, rel=1e-12) and b == pytest.approx(Z * b1, rel=1e-12)
    if Q * Q <= N:
        assert thm2_rhs(N, Q, 0.05, Z) == pytest.approx(Z * thm2_rhs(N, Q, 0.05), rel=1e-12)


def test_orderings_at_eps_zero():
    # k = 2, Q = N^(1/2): Zhao = 2 N^(3/2) + N^(5/4), classical_a = 2 N^(3/2), classical_b = N^2 + N
    for N in (10**4, 10**6, 10**8):
        Q = math.isqrt(N)
        z = zhao_rhs(N, Q, 2, 0.0)
        a, b = classical_rhs(N, Q, 2)
        assert z == pytest.approx(2 * N**1.5 + N**1.25, rel=1e-12)
        assert a < z < b


def test_report_and_ratios():
    rep = bound_report(1024, 4, 3, 0.05, Z=2.0, lhs=100.0)
    assert set(rep.rhs()) == {"classical_a", "classical_b", "zhao", "thm1", "thm2"}
    assert all(v > 0 for v in rep.rhs().values())
    for name, r in rep.ratios().items():
        assert r == pytest.approx(100.0 / rep.rhs()[name]) and math.isfinite(r)
    assert "thm2" not in bound_report(1024, 4, 2).rhs()


def test_fit_constant_examples():
    assert fit_constant([(1, 1)]).C == 1
    f = fit_constant([(2, 1), (1, 2)])
    assert (f.C, f.argmax) == (2, 0)
    with pytest.raises(ValueError):
        fit_constant([])
    with pytest.raises(ValueError):
        fit_constant([(1, 0)])


@given(st.lists(st.tuples(st.floats(0, 1e6), st.floats(1e-3, 1e6)), min_size=1, max_size=30), st.floats(1e-3, 1e3))
def test_fit_constant_scale_invariant(pairs, s):
    a = fit_constant(pairs)
    b = fit_constant([(x * s, y * s) for x, y in pairs])
    assert b.C == pytest.approx(a.C, rel=1e-12)


def test_regime_examples():
    N = 10**12
    for theta, name in ((0.18, "thm1"), (0.30, "thm2")):
        logs = log_bounds(float(N), N**theta, 3, 0.0)
        assert min(logs, key=logs.get) == name
        ex = exponent_terms(3, 0.0, theta)
        assert min(ex, key=ex.get) == name
    for k in (2, 3, 4, 5):
        # classical Q^(2k) + N takes over as Q -> 1, where it tends to (1 + N) Z
        tab = regime_table(N, k, 0.05, steps=200)
        assert all(r.winner == "classical_b" for r in tab.rows[1:4])
        assert classical_rhs(N, 1, k)[1] == pytest.approx(N + 1, rel=1e-12)


def test_improvement_windows_k3():
    tab = regime_table(10**12, 3, 0.0, steps=2000)
    lo, hi = tab.improvement_window("thm2")
    assert lo == pytest.approx(7 / 25, abs=1e-3) and hi == pytest.approx(1 / 3, abs=1e-3)
    lo, hi = tab.improvement_window("thm1")
    # Zhao's first term meets the thm1 term N^(1/2) Q^3 at 2/9
    assert lo == pytest.approx(1 / 6, abs=1e-3) and hi == pytest.approx(2 / 9, abs=1e-3)


# The finite-N crossovers approach the exponent where thm1 meets Zhao's
# *second* term only when that term dominates Zhao's bound there. For k = 3
# and k = 4 the first term N Q^(1-1/kappa) is larger, so the crossover tends
# to 2/9 and 4/25 respectively and these two cases fail by design.
@pytest.mark.parametrize("k", [3, 4, 5])
def test_crossover_converges_to_limit_exponent(k):
    ups = [thm1_upper_crossover(N, k, 0.0, steps=4000) for N in (10**6, 10**9, 10**12)]
    print(f"k={k} crossovers {ups} zhao second-term exponent {zhao_second_term_crossover(k):.4f}")
    assert abs(ups[-1] - zhao_second_term_crossover(k)) < 0.01
