from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sievelab.modmath import factorize, is_prime
from sievelab.power_congruence import (
    count_power_roots_prime_power,
    delta_t,
    divisor_bound,
    enumerate_power_roots,
    kernel_size,
    kernel_size_prime_factor_bound,
    lift_power_roots,
    scan_delta_counts,
)


def scan(k, g, m, l):
    """Independent oracle: direct loop over residues."""
    return [x for x in range(m) if (pow(x, k, m) * g - l) % m == 0]


def test_prime_power_count_examples():
    assert count_power_roots_prime_power(3, 1, 5, 1) == 1
    assert count_power_roots_prime_power(2, 1, 2, 3) == 4
    assert count_power_roots_prime_power(3, 1, 7, 2) == 3


def test_prime_power_count_rejects():
    with pytest.raises(ValueError):
        count_power_roots_prime_power(2, 1, 9, 1)
    with pytest.raises(ValueError):
        count_power_roots_prime_power(2, 5, 5, 2)


def test_kernel_size_examples():
    for p in (3, 5, 11, 17, 23, 29):
        for k in range(1, 12):
            if gcd(k, p - 1) == 1:
                assert kernel_size(k, p, 1) == 1
    assert kernel_size(2, 3, 5) == 2
    # every unit mod 16 has order dividing 4, so the kernel is all 8 units
    assert kernel_size(4, 2, 4) == 8 == len([x for x in range(1, 16, 2) if pow(x, 4, 16) == 1])


def test_delta_examples():
    assert delta_t(2, 1, 8, 1).count == 4
    assert delta_t(3, 1, 7, 1).count == 3
    assert delta_t(3, 2, 4, 1).count == 0
    with pytest.raises(ValueError):
        delta_t(2, 1, 8, 2)


def test_enumerate_examples():
    assert enumerate_power_roots(1, 1, 5, 2) == [2]
    assert enumerate_power_roots(2, 1, 8, 1) == [1, 3, 5, 7]
    assert enumerate_power_roots(3, 1, 9, 1) == [1, 4, 7]
    with pytest.raises(ValueError):
        enumerate_power_roots(2, 1, 10**7 + 1, 1)


def test_lifting_matches_scan_on_prime_powers():
    for p in (2, 3, 5, 7, 11, 13):
        for e in range(1, 8):
            q = p**e
            if q > 20000:
                break
            for k in range(1, 9):
                for a in (1, 2, 3, 5, q - 1):
                    if a % p == 0:
                        continue
                    assert list(lift_power_roots(k, a, p, e)) == scan(k, 1, q, a), (k, a, p, e)


def test_large_prime_roots_via_discrete_log():
    # p > 4096 takes the cyclic-group path
    for p in (4099, 7919, 65537):
        for k in (2, 3, 4, 6, 8):
            for a in (1, 2, 3, 10, p - 1):
                roots = lift_power_roots(k, a, p, 1)
                assert all(pow(x, k, p) == a for x in roots)
                # count from group theory: d roots or none
                d = gcd(k, p - 1)
                expected = d if pow(a, (p - 1) // d, p) == 1 else 0
                assert len(roots) == expected


@given(st.integers(1, 6), st.integers(1, 400), st.integers(-50, 50), st.integers(-400, 400))
def test_delta_matches_scan(k, m, g, l):
    if gcd(l, m) != 1:
        with pytest.raises(ValueError):
            delta_t(k, g, m, l)
        return
    rc = delta_t(k, g, m, l)
    roots = scan(k, g, m, l)
    assert rc.count == len(roots)
    assert enumerate_power_roots(k, g, m, l) == roots
    if gcd(g, m) > 1:
        assert rc.count == 0


def test_histogram_oracle_agrees_with_loop():
    for k in (1, 2, 3, 5):
        for g in (1, 2, 7):
            for m in (1, 2, 9, 30, 97, 128):
                hist = scan_delta_counts(k, g, m)
                for l in range(m):
                    assert hist[l] == sum(1 for x in range(m) if pow(x, k, m) * g % m == l)


def test_kernel_bound_composite_k():
    for k in range(2, 13):
        for q in range(2, 10**4 + 1):
            f = factorize(q)
            if f.omega != 1:
                continue
            (p, e), = f.factors
            ks = kernel_size(k, p, e)
            assert ks <= k * k
            assert ks <= kernel_size_prime_factor_bound(k, p, e)


@given(st.integers(2, 5), st.integers(1, 3000), st.integers(1, 10**6), st.data())
def test_divisor_bound_and_sum_over_l(k, m, g, data):
    coprime = [l for l in range(1, m + 1) if gcd(l, m) == 1]
    l = data.draw(st.sampled_from(coprime))
    assert delta_t(k, g, m, l).count <= divisor_bound(k, m)
    hist = scan_delta_counts(k, g, m)
    assert sum(int(hist[x % m]) for x in coprime) <= m


def test_count_constant_in_e_when_p_does_not_divide_k():
    for k in (2, 3, 5, 6):
        for p in (2, 3, 5, 7, 11, 13, 31):
            if k % p == 0:
                continue
            counts = {kernel_size(k, p, e) for e in range(1, 10) if p**e <= 10**6}
            assert len(counts) == 1, (k, p, counts)
