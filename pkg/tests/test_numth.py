import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mubkit.numth import (RadicalValue, divisors, figure_table, g_exact, g_float, g_prime_power, g_two_p,
                          gauss_rule, gauss_sum_check, h, is_prime_trial, is_prime_via_g, negative_count, totient)


def test_printed_values():
    assert g_exact(7).is_zero()
    assert g_exact(4) == RadicalValue.sqrt(2) - 1
    assert float(g_exact(14)) == pytest.approx(g_two_p(7), abs=1e-12)
    assert float(g_exact(14)) == pytest.approx(-0.1116, abs=1e-4)
    assert h(1) == 1
    assert g_prime_power(3, 2) == RadicalValue.sqrt(3, 2) - 2


@pytest.mark.parametrize("N,n,want", [(6, 3, RadicalValue.sqrt(3)), (6, 2, RadicalValue()), (5, 2, RadicalValue.rational(1))])
def test_gauss_rule(N, n, want):
    assert gauss_rule(N, n) == want
    assert gauss_sum_check(N, n) == want


def test_gauss_rule_vs_sum():
    for N in range(2, 60):
        for n in range(1, N):
            gauss_sum_check(N, n, tol=1e-8)
    with pytest.raises(ValueError):
        gauss_sum_check(6, 6)


@pytest.mark.parametrize("N,want", [(97, True), (91, False), (49, False), (2, True), (4, False)])
def test_prime_via_g(N, want):
    assert is_prime_via_g(N) == want == is_prime_trial(N)


def test_g_errors():
    with pytest.raises(ValueError):
        g_exact(1)
    with pytest.raises(ValueError):
        g_float(1)


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (7, 2), (2, 5)])
def test_prime_power_formula(p, m):
    assert g_exact(p ** m) == g_prime_power(p, m)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17])
def test_two_p_formula(p):
    assert float(g_exact(2 * p)) == pytest.approx(g_two_p(p), abs=1e-12)


@given(st.integers(2, 300))
def test_exact_vs_float(N):
    assert abs(float(g_exact(N)) - g_float(N)) < 1e-6


@given(st.integers(1, 60), st.integers(1, 60))
def test_h_multiplicative(a, b):
    if math.gcd(a, b) == 1:
        assert h(a * b) == h(a) * h(b)


def test_negative_count_small():
    negs = [N for N in range(2, 101) if g_exact(N).sign() < 0]
    assert negative_count(100) == len(negs)
    assert 14 in negs and 6 not in negs


def test_totient_divisors():
    assert [totient(n) for n in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]
    assert divisors(36) == [1, 2, 3, 4, 6, 9, 12, 18, 36]


def test_figure_table():
    t = figure_table(20)
    assert len(t) == 19 and t[0][0] == 2
    assert all(v == 0 for N, v in t if is_prime_trial(N))


rad = st.dictionaries(st.sampled_from([1, 2, 3, 5, 6, 7, 10]), st.fractions(max_denominator=20), max_size=4)


@given(rad, rad, rad)
def test_radical_ring_laws(a, b, c):
    x, y, z = RadicalValue.of(a), RadicalValue.of(b), RadicalValue.of(c)
    assert x + y == y + x and x * y == y * x
    assert (x + y) * z == x * z + y * z
    assert x - x == 0
    assert float(x * y) == pytest.approx(float(x) * float(y), rel=1e-9, abs=1e-9)


def test_radical_basics():
    assert RadicalValue.sqrt(8) == RadicalValue.sqrt(2, 2)
    assert RadicalValue.sqrt(2) * RadicalValue.sqrt(2) == 2
    assert RadicalValue.sqrt(6) * RadicalValue.sqrt(10) == RadicalValue.sqrt(15, 2)
    assert RadicalValue().sign() == 0 and (RadicalValue.sqrt(2) - 1).sign() == 1
    assert RadicalValue.rational(Fraction(-1, 3)).sign() == -1
    with pytest.raises(TypeError):
        RadicalValue.sqrt(2) + 1.5
