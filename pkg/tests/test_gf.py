import numpy as np
import pytest
from hypothesis import given, strategies as st

from mubkit.gf import (AxiomViolation, NotPrime, ReduciblePolynomial, gf_arith, gf_char_exp, gf_for, gf_new,
                       gf_verify_axioms, prime_power, ring_mod)

# addition and multiplication tables of GF(4), elements 0, 1, 2 = x, 3 = x + 1
GF4_ADD = np.array([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]])
GF4_MUL = np.array([[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]])

SMALL = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)]


def test_gf4_tables():
    s = gf_new(2, 2)
    assert np.array_equal(s.add_table, GF4_ADD)
    assert np.array_equal(s.mul_table, GF4_MUL)
    assert s.mul(2, 2) == 3
    assert gf_arith(s, "add", 2, 3) == 1


def test_printed_products():
    assert gf_new(3, 3, (1, 2, 2)).mul(3, 9) == 25
    assert gf_new(2, 3).mul(2, 4) == 5


def test_gf27_inverses():
    s = gf_new(3, 3, (1, 2, 2))
    assert s.inv(3) == 13
    assert s.inv(9) == 17
    assert gf_arith(s, "inv", 3) == 13


def test_char_exp():
    assert gf_char_exp(gf_new(2, 2), 3) == 1
    assert gf_char_exp(gf_new(3, 3, (1, 2, 2)), 25) == 1
    assert gf_char_exp(gf_new(5), 0) == 0


@pytest.mark.parametrize("p,m", SMALL)
def test_axioms(p, m):
    assert all(gf_verify_axioms(gf_new(p, m)).values())


def test_axioms_gf27_custom_mu():
    assert all(gf_verify_axioms(gf_new(3, 3, (1, 2, 2))).values())


def test_ring_mod4_is_not_a_field():
    with pytest.raises(AxiomViolation, match="inverse"):
        gf_verify_axioms(ring_mod(4))


def test_errors():
    with pytest.raises(NotPrime):
        gf_new(6, 1)
    with pytest.raises(NotPrime):
        gf_for(12)
    with pytest.raises(ReduciblePolynomial):
        gf_new(2, 2, (1, 0))  # x^2 - 1 = (x + 1)^2 over GF(2)


def test_prime_power():
    assert prime_power(27) == (3, 3)
    assert prime_power(1024) == (2, 10)
    assert prime_power(6) is None
    assert prime_power(1) is None


@st.composite
def field_triples(draw):
    p, m = draw(st.sampled_from(SMALL))
    s = gf_new(p, m)
    el = st.integers(0, s.N - 1)
    return s, draw(el), draw(el), draw(el)


@given(field_triples())
def test_field_laws(t):
    s, a, b, c = t
    assert s.mul(a, s.add(b, c)) == s.add(s.mul(a, b), s.mul(a, c))
    assert s.add(a, s.neg(a)) == 0
    assert s.mul(a, 0) == 0
    assert s.sub(s.add(a, b), b) == a
    if b:
        assert s.mul(s.div(a, b), b) == a
        assert s.mul(b, s.inv(b)) == 1


@given(field_triples())
def test_char_exp_is_additive(t):
    s, a, b, _ = t
    assert s.char_exp(s.add(a, b)) == (s.char_exp(a) + s.char_exp(b)) % s.p


def test_large_field_lazy_inverse():
    s = gf_new(2, 17)
    for a in (1, 2, 12345, 2 ** 17 - 1):
        assert s.mul(a, s.inv(a)) == 1


def test_json_round_trip_fields():
    d = gf_new(2, 3).to_json()
    assert d["p"] == 2 and d["m"] == 3 and len(d["multMatrices"]) == 3


def test_poly_inverse_agrees_with_table():
    from mubkit.gf import _poly_inverse
    s = gf_new(3, 3, (1, 2, 2))
    assert all(_poly_inverse(s, a) == s.inv_table[a] for a in range(1, 27))
