import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mubkit.gf import gf_for
from mubkit.hadamard import (TAO_EXPONENTS, BadParameter, DegenerateMobiusPoint, HMat, SizeMismatch, F4, F6, F6T,
                             autocorr, bicirculant_validate, biunimodular, bjorck_c6, bjorck_d, c6_bicirculant_rows,
                             circ3, circulant, defect, dephase, dephase_array, dft, dita, equivalent, family, fourier,
                             fourier_defect_formula, galois_fourier, gauss_sequence, h2_reducible, haagerup_invariants,
                             has_minus_one, is_biunimodular, is_hadamard, karlsson, karlsson_maps,
                             karlsson_sign_members, mu_pair, standard_muhm, standard_prime, tao_s6, tao_search,
                             unordered_pair_equivalent)

F2 = np.array([[1, 1], [1, -1]], dtype=complex)
unit = st.floats(0, 1, allow_nan=False)


def _rand_x(rng):
    x = rng.normal(size=3)
    return x / np.linalg.norm(x)


def _phase_perm(H, rng):
    N = H.shape[0]
    E1 = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, N)))
    E2 = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, N)))
    P1, P2 = np.eye(N)[rng.permutation(N)], np.eye(N)[rng.permutation(N)]
    return E2 @ P2 @ H @ P1 @ E1


# --- constructors ---------------------------------------------------------------------

def test_basic_checks():
    assert is_hadamard(F4(math.pi / 2), 1e-12)
    assert not is_hadamard(np.eye(4))
    assert is_hadamard(bjorck_c6())
    d = bjorck_d()
    assert abs(d - complex((1 - math.sqrt(3)) / 2, math.sqrt(math.sqrt(3) / 2))) < 1e-15
    assert abs(abs(d) - 1) < 1e-15


@given(unit, unit)
def test_two_parameter_families(a, b):
    assert is_hadamard(F6(a, b))
    assert is_hadamard(F6T(a, b))


@given(st.floats(-0.124, 0.125), st.floats(0, 2 * math.pi))
def test_one_parameter_families(a, t):
    assert is_hadamard(dita(a))
    assert is_hadamard(F4(t))


def test_dita_warns_outside_range():
    with pytest.warns(UserWarning):
        dita(0.3)


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6, 7, 8, 9, 10, 12])
def test_fourier(N):
    H = fourier(N)
    assert is_hadamard(H)
    assert (H.exact is not None) == (N in (2, 3, 4, 5, 7, 8, 9))


@pytest.mark.parametrize("N", [4, 8, 9, 25])
def test_galois_fourier(N):
    H = galois_fourier(gf_for(N))
    assert is_hadamard(H)
    assert H.exact is not None


def test_f4_zero_is_tensor_square():
    c = equivalent(F4(0), np.kron(F2, F2))
    assert c.verdict == "equivalent"


def test_tao_search_unique():
    found = tao_search()
    assert len(found) == 1 and np.array_equal(found[0], TAO_EXPONENTS)
    T = tao_s6().entries
    assert is_hadamard(T) and np.allclose(T, T.T)


@given(st.integers(0, 2 ** 32 - 1))
def test_karlsson_generic(seed):
    rng = np.random.default_rng(seed)
    x = _rand_x(rng)
    z1 = np.exp(1j * rng.uniform(0, 2 * np.pi))
    MA, MB = karlsson_maps(x)
    if MA.degenerate or MB.degenerate:
        return
    for H in karlsson_sign_members(*x, z1):
        assert is_hadamard(H, 1e-9)
        assert h2_reducible(H) and has_minus_one(H)


def test_karlsson_special_points():
    rng = np.random.default_rng(1)
    for sgn in (1, -1):
        z1, z2 = np.exp(1j * rng.uniform(0, 6, 2))
        assert is_hadamard(karlsson(0, 0, sgn, z1, free=(z2,)), 1e-9)
        z3, z4 = np.exp(1j * rng.uniform(0, 6, 2))
        assert is_hadamard(karlsson(sgn, 0, 0, 1, free=(z3, z4)), 1e-9)
    with pytest.raises(DegenerateMobiusPoint):
        karlsson(0, 0, 1, 1)


@pytest.mark.parametrize("s,t", [(0.1, 0.27), (0.33, 0.05), (0.0, 0.0)])
def test_karlsson_fourier_point(s, t):
    K = karlsson(0, 0, 1, np.exp(2j * np.pi * s), free=(np.exp(2j * np.pi * t),))
    c = equivalent(K, F6(s, t))
    assert c.verdict == "equivalent"
    assert np.abs(c.apply(K.entries) - F6(s, t).entries).max() < 1e-9


def test_karlsson_bad_parameters():
    with pytest.raises(BadParameter):
        karlsson(1, 1, 0, 1)
    with pytest.raises(BadParameter):
        karlsson(1, 0, 0, 2)


def test_family_dispatch():
    assert family("F6", 0.1, 0.2).family == "F6"
    with pytest.raises(BadParameter):
        family("nope")


# --- dephasing and equivalence --------------------------------------------------------

@given(st.integers(0, 2 ** 32 - 1))
def test_dephase_idempotent(seed):
    rng = np.random.default_rng(seed)
    H = F6(*rng.uniform(0, 1, 2))
    D = dephase(H)
    assert np.allclose(D.entries[0], 1) and np.allclose(D.entries[:, 0], 1)
    assert np.allclose(dephase(D).entries, D.entries)


def test_dephase_removes_row_phases():
    rng = np.random.default_rng(2)
    E = np.diag(np.exp(1j * rng.uniform(0, 6, 7)))
    assert np.allclose(dephase_array(E @ fourier(7).entries), fourier(7).entries)


def test_h2_reducible_reading():
    assert h2_reducible(F6(0.1, 0.2)) and has_minus_one(F6(0.1, 0.2))
    assert not h2_reducible(tao_s6()) and not has_minus_one(tao_s6())


def test_equivalence_examples():
    assert equivalent(F6(0, 0), np.kron(F2, fourier(3).entries)).verdict == "equivalent"
    assert equivalent(tao_s6(), F6(0, 0)).verdict == "inequivalent"
    c = equivalent(tao_s6(), tao_s6())
    assert c.verdict == "equivalent"
    assert np.abs(c.apply(tao_s6().entries) - tao_s6().entries).max() < 1e-12
    with pytest.raises(SizeMismatch):
        equivalent(fourier(5), fourier(6))


@given(st.integers(0, 2 ** 32 - 1))
def test_equivalence_witness_random(seed):
    rng = np.random.default_rng(seed)
    H = F6(*rng.uniform(0, 1, 2)).entries
    G = _phase_perm(H, rng)
    c = equivalent(H, G)
    assert c.verdict == "equivalent"
    assert np.abs(c.apply(H) - G).max() < 1e-7
    assert np.allclose(haagerup_invariants(H), haagerup_invariants(G), atol=1e-9)


def test_unordered_pair_symmetry():
    H = bjorck_c6().entries
    assert unordered_pair_equivalent(H, H.conj().T)
    assert unordered_pair_equivalent(H.conj().T, H)
    assert not unordered_pair_equivalent(tao_s6(), F6(0, 0))


def test_mu_pairs():
    for r, s in itertools.combinations(range(5), 2):
        assert mu_pair(standard_prime(5, r), standard_prime(5, s))
    for N in (2, 5, 6, 10):
        assert mu_pair(np.eye(N) * math.sqrt(N), fourier(N))
    assert mu_pair(F6(0, 0), bjorck_c6())


# --- defect -----------------------------------------------------------------------------

def test_defects():
    assert [defect(fourier(p)) for p in (2, 3, 5, 7)] == [0, 0, 0, 0]
    assert defect(fourier(4)) == 1 == fourier_defect_formula(2, 2)
    assert defect(fourier(8)) == 5 == fourier_defect_formula(2, 3)
    assert defect(fourier(9)) == 4 == fourier_defect_formula(3, 2)
    assert defect(tao_s6()) == 0


@given(unit, unit)
def test_f6_defect(a, b):
    assert defect(F6(a, b)) == 4


def test_defect_invariant_under_equivalence():
    rng = np.random.default_rng(5)
    H = dita(0.07).entries
    assert defect(H) == defect(_phase_perm(H, rng)) == 4


# --- sequences -----------------------------------------------------------------------------

def test_gauss_n5_biunimodular():
    seqs = [gauss_sequence(5, m, n) for m in range(1, 5) for n in range(5)]
    assert len(seqs) == 20
    for z in seqs:
        assert is_biunimodular(z)
        G = autocorr(z)
        assert abs(G[0] - 1) < 1e-10 and np.abs(G[1:]).max() < 1e-10


def test_circulant_iff_biunimodular():
    z = gauss_sequence(6, 1, 0)
    assert is_biunimodular(z)
    assert is_hadamard(circulant(z))
    w = z * np.exp(1j * np.array([0.3, 0, 0, 0, 0, 0]))
    assert not is_biunimodular(w)
    assert not is_hadamard(circulant(w))


def test_dft_unitary():
    z = np.random.default_rng(0).normal(size=7) + 0j
    assert abs(np.linalg.norm(dft(z)) - np.linalg.norm(z)) < 1e-12


def test_biunimodular_dispatch():
    assert biunimodular("check", gauss_sequence(7, 3, 2))
    with pytest.raises(BadParameter):
        biunimodular("nope")
    with pytest.raises(BadParameter):
        gauss_sequence(6, 2, 0)


# --- standard sets and bicirculants ------------------------------------------------------

def test_standard_prime_phase():
    E = standard_prime(3, 1).entries @ np.linalg.inv(fourier(3).entries)
    assert abs(E[2, 2] - np.exp(2j * np.pi / 3)) < 1e-12


@pytest.mark.parametrize("N,maximal", [(3, True), (5, True), (7, True), (9, False), (15, False)])
def test_standard_muhm(N, maximal):
    mats, rep = standard_muhm(N)
    assert len(mats) == N
    assert rep["maximal"] is maximal
    if N == 7:
        assert len(rep["pairs"]) == 21
    if not maximal:
        assert rep["failing_shifts"]


def test_bicirculants():
    H = bicirculant_validate(*c6_bicirculant_rows())
    assert isinstance(H, HMat) and is_hadamard(H)
    rng = np.random.default_rng(4)
    a, b = np.exp(1j * rng.uniform(0, 6, 3)), np.exp(1j * rng.uniform(0, 6, 3))
    rep = bicirculant_validate(a, b)
    assert isinstance(rep, dict) and rep["unitarity"] > 1e-6
    assert rep["commute"] < 1e-12
    assert np.allclose(circ3(a) @ circ3(b), circ3(b) @ circ3(a))


def test_json_form():
    d = F6(0.1, 0.2).to_json()
    assert d["family"] == "F6" and d["N"] == 6 and len(d["re"]) == 6
