import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mubkit.cnum import CMatrix
from mubkit.gf import gf_new
from mubkit.mub import (NoSolution, NonUniqueSolution, alpha_table, check_alpha, clifford, complementary_observable,
                        exact_overlap_check, hadamard_of_basis, mub_for, period5_map, phase_matrix, solve_intertwiner,
                        two_qubit_observables)
from mubkit.weylops import RingHW

from goldens import A4, H4


def _complementary(A, B, N, tol=1e-9):
    for a in range(1, N):
        for b in range(1, N):
            t = np.trace(np.linalg.matrix_power(A, a) @ np.linalg.matrix_power(B, b))
            if abs(t) > tol:
                return False
    return True


def test_printed_n4_hadamards_exact():
    m = mub_for(4)
    for j in range(4):
        assert hadamard_of_basis(m, j).exact_equal(CMatrix.from_exponents(H4[j], 4))


def test_printed_n4_phase_matrices_exact():
    m = mub_for(4)
    for j in range(4):
        want = CMatrix.from_exponents(np.diag(A4[j]), 4, np.eye(4, dtype=bool))
        assert phase_matrix(m, j).exact_equal(want)


def test_alpha_examples():
    a4 = alpha_table(gf_new(2, 2))
    conj = np.exp(-2j * np.pi * a4.exps[1] / a4.L)
    assert np.allclose(conj, [1, -1j, 1j, 1])
    a3 = alpha_table(gf_new(3))
    assert np.isclose(a3.as_complex()[1, 1], np.exp(2j * np.pi / 3))
    for p, m in [(2, 3), (3, 2), (5, 1)]:
        a = alpha_table(gf_new(p, m))
        assert np.allclose(a.as_complex()[:, 0], 1) and np.allclose(a.as_complex()[0, :], 1)
        assert check_alpha(a)


def test_conjugate_only_for_p2():
    with pytest.raises(ValueError):
        alpha_table(gf_new(3), conjugate=True)
    assert check_alpha(alpha_table(gf_new(2, 2), conjugate=True))


@pytest.mark.parametrize("N", [2, 3, 4, 5, 7, 8, 9])
def test_exact_unbiased(N):
    assert exact_overlap_check(mub_for(N))


@pytest.mark.parametrize("N", [3, 5, 9])
def test_twisted_phases_still_unbiased(N):
    b = [0] + list(np.random.default_rng(N).integers(0, N, N - 1))
    m = mub_for(N, twist=b)
    assert check_alpha(m.alpha)
    assert exact_overlap_check(m)


def test_broken_set_detected():
    m = mub_for(5)
    m.bases[2] = m.bases[1]
    assert not exact_overlap_check(m)


@pytest.mark.parametrize("N", [3, 4, 8])
def test_U_orthonormality(N):
    m = mub_for(N)
    s = m.spec
    U = {(i, l): m.U(i, l).to_float() for i in range(N) for l in range(N)}
    for i in range(N):
        assert np.allclose(U[i, 0], np.eye(N))
    for (i, k), (j, l) in itertools.product(U, repeat=2):
        t = np.trace(U[i, k].conj().T @ U[j, l])
        want = N if (k == l and s.mul(i, k) == s.mul(j, l)) else 0
        assert abs(t - want) < 1e-9


def test_period_two_for_gf4():
    U = mub_for(4).U(1, 1).to_float()
    assert np.allclose(U @ U, np.eye(4))


def test_dual_basis_is_inverse_fourier():
    B = mub_for(3).bases[0].to_float()
    k = np.arange(3)
    assert np.allclose(B, np.exp(-2j * np.pi * np.outer(k, k) / 3) / np.sqrt(3))


@pytest.mark.parametrize("N", [3, 4, 5])
def test_basis_diagonalizes_U(N):
    m = mub_for(N)
    for i in range(N + 1):
        C = clifford(m, i).to_float()
        for l in range(N):
            D = C.conj().T @ m.U(i, l).to_float() @ C
            assert np.allclose(D, np.diag(np.diag(D)))
    assert clifford(m, N).exact_equal(CMatrix.identity(N))


def test_complementary_observables_n4():
    m = mub_for(4)
    Z = [complementary_observable(m, i).to_float() for i in range(5)]
    assert np.allclose(Z[4], np.diag(1j ** np.arange(4)))
    for A in Z:
        assert np.allclose(np.linalg.matrix_power(A, 4), np.eye(4))
    for A, B in itertools.combinations(Z, 2):
        assert _complementary(A, B, 4)


def test_complementary_observables_n2():
    m = mub_for(2)
    Z = [complementary_observable(m, i).to_float() for i in range(3)]
    for A, B in itertools.combinations(Z, 2):
        assert _complementary(A, B, 2)


def test_two_qubit_table():
    obs = two_qubit_observables()
    for A in obs:
        assert np.allclose(np.linalg.matrix_power(A, 4), np.eye(4))
    for A, B in itertools.combinations(obs, 2):
        assert _complementary(A, B, 4)


def test_intertwiner_identity():
    hw = RingHW(3)
    U = solve_intertwiner(3, [(hw.X, hw.X), (hw.Z, hw.Z)])
    assert np.allclose(U, np.eye(3))


def test_intertwiner_fourier():
    hw = RingHW(5)
    U = solve_intertwiner(5, [(hw.X, hw.Z), (hw.Z, hw.X_pow(-1))])
    F = np.exp(2j * np.pi * np.outer(np.arange(5), np.arange(5)) / 5) / np.sqrt(5)
    assert np.allclose(U @ hw.X @ U.conj().T, hw.Z)
    ph = (U / F)[0, 0]
    assert np.allclose(U, ph * F) or np.allclose(U, ph * F.conj())


def test_period5_map():
    U = solve_intertwiner(4, period5_map())
    P = np.linalg.matrix_power(U, 5)
    assert np.allclose(P, P[0, 0] * np.eye(4))
    assert abs(abs(P[0, 0]) - 1) < 1e-9
    # it cycles the five bases of the two-q-bit table
    obs = two_qubit_observables()
    img = [U @ A @ U.conj().T for A in obs]
    for B in img:
        hits = [k for k, A in enumerate(obs)
                if max(abs(np.trace(np.linalg.matrix_power(A, a).conj().T @ B)) for a in range(1, 4)) > 3.99]
        assert len(hits) == 1


def test_intertwiner_errors():
    hw = RingHW(3)
    with pytest.raises(NonUniqueSolution):
        solve_intertwiner(3, [(hw.Z, hw.Z)])
    with pytest.raises(NoSolution):
        solve_intertwiner(3, [(hw.X, 2 * hw.X)])


@given(st.sampled_from([3, 5, 7, 9, 4, 8]), st.data())
def test_random_pair_overlaps(N, data):
    m = mub_for(N)
    i, j = data.draw(st.integers(0, N)), data.draw(st.integers(0, N))
    k, l = data.draw(st.integers(0, N - 1)), data.draw(st.integers(0, N - 1))
    o = abs(np.vdot(m.ket(i, k), m.ket(j, l))) ** 2
    want = (1.0 if k == l else 0.0) if i == j else 1 / N
    assert abs(o - want) < 1e-12
