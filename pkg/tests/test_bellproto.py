import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mubkit.bellproto import (NotNormalized, apply, bell_basis, bell_state, cerf_clone, dense_coding_sim,
                              galois_fourier2, reduced, swap_overlap, swap_sim, teleport_sim)
from mubkit.gf import gf_for
from mubkit.weylops import GaloisHW


def _ket(N, rng):
    v = rng.normal(size=N) + 1j * rng.normal(size=N)
    return v / np.linalg.norm(v)


def test_first_bell_state_n2():
    assert np.allclose(bell_state(gf_for(2), 0, 0), np.array([1, 0, 0, 1]) / np.sqrt(2))


@pytest.mark.parametrize("N", [2, 3, 4, 5, 8])
def test_bell_orthonormal(N):
    B = bell_basis(gf_for(N)).matrix
    assert np.allclose(B.conj().T @ B, np.eye(N * N))


@st.composite
def shifts(draw):
    N = draw(st.sampled_from([2, 3, 4, 5]))
    el = st.integers(0, N - 1)
    return gf_for(N), draw(el), draw(el), draw(el), draw(el)


@given(shifts())
def test_shift_permutes_bell_states(t):
    s, m, n, r, q = t
    hw = GaloisHW(s)
    lhs = apply(hw.V_float(r, q), bell_state(s, m, n), s.N, 1)
    ph = np.exp(2j * np.pi / s.p) ** s.char_exp(s.mul(s.neg(r), n))
    rhs = ph * bell_state(s, s.add(m, r), s.add(n, q))
    assert np.allclose(lhs, rhs)


def test_dense_coding_examples():
    assert dense_coding_sim(gf_for(3), 1, 2) == ((1, 2), pytest.approx(1.0))
    assert dense_coding_sim(gf_for(2), 0, 0) == ((0, 0), pytest.approx(1.0))


@pytest.mark.parametrize("N", [4, 8])
def test_dense_coding_all_messages(N):
    s = gf_for(N)
    for m, n in itertools.product(range(N), repeat=2):
        got, p = dense_coding_sim(s, m, n)
        assert got == (m, n) and abs(p - 1) < 1e-9


@pytest.mark.parametrize("N", [2, 5])
def test_teleport_random(N):
    br = teleport_sim(gf_for(N), _ket(N, np.random.default_rng(N)))
    assert len(br) == N * N
    for b in br:
        assert abs(b.probability - 1 / N ** 2) < 1e-9
        assert abs(b.fidelity - 1) < 1e-9


def test_teleport_basis_state():
    br = teleport_sim(gf_for(3), np.array([1, 0, 0]))
    assert all(abs(b.fidelity - 1) < 1e-12 for b in br)


def test_teleport_rejects_unnormalized():
    with pytest.raises(NotNormalized):
        teleport_sim(gf_for(3), np.array([1, 1, 0]))


def test_clone_extremes():
    N = 3
    s = gf_for(N)
    psi = _ket(N, np.random.default_rng(0))
    a = np.zeros((N, N))
    a[0, 0] = 1
    r = cerf_clone(s, a, psi)
    assert np.allclose(r.rho1, np.outer(psi, psi.conj()))
    assert np.allclose(r.rho3, np.eye(N) / N)
    u = np.full((N, N), 1 / N)
    b = galois_fourier2(s, u)
    delta = np.zeros((N, N))
    delta[0, 0] = 1
    assert np.allclose(b, delta)
    r = cerf_clone(s, u, psi)
    assert np.allclose(r.rho1, np.eye(N) / N)
    assert np.allclose(r.rho3, np.outer(psi, psi.conj()))


@pytest.mark.parametrize("N", [2, 3, 4])
def test_clone_random_matches_oracle(N):
    rng = np.random.default_rng(10 + N)
    a = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
    a /= np.linalg.norm(a)
    r = cerf_clone(gf_for(N), a, _ket(N, rng))
    assert r.residual1 < 1e-9 and r.residual3 < 1e-9
    # the partial-trace oracle, done independently on the 3-q-nit vector
    T = r.state13.reshape((N,) * 3, order="F")
    rho1 = np.einsum("abc,dbc->ad", T, T.conj())
    assert np.allclose(rho1, r.rho1)
    assert np.allclose(reduced(r.state13, N, [0]), rho1)


def test_clone_rejects_bad_amplitudes():
    with pytest.raises(NotNormalized):
        cerf_clone(gf_for(2), np.ones((2, 2)), np.array([1, 0]))


@pytest.mark.parametrize("N,m,n", [(2, 0, 0), (3, 1, 1), (4, 2, 3)])
def test_swap(N, m, n):
    br = swap_sim(gf_for(N), m, n)
    assert len(br) == N * N
    for b in br:
        assert abs(b.probability - 1 / N ** 2) < 1e-9
        assert abs(b.fidelity - 1) < 1e-9


def test_swap_overlap_magnitude():
    s = gf_for(3)
    for mp, np_ in itertools.product(range(3), repeat=2):
        assert abs(abs(swap_overlap(s, 1, 2, mp, np_)) - 1 / 3) < 1e-12
