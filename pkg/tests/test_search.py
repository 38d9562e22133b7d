import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mubkit.hadamard import F6, fourier, gauss_sequence
from mubkit.mub import mub_for
from mubkit.search import (IncompleteCatalog, basis_vectors, cluster_bases, constellation_search, extendability_probe,
                           grassmann_d2, grassmann_d2_planes, haar_d2, haar_d2_expected, haar_unitary, is_simplex,
                           unbiased_residual, unbiased_vector_search)


@pytest.fixture(scope="module")
def f5_catalog():
    return unbiased_vector_search(fourier(5), restarts=20000, seed=0, patience=500)


@given(st.integers(2, 6), st.integers(0, 2 ** 32 - 1))
def test_simplex_and_dual_route(N, seed):
    rng = np.random.default_rng(seed)
    U, V = haar_unitary(N, rng), haar_unitary(N, rng)
    assert is_simplex(basis_vectors(U))
    d = grassmann_d2(U, V)
    assert abs(d - grassmann_d2_planes(U, V)) < 1e-9
    assert -1e-12 <= d <= N - 1 + 1e-9


@given(st.integers(2, 6), st.integers(0, 2 ** 32 - 1))
def test_same_basis_distance_zero(N, seed):
    rng = np.random.default_rng(seed)
    U = haar_unitary(N, rng)
    V = U[:, rng.permutation(N)] * np.exp(1j * rng.uniform(0, 6, N))
    assert grassmann_d2(U, V) < 1e-12
    assert grassmann_d2_planes(U, V) < 1e-9


@pytest.mark.parametrize("N", [2, 3, 4, 5, 7, 8])
def test_mu_pairs_are_maximal(N):
    m = mub_for(N)
    for i in range(1, N + 1):
        assert abs(grassmann_d2(m.float_bases[0], m.float_bases[i]) - (N - 1)) < 1e-10


def test_haar_mean_small():
    mean, se = haar_d2(3, 2000, np.random.default_rng(0))
    assert abs(mean - haar_d2_expected(3)) < 3 * se
    assert haar_d2_expected(3) == 1.5


def test_f5_catalog_is_gauss(f5_catalog):
    cat = f5_catalog
    assert cat.complete and cat.N_v == 20 and cat.N_t == 4
    M = fourier(5).entries
    for z in cat.vectors:
        assert unbiased_residual(M, z) < 1e-10
    gauss = [gauss_sequence(5, m, n) / math.sqrt(5) for m in range(1, 5) for n in range(5)]
    for z in cat.vectors:
        assert any(abs(abs(np.vdot(g, z)) - 1) < 1e-8 for g in gauss)


def test_probe_prime(f5_catalog):
    pr = extendability_probe(f5_catalog)
    assert abs(pr["normalized"] - 1) < 1e-9
    assert pr["random_normalized"] == pytest.approx(5 / 6)


def test_probe_rejects_incomplete():
    cat = unbiased_vector_search(fourier(5), restarts=3, seed=0)
    assert not cat.complete
    with pytest.raises(IncompleteCatalog):
        extendability_probe(cat)


def test_search_deterministic():
    a = unbiased_vector_search(fourier(3), restarts=300, seed=11, patience=50)
    b = unbiased_vector_search(fourier(3), restarts=300, seed=11, patience=50)
    assert a.to_json() == b.to_json()
    assert a.N_v == 6 and a.N_t == 2


def test_cluster_bases_standard():
    m = mub_for(3)
    vecs = [m.ket(i, k) for i in range(3) for k in range(3)]
    assert cluster_bases(vecs) == [(0, 1, 2), (3, 4, 5), (6, 7, 8)]
    assert cluster_bases([]) == []


@pytest.mark.parametrize("shape,N", [((3, 3, 3, 3), 3), ((4, 4, 4), 4), ((2,) * 7, 6), ((5, 5, 5, 5), 5)])
def test_constellations_found(shape, N):
    r = constellation_search(shape, N, restarts=5, seed=0)
    assert r.success
    for a in range(len(r.sets)):
        for b in range(a + 1, len(r.sets)):
            assert np.abs(np.abs(r.sets[a].conj().T @ r.sets[b]) ** 2 - 1 / N).max() < 1e-6


def test_constellation_shape_check():
    with pytest.raises(ValueError):
        constellation_search((4, 4), 3)


def test_generic_fourier_family_census():
    cat = unbiased_vector_search(F6(0.07, 0.19), seed=0)
    assert cat.complete and cat.N_v == 48 and cat.N_t == 8
