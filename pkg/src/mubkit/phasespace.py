"""Discrete phase space: Weyl coefficients, tomography and the Wigner basis.

Grids are indexed ``grid[m, n]`` with m the shift label and n the phase
label of V_m^n (``GaloisHW.V(m, n)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cnum import CMatrix, DimensionMismatch, kron_low_first
from .gf import GfSpec
from .mub import MubSet, alpha_table, build_mub
from .weylops import GaloisHW


class NotDensityMatrix(ValueError):
    pass


class DegenerateLine(ValueError):
    pass


# --- Weyl expansion ---------------------------------------------------------

def weyl_analyze(hw: GaloisHW, X) -> np.ndarray | list:
    """x[m, n] = tr(V_m^n^dag X); exact CycloScalar entries for exact input."""
    N = hw.N
    if isinstance(X, CMatrix) and X.exact:
        return [[(hw.V(m, n).dagger() @ X).trace() for n in range(N)] for m in range(N)]
    X = np.asarray(X.to_float() if isinstance(X, CMatrix) else X, dtype=complex)
    if X.shape != (N, N):
        raise DimensionMismatch(f"expected {N}x{N}, got {X.shape}")
    out = np.empty((N, N), dtype=complex)
    for m in range(N):
        for n in range(N):
            out[m, n] = np.vdot(hw.V_float(m, n), X)  # sum conj(V) X = tr(V^dag X)
    return out


def weyl_synthesize(hw: GaloisHW, grid) -> np.ndarray:
    N = hw.N
    out = np.zeros((N, N), dtype=complex)
    for m in range(N):
        for n in range(N):
            out += hw.V_float(m, n) * complex(grid[m][n])
    return out / N


def weyl_synthesize_exact(hw: GaloisHW, grid) -> CMatrix:
    N = hw.N
    acc = None
    for m in range(N):
        for n in range(N):
            term = hw.V(m, n).scalar_mul(grid[m][n])
            acc = term if acc is None else acc + term
    return acc.scalar_mul(Fraction(1, N))


def ubar(mub: MubSet, grid: np.ndarray) -> np.ndarray:
    """Relabeled coefficients: xbar[i, l] = alpha^i_l* x[l, i l] (i < N), x[0, l] (i = N)."""
    s = mub.spec
    N = s.N
    a = mub.alpha.as_complex()
    out = np.empty((N + 1, N), dtype=complex)
    for i in range(N):
        for l in range(N):
            out[i, l] = np.conj(a[i, l]) * grid[l, s.mul(i, l)]
    out[N] = grid[0]
    return out


# --- tomography -----------------------------------------------------------------

@dataclass
class Tomographer:
    mub: MubSet
    _U: dict = field(default_factory=dict, repr=False)

    def U(self, i: int, l: int) -> np.ndarray:
        key = (i, l)
        if key not in self._U:
            self._U[key] = self.mub.U(i, l).to_float()
        return self._U[key]

    def probabilities(self, rho: np.ndarray) -> np.ndarray:
        check_density(rho)
        out = np.empty((self.mub.N + 1, self.mub.N))
        for i, B in enumerate(self.mub.float_bases):
            out[i] = np.einsum("ki,kl,li->i", B.conj(), rho, B).real
        return out

    def rbar(self, probs: np.ndarray) -> np.ndarray:
        """rbar[i, l] = sum_k gamma**(-k l) p(i, k) = tr(U^i_l^dag rho)."""
        s = self.mub.spec
        k = np.arange(s.N)
        G = np.exp(-2j * np.pi / s.p * s.char_exp(s.mul(k[:, None], k[None, :])))  # [k, l]
        return probs @ G

    def reconstruct(self, probs: np.ndarray) -> np.ndarray:
        N = self.mub.N
        r = self.rbar(probs)
        rho = np.eye(N, dtype=complex)
        for i in range(N + 1):
            for l in range(1, N):
                rho += self.U(i, l) * r[i, l]
        return rho / N


def check_density(rho: np.ndarray, tol: float = 1e-9):
    rho = np.asarray(rho)
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise NotDensityMatrix("not hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise NotDensityMatrix("trace is not 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise NotDensityMatrix("not positive")


def tomography(mub: MubSet, rho: np.ndarray) -> np.ndarray:
    return Tomographer(mub).probabilities(rho)


def reconstruct(mub: MubSet, probs: np.ndarray) -> np.ndarray:
    return Tomographer(mub).reconstruct(probs)


def random_density(N: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = rank or N
    A = rng.normal(size=(N, rank)) + 1j * rng.normal(size=(N, rank))
    rho = A @ A.conj().T
    return rho / np.trace(rho).real


# --- Wigner basis ---------------------------------------------------------------

@dataclass
class WignerBasis:
    mub: MubSet
    W: np.ndarray  # shape (N, N, N, N): W[m, n] is the operator W_{m,n}

    @property
    def N(self) -> int:
        return self.mub.N

    @property
    def symmetric(self) -> bool:
        return self.mub.alpha.symmetric


def wigner_basis(mub: MubSet) -> WignerBasis:
    """W_{m,n} = |e^N_m><e^N_m| + sum_{i<N} |e^i_{i m - n}><e^i_{i m - n}| - 1."""
    s = mub.spec
    N = s.N
    P = np.stack([np.stack([mub.projector(i, k) for k in range(N)]) for i in range(N + 1)])
    W = np.empty((N, N, N, N), dtype=complex)
    I = np.eye(N)
    for m in range(N):
        for n in range(N):
            acc = P[N, m] - I
            for i in range(N):
                acc = acc + P[i, s.sub(s.mul(i, m), n)]
            W[m, n] = acc
    return WignerBasis(mub, W)


def twisted_wigner(spec: GfSpec, b) -> WignerBasis:
    """Wigner-type basis from alpha^i_l gamma^{b_i l} (b_0 = 0)."""
    return wigner_basis(build_mub(spec, alpha_table(spec, twist=b)))


def twisted_seed(spec: GfSpec, b, hw: GaloisHW | None = None) -> np.ndarray:
    """(1/N) sum_{j,k} gamma^{2 b_i k} S_k D_j S_k, S_k the shift, D_j the clock.

    The twist belongs to the basis i = j / (2 k) whose projector carries the
    term V_{2k}^{j}; the k = 0 terms are untwisted.
    """
    hw = hw or GaloisHW(spec)
    N = spec.N
    two = spec.add(1, 1)
    out = np.zeros((N, N), dtype=complex)
    for j in range(N):
        for k in range(N):
            bi = 0 if k == 0 else b[spec.div(j, spec.mul(two, k))]
            ph = np.exp(2j * np.pi / spec.p * spec.char_exp(spec.mul(spec.mul(two, bi), k)))
            S = hw.V_float(k, 0)
            out += ph * S @ hw.V_float(0, j) @ S
    return out / N


def wigner_analyze(basis: WignerBasis, rho: np.ndarray) -> np.ndarray:
    """r[m, n] = tr(rho W_{m,n})."""
    r = np.einsum("mnij,ji->mn", basis.W, rho)
    return r.real if np.allclose(rho, np.asarray(rho).conj().T, atol=1e-12) else r


def wigner_synthesize(basis: WignerBasis, grid: np.ndarray) -> np.ndarray:
    return np.einsum("mn,mnij->ij", grid, basis.W) / basis.N


def marginal(basis: WignerBasis, a: int, b: int, c: int) -> np.ndarray:
    """(1/N) sum of W_{m,n} over the line a m = b n + c."""
    s = basis.mub.spec
    if a == 0 and b == 0:
        raise DegenerateLine("a = b = 0 does not define a line")
    N = s.N
    out = np.zeros((N, N), dtype=complex)
    for m in range(N):
        for n in range(N):
            if s.mul(a, m) == s.add(s.mul(b, n), c):
                out += basis.W[m, n]
    return out / N


def marginal_projector(mub: MubSet, a: int, b: int, c: int) -> np.ndarray:
    s = mub.spec
    if b != 0:
        return mub.projector(s.div(a, b), s.div(c, b))
    if a == 0:
        raise DegenerateLine("a = b = 0 does not define a line")
    return mub.projector(s.N, s.div(c, a))


def mub_expectations(basis: WignerBasis, i: int, k: int, tol: float = 1e-10) -> np.ndarray:
    """grid[m, n] = <e^i_k|W_{m,n}|e^i_k>, checked to be 0 or 1."""
    v = basis.mub.ket(i, k)
    g = np.einsum("i,mnij,j->mn", v.conj(), basis.W, v)
    r = np.rint(g.real)
    if np.max(np.abs(g - r)) > tol or not set(np.unique(r)) <= {0.0, 1.0}:
        raise AssertionError("expectation values are not 0/1")
    return r.astype(int)


def expected_indicator(spec: GfSpec, i: int, k: int) -> np.ndarray:
    N = spec.N
    g = np.zeros((N, N), dtype=int)
    for m in range(N):
        for n in range(N):
            if i == N:
                g[m, n] = int(k == m)
            else:
                g[m, n] = int(spec.add(k, n) == spec.mul(i, m))
    return g


def parity(spec: GfSpec) -> np.ndarray:
    """sum_k |-k><k|."""
    N = spec.N
    P = np.zeros((N, N))
    P[spec.neg_table, np.arange(N)] = 1
    return P


def wigner_criteria(basis: WignerBasis, tol: float = 1e-10) -> dict:
    mub = basis.mub
    s = mub.spec
    N = s.N
    W = basis.W
    hw = mub.hw
    rep = {}
    rep["W1"] = max(np.abs(W[m, n] - W[m, n].conj().T).max() for m in range(N) for n in range(N)) < tol
    rep["W2"] = max(abs(np.trace(W[m, n]) - 1) for m in range(N) for n in range(N)) < tol
    flat = W.reshape(N * N, N, N)
    gram = np.einsum("aij,bji->ab", flat, flat)
    rep["W3"] = np.abs(gram - N * np.eye(N * N)).max() < tol
    w4 = 0.0
    for m in range(N):
        for n in range(N):
            V = hw.V_float(m, n)
            w4 = max(w4, np.abs(V @ W[0, 0] @ V.conj().T - W[m, n]).max())
    rep["W4"] = w4 < tol
    w5 = 0.0
    lines = [(0, 1, c) for c in range(N)] + [(1, b, c) for b in range(N) for c in range(N)]
    for a, b, c in lines:
        w5 = max(w5, np.abs(marginal(basis, a, b, c) - marginal_projector(mub, a, b, c)).max())
    rep["W5"] = w5 < tol
    rep["ergodic"] = np.abs(W.sum(axis=(0, 1)) - N * np.eye(N)).max() < tol
    if s.p == 2 or not basis.symmetric:
        rep["W6"] = None  # reported only: parity form needs odd p and symmetric phases
    else:
        P = parity(s)
        fac = kron_low_first(*([parity_prime(s.p)] * s.m))
        sq = np.abs(W[0, 0] @ W[0, 0] - np.eye(N)).max()
        rep["W6"] = bool(np.abs(W[0, 0] - P).max() < tol and np.abs(P - fac).max() < tol and sq < tol)
    return rep


def parity_prime(p: int) -> np.ndarray:
    P = np.zeros((p, p))
    P[(-np.arange(p)) % p, np.arange(p)] = 1
    return P


def spectrum_multiplicities(W: np.ndarray, tol: float = 1e-10):
    """(n_plus, n_minus) for W with W^2 = 1, from the trace; None if W^2 != 1."""
    N = W.shape[0]
    if np.abs(W @ W - np.eye(N)).max() > tol:
        return None
    t = np.trace(W).real
    return int(round((N + t) / 2)), int(round((N - t) / 2))


def gamma_phase(mub: MubSet, m: int, n: int) -> complex:
    """Gamma_{m,n} = 1 for m = 0, else alpha^{n/m}_m."""
    if m == 0:
        return 1.0 + 0j
    s = mub.spec
    return complex(mub.alpha.as_complex()[s.div(n, m), m])


def wigner_operator_form(mub: MubSet, i1: int, i2: int) -> np.ndarray:
    """(1/N) sum gamma^{-i1 n + i2 m} Gamma_{m,n} V_m^n."""
    s = mub.spec
    N = s.N
    out = np.zeros((N, N), dtype=complex)
    for m in range(N):
        for n in range(N):
            e = s.char_exp(s.add(s.neg(s.mul(i1, n)), s.mul(i2, m)))
            out += np.exp(2j * np.pi * e / s.p) * gamma_phase(mub, m, n) * mub.hw.V_float(m, n)
    return out / N


def qubit_sign_patterns(basis: WignerBasis) -> dict:
    """Coefficients (c_x, c_y, c_z) with W = (1 + c_x sx + c_y sy + c_z sz)/2 for N = 2."""
    sx = np.array([[0, 1], [1, 0]])
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1, -1])
    out = {}
    for m in range(2):
        for n in range(2):
            Wmn = basis.W[m, n]
            out[(m, n)] = tuple(int(round(np.trace(Wmn @ S).real)) for S in (sx, sy, sz))
    return out


def clifford_relabel(spec: GfSpec, i: int, m: int, n: int) -> tuple[int, int]:
    """Phase-space point (i m - n, m) reached from (m, n) by basis change i < N."""
    if i == spec.N:
        return int(m), int(n)
    return int(spec.sub(spec.mul(i, m), n)), int(m)


def clifford_covariance(basis: WignerBasis, i: int) -> float:
    """max |C_i^dag W_{m,n} C_i - W_{i m - n, m}| over the grid (odd p, symmetric phases)."""
    s = basis.mub.spec
    C = basis.mub.float_bases[i]
    err = 0.0
    for m in range(s.N):
        for n in range(s.N):
            a, b = clifford_relabel(s, i, m, n)
            err = max(err, float(np.abs(C.conj().T @ basis.W[m, n] @ C - basis.W[a, b]).max()))
    return err
