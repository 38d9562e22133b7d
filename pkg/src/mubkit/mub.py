"""Maximal sets of N+1 mutually unbiased bases for N = p^m.

Basis N is the computational basis, basis 0 the Galois-Fourier (dual) basis,
and basis i < N is the common eigenbasis of U^i_l = alpha^i_l V_l^{i*l}.
All matrices are exact cyclotomic ``CMatrix`` objects with scale 1/sqrt(N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .cnum import CMatrix, CycloScalar, inv_sqrt_scale, squarefree_split
from .gf import GfSpec, gf_for
from .weylops import GaloisHW


class NoSolution(ValueError):
    pass


class NonUniqueSolution(ValueError):
    pass


@dataclass(frozen=True)
class AlphaTable:
    """alpha[i][l] = zeta_L**exps[i, l] with L = p (odd p) or 4 (p = 2)."""

    spec: GfSpec
    exps: np.ndarray
    L: int
    symmetric: bool

    def value(self, i: int, l: int) -> CycloScalar:
        return CycloScalar.root(self.L, int(self.exps[i, l]))

    def as_complex(self) -> np.ndarray:
        return np.exp(2j * np.pi * self.exps / self.L)

    def gamma_exp(self, e: int) -> int:
        """Exponent of zeta_L equal to gamma**e."""
        return (e * (self.L // self.spec.p)) % self.L


def alpha_table(spec: GfSpec, symmetric: bool = True, conjugate: bool = False,
                twist=None) -> AlphaTable:
    """Phase factors alpha^i_l obeying alpha^i_0 = alpha^0_l = 1 and the group law.

    conjugate: use alpha* (a valid choice only for p = 2, where gamma is real).
    twist: field elements b_i; multiplies alpha^i_l by gamma**(b_i * l).
    """
    N, p = spec.N, spec.p
    i = np.arange(N)[:, None]
    l = np.arange(N)[None, :]
    if p == 2:
        L = 4
        exps = np.zeros((N, N), dtype=np.int64)
        bits = [1 << n for n in range(spec.m)]
        digits = spec.digit_table  # digits[l, n] = l_n
        for a in range(spec.m):
            for b in range(spec.m):
                # integer label of j * 2^a * 2^b, used as the exponent of i
                lab = spec.mul(spec.mul(np.arange(N), bits[a]), bits[b])
                exps += lab[:, None] * (digits[:, a] * digits[:, b])[None, :]
        exps %= 4
    else:
        if conjugate:
            raise ValueError("the conjugate table violates the group law for odd p")
        if not symmetric:
            raise ValueError("only the symmetric odd-p convention is built in; use twist for others")
        L = p
        inv2 = spec.inv(2 % p)  # the field element 1+1 is the integer 2 for odd p
        ill = spec.mul(spec.mul(np.broadcast_to(i, (N, N)), l), l)
        exps = spec.char_exp(spec.neg(spec.mul(ill, inv2))) % p
    if conjugate:
        exps = (-exps) % L
    if twist is not None:
        b = np.asarray(twist, dtype=np.int64)
        tw = spec.char_exp(spec.mul(np.broadcast_to(b[:, None], (N, N)), np.broadcast_to(l, (N, N))))
        exps = (exps + tw * (L // p)) % L
    exps = np.asarray(exps, dtype=np.int64)
    sym = bool(np.array_equal(exps, exps[:, spec.neg_table]))
    return AlphaTable(spec, exps, L, sym)


def check_alpha(alpha: AlphaTable) -> bool:
    """Boundary conditions and the group law alpha_k alpha_l = alpha_{k+l} gamma^{i k l}."""
    s, e, L = alpha.spec, alpha.exps, alpha.L
    N = s.N
    if np.any(e[:, 0] % L) or np.any(e[0, :] % L):
        return False
    k = np.arange(N)
    for i in range(N):
        lhs = (e[i][:, None] + e[i][None, :]) % L
        ikl = s.char_exp(s.mul(s.mul(np.broadcast_to(k[:, None], (N, N)), i), np.broadcast_to(k[None, :], (N, N))))
        rhs = (e[i][s.add_table] + ikl * (L // s.p)) % L
        if not np.array_equal(lhs, rhs):
            return False
    return True


@dataclass
class MubSet:
    spec: GfSpec
    alpha: AlphaTable
    bases: list[CMatrix]
    hw: GaloisHW = field(repr=False)

    @property
    def N(self) -> int:
        return self.spec.N

    def U(self, i: int, l: int) -> CMatrix:
        return build_U(self.spec, self.alpha, i, l, self.hw)

    @cached_property
    def float_bases(self) -> list[np.ndarray]:
        return [b.to_float() for b in self.bases]

    def ket(self, i: int, k: int) -> np.ndarray:
        return self.float_bases[i][:, k]

    def projector(self, i: int, k: int) -> np.ndarray:
        v = self.ket(i, k)
        return np.outer(v, v.conj())


def build_U(spec: GfSpec, alpha: AlphaTable, i: int, l: int, hw: GaloisHW | None = None) -> CMatrix:
    hw = hw or GaloisHW(spec)
    if i == spec.N:
        return hw.V(0, l)
    V = hw.V(l, spec.mul(i, l))
    return V.scale(zeta_exp=int(alpha.exps[i, l]), zeta_order=alpha.L)


def basis_matrix(spec: GfSpec, alpha: AlphaTable, i: int) -> CMatrix:
    """Columns |e^i_k> with <l|e^i_k> = N^{-1/2} gamma^{-k l} (alpha^i_{-l})*."""
    N = spec.N
    if i == N:
        return CMatrix.identity(N)
    rat, rad = inv_sqrt_scale(N)
    l = np.arange(N)
    kl = spec.char_exp(spec.mul_table if N <= 1024 else spec.mul(l[:, None], l[None, :]))
    g = alpha.L // spec.p
    exps = (-kl * g - alpha.exps[i][spec.neg_table][:, None]) % alpha.L
    return CMatrix.from_exponents(exps, alpha.L, rat=rat, rad=rad)


def build_mub(spec: GfSpec, alpha: AlphaTable | None = None) -> MubSet:
    alpha = alpha or alpha_table(spec)
    bases = [basis_matrix(spec, alpha, i) for i in range(spec.N + 1)]
    return MubSet(spec, alpha, bases, GaloisHW(spec))


def mub_for(N: int, **alpha_kw) -> MubSet:
    spec = gf_for(N)
    return build_mub(spec, alpha_table(spec, **alpha_kw))


def exact_overlap_check(mub: MubSet) -> bool:
    """All |<e^i_k|e^j_l>|^2 equal delta_ij delta_kl + (1 - delta_ij)/N, exactly.

    Bases 0..N-1 share the scale 1/sqrt(N) and are stacked into one Gram
    matrix; the computational basis N is compared through |entries|^2.
    """
    N = mub.N
    B = mub.bases[0]
    num = np.concatenate([b.embed(B.L).num for b in mub.bases[:N]], axis=1)
    B = CMatrix(num, B.L, B.rat, B.rad)
    P = (B.dagger() @ B).abs2()
    blocks = np.kron(np.eye(N, dtype=np.int64), np.ones((N, N), dtype=np.int64))
    expect = np.eye(N * N, dtype=np.int64) * N + (1 - blocks)
    E = CMatrix.integer(expect).scalar_mul(Fraction(1, N))
    ones = CMatrix.integer(np.ones((N, N * N), dtype=np.int64)).scalar_mul(Fraction(1, N))
    return P.exact and P.exact_equal(E) and B.abs2().exact_equal(ones)


def complementary_observable(mub: MubSet, i: int) -> CMatrix:
    """Z_i = sum_k |e^i_k> gamma_N**k <e^i_k|, a period-N unitary."""
    N = mub.N
    k = np.arange(N)
    D = CMatrix.from_exponents(np.diag(k), N, np.eye(N, dtype=bool))
    C = mub.bases[i]
    return C @ D @ C.dagger()


def clifford(mub: MubSet, i: int) -> CMatrix:
    """C_i maps |k> to |e^i_k>."""
    return mub.bases[i]


def solve_intertwiner(N: int, pairs, tol: float = 1e-9) -> np.ndarray:
    """Unitary U with U g U^dag = g' for all (g, g'), unique up to a phase.

    The phase is fixed by making the largest-modulus entry of the first
    nonzero column real and positive.
    """
    I = np.eye(N)
    rows = []
    for g, gp in pairs:
        g = np.asarray(g, dtype=complex)
        gp = np.asarray(gp, dtype=complex)
        rows.append(np.kron(I, g.T) - np.kron(gp, I))  # row-major vec of U g - g' U
    A = np.vstack(rows) if rows else np.zeros((0, N * N))
    _, s, vh = np.linalg.svd(A) if A.shape[0] else (None, np.zeros(0), np.eye(N * N))
    s_full = np.zeros(N * N)
    s_full[: len(s)] = s
    scale = max(1.0, s_full.max(initial=0))
    null = np.flatnonzero(s_full < tol * scale)
    if len(null) == 0:
        raise NoSolution("no operator intertwines the given pairs")
    if len(null) > 1:
        raise NonUniqueSolution(f"solution space has dimension {len(null)}")
    U = vh[null[0]].conj().reshape(N, N)
    U *= math.sqrt(N / np.real(np.trace(U.conj().T @ U)))
    flat = U.T.ravel()
    idx = int(np.argmax(np.abs(flat) > 1e-9 * np.abs(flat).max()))
    col = U[:, idx // N]
    piv = col[np.argmax(np.abs(col))]
    U *= abs(piv) / piv
    if np.max(np.abs(U.conj().T @ U - I)) > 1e-8:
        raise NoSolution("null vector is not unitary; map does not preserve the algebra")
    return U


PAULI = {
    "1": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli2(a: str, b: str) -> np.ndarray:
    """sigma_a (first q-bit, low digit) times sigma_b (second q-bit)."""
    return np.kron(PAULI[b], PAULI[a])


# five period-4 observables (1+i)/2 (A - i B) for two q-bits, one per basis
TWO_QUBIT_PAIRS = [
    (("z", "1"), ("1", "z")),
    (("1", "x"), ("x", "x")),
    (("y", "1"), ("1", "y")),
    (("y", "z"), ("z", "x")),
    (("z", "y"), ("y", "x")),
]


def two_qubit_observables() -> list[np.ndarray]:
    out = []
    for A, B in TWO_QUBIT_PAIRS:
        out.append((1 + 1j) / 2 * (pauli2(*A) - 1j * pauli2(*B)))
    return out


def period5_map():
    """Generator images of the period-5 map cycling the five two-q-bit bases."""
    src = [pauli2("x", "1"), pauli2("z", "1"), pauli2("1", "x"), pauli2("1", "z")]
    dst = [pauli2("y", "y"), pauli2("1", "x"), pauli2("y", "1"), pauli2("x", "x")]
    return list(zip(src, dst))



def hadamard_of_basis(mub: MubSet, j: int) -> CMatrix:
    """[H_j]_{k,l} = sqrt(N) <e^N_k|e^j_l>, exact, for j < N."""
    s, f = squarefree_split(mub.N)
    return mub.bases[j].scale(Fraction(s), f)


def phase_matrix(mub: MubSet, j: int) -> CMatrix:
    """A_j = diag((alpha^j_{-k})^*), so that H_j = A_j G^{-1}."""
    N = mub.N
    e = (-mub.alpha.exps[j][mub.spec.neg_table]) % mub.alpha.L
    return CMatrix.from_exponents(np.diag(e), mub.alpha.L, np.eye(N, dtype=bool))
