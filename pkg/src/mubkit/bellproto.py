"""Generalized Bell states and protocol simulations on q-nit state vectors.

Multi-q-nit kets are float arrays of length N**n; q-nit j carries the digit
of weight N**j, so ``psi.reshape((N,)*n, order="F")`` puts q-nit j on axis j.
Conjugation of kets is plain complex conjugation in the computational basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cnum import CMatrix, inv_sqrt_scale
from .gf import GfSpec
from .weylops import GaloisHW


class NotNormalized(ValueError):
    pass


def as_tensor(psi: np.ndarray, N: int) -> np.ndarray:
    n = round(math.log(len(psi), N))
    return np.asarray(psi, dtype=complex).reshape((N,) * n, order="F")


def as_vector(t: np.ndarray) -> np.ndarray:
    return t.reshape(-1, order="F")


def product(*kets: np.ndarray) -> np.ndarray:
    """|a, b, ...> with the first ket on q-nit 0."""
    out = np.ones(1, dtype=complex)
    for k in kets:
        out = np.kron(k, out)
    return out


def apply(op: np.ndarray, psi: np.ndarray, N: int, qnit: int) -> np.ndarray:
    t = as_tensor(psi, N)
    t = np.moveaxis(np.tensordot(op, t, axes=([1], [qnit])), 0, qnit)
    return as_vector(t)


def reduced(psi: np.ndarray, N: int, keep) -> np.ndarray:
    """Reduced density matrix on the q-nits in ``keep`` (in that order)."""
    t = as_tensor(psi, N)
    n = t.ndim
    keep = list(keep)
    rest = [a for a in range(n) if a not in keep]
    # C-order reshape of reversed kept axes puts the first kept q-nit lowest
    M = np.transpose(t, keep[::-1] + rest).reshape(N ** len(keep), -1)
    return M @ M.conj().T


def bell_matrix(spec: GfSpec, m: int, n: int) -> CMatrix:
    """Amplitudes <a, b|B_{m,n}> as an exact N x N grid (a on the first q-nit)."""
    N = spec.N
    k = np.arange(N)
    km = spec.add(k, m)
    exps = np.zeros((N, N), dtype=np.int64)
    mask = np.zeros((N, N), dtype=bool)
    exps[k, km] = spec.char_exp(spec.mul(km, n))
    mask[k, km] = True
    rat, rad = inv_sqrt_scale(N)
    return CMatrix.from_exponents(exps, spec.p, mask, rat, rad)


def bell_state(spec: GfSpec, m: int, n: int) -> np.ndarray:
    """N^{-1/2} sum_k |k, k+m> gamma**((k+m) n) as a length N**2 vector."""
    return bell_matrix(spec, m, n).to_float().reshape(-1, order="F")


@dataclass
class BellBasis:
    spec: GfSpec
    matrix: np.ndarray  # column m*N + n is |B_{m,n}>
    conjugation: str = "complex"


def bell_basis(spec: GfSpec) -> BellBasis:
    N = spec.N
    cols = [bell_state(spec, m, n) for m in range(N) for n in range(N)]
    return BellBasis(spec, np.stack(cols, axis=1))


def _V(spec, hw, m, n):
    return hw.V(m, n).to_float()


def dense_coding_sim(spec: GfSpec, m: int, n: int, hw: GaloisHW | None = None):
    """Encode (m, n) with 1 x V_m^n on |B_00>, decode by a Bell measurement."""
    hw = hw or GaloisHW(spec)
    N = spec.N
    psi = apply(_V(spec, hw, m, n), bell_state(spec, 0, 0), N, 1)
    probs = np.abs(bell_basis(spec).matrix.conj().T @ psi) ** 2
    best = int(np.argmax(probs))
    return (best // N, best % N), float(probs[best])


@dataclass
class TeleportBranch:
    m: int
    n: int
    probability: float
    fidelity: float


def teleport_sim(spec: GfSpec, psi: np.ndarray, hw: GaloisHW | None = None) -> list[TeleportBranch]:
    """psi on q-nit 1, |B_00> on q-nits (0, 2); Bell measurement on (0, 1)."""
    hw = hw or GaloisHW(spec)
    N = spec.N
    psi = np.asarray(psi, dtype=complex)
    if abs(np.linalg.norm(psi) - 1) > 1e-9:
        raise NotNormalized("input ket must be normalized")
    B = bell_matrix(spec, 0, 0).to_float()
    full = np.einsum("ac,b->abc", B, psi)  # axes: q-nits 0, 1, 2
    out = []
    for m in range(N):
        for n in range(N):
            bra = bell_matrix(spec, m, n).to_float().conj()
            rest = np.einsum("ab,abc->c", bra, full)
            p = float(np.vdot(rest, rest).real)
            fixed = _V(spec, hw, m, n) @ rest / math.sqrt(p)
            out.append(TeleportBranch(m, n, p, float(abs(np.vdot(psi, fixed)) ** 2)))
    return out


def galois_fourier2(spec: GfSpec, a: np.ndarray) -> np.ndarray:
    """b_{m,n} = (1/N) sum gamma**(n m' - m n') a_{m',n'}.

    With this sign the second clone is sum |b_{m,n}|^2 V_m^n|psi><psi|V_m^n^dag;
    the opposite sign gives the same weights at (-m, -n).  Both agree for p = 2.
    """
    N = spec.N
    g = np.exp(2j * np.pi / spec.p)
    k = np.arange(N)
    M = g ** spec.char_exp(spec.mul(k[:, None], k[None, :]))  # gamma**(x y)
    return np.einsum("mq,np,pq->mn", M.conj(), M, a) / N


@dataclass
class CloneResult:
    rho1: np.ndarray
    rho2: np.ndarray
    rho3: np.ndarray
    b: np.ndarray
    residual1: float
    residual3: float
    state13: np.ndarray


def cerf_state(spec: GfSpec, a: np.ndarray, hw: GaloisHW | None = None) -> np.ndarray:
    """sum_{m,n} a_{m,n} (1 x V x 1 x V^dag)|B_00, B_00> on q-nits 0..3."""
    hw = hw or GaloisHW(spec)
    N = spec.N
    B = bell_matrix(spec, 0, 0).to_float()
    seed = np.einsum("ab,cd->abcd", B, B)
    out = np.zeros_like(seed)
    for m in range(N):
        for n in range(N):
            if a[m, n] == 0:
                continue
            V = _V(spec, hw, m, n)
            t = np.einsum("xb,abcd->axcd", V, seed)
            t = np.einsum("yd,axcd->axcy", V.conj().T, t)
            out += a[m, n] * t
    return as_vector(out)


def cerf_clone(spec: GfSpec, a: np.ndarray, psi: np.ndarray, hw: GaloisHW | None = None) -> CloneResult:
    hw = hw or GaloisHW(spec)
    N = spec.N
    a = np.asarray(a, dtype=complex)
    if abs(np.sum(np.abs(a) ** 2) - 1) > 1e-9:
        raise NotNormalized("sum |a|^2 must be 1")
    psi = np.asarray(psi, dtype=complex)
    full = as_tensor(cerf_state(spec, a, hw), N)
    # Alice finds q-nit 0 in <psi*| = sum_k psi_k <k|
    s13 = math.sqrt(N) * np.einsum("a,abcd->bcd", psi, full)
    v13 = as_vector(s13)
    rho1 = reduced(v13, N, [0])
    rho2 = reduced(v13, N, [1])
    rho3 = reduced(v13, N, [2])
    b = galois_fourier2(spec, a)
    closed1 = np.zeros((N, N), dtype=complex)
    closed3 = np.zeros((N, N), dtype=complex)
    for m in range(N):
        for n in range(N):
            pm = _V(spec, hw, m, n) @ psi
            P = np.outer(pm, pm.conj())
            closed1 += abs(a[m, n]) ** 2 * P
            closed3 += abs(b[m, n]) ** 2 * P
    return CloneResult(rho1, rho2, rho3, b,
                       float(np.abs(rho1 - closed1).max()), float(np.abs(rho3 - closed3).max()), v13)


@dataclass
class SwapBranch:
    m: int
    n: int
    probability: float
    fidelity: float


def swap_state(spec: GfSpec, m: int, n: int) -> np.ndarray:
    """|B^(01)_{m,n}, B^(23)_{-m,-n}> on q-nits 0..3."""
    A = bell_matrix(spec, m, n).to_float()
    B = bell_matrix(spec, spec.neg(m), spec.neg(n)).to_float()
    return np.einsum("ab,cd->abcd", A, B)


def swap_sim(spec: GfSpec, m: int, n: int) -> list[SwapBranch]:
    """Bell measurement on q-nits (2, 1); q-nits (0, 3) end in B^(03)_{m',n'}."""
    N = spec.N
    full = swap_state(spec, m, n)
    out = []
    for mp in range(N):
        for np_ in range(N):
            bra = bell_matrix(spec, spec.neg(mp), spec.neg(np_)).to_float().conj()  # axes (2, 1)
            rest = np.einsum("cb,abcd->ad", bra, full)
            p = float(np.sum(np.abs(rest) ** 2))
            target = bell_matrix(spec, mp, np_).to_float()
            fid = float(abs(np.vdot(target, rest)) ** 2 / p)
            out.append(SwapBranch(mp, np_, p, fid))
    return out


def swap_overlap(spec: GfSpec, m, n, mp, np_) -> complex:
    """<B^(03)_{m',n'}, B^(21)_{-m',-n'} | B^(01)_{m,n}, B^(23)_{-m,-n}>."""
    full = swap_state(spec, m, n)
    A = bell_matrix(spec, mp, np_).to_float()  # on (0, 3)
    B = bell_matrix(spec, spec.neg(mp), spec.neg(np_)).to_float()  # on (2, 1)
    other = np.einsum("ad,cb->abcd", A, B)
    return complex(np.vdot(other, full))
