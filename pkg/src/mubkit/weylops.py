"""Heisenberg-Weyl operators: Galois shifts V_i^j and the mod-N pair X, Z.

Index convention for V: ``V(i, j)`` shifts by the field element ``i`` and
carries the phase index ``j``; its entry at row ``k+i``, column ``k`` is
``gamma**((k+i)*j)_0`` with field arithmetic and gamma = exp(2 pi i/p).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
from scipy.linalg import schur

from .cnum import CMatrix
from .gf import GfSpec, gf_for


class NotComposite(ValueError):
    pass


# --- Galois flavor -----------------------------------------------------------

@dataclass
class GaloisHW:
    spec: GfSpec
    _cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def N(self) -> int:
        return self.spec.N

    def V(self, i: int, j: int) -> CMatrix:
        key = (int(i), int(j))
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        s = self.spec
        k = np.arange(s.N)
        rows = s.add(k, i) if s.N > 1 else k
        phase = s.char_exp(s.mul(rows, j))
        exps = np.zeros((s.N, s.N), dtype=np.int64)
        mask = np.zeros((s.N, s.N), dtype=bool)
        exps[rows, k] = phase
        mask[rows, k] = True
        out = CMatrix.from_exponents(exps, s.p, mask)
        with self._lock:
            self._cache[key] = out
        return out

    def V_float(self, i: int, j: int) -> np.ndarray:
        return self.V(i, j).to_float()


def galois_V(hw: GaloisHW, i: int, j: int) -> CMatrix:
    return hw.V(i, j)


def composition_phase(spec: GfSpec, i: int, l: int) -> int:
    """Exponent e with V_i^j V_k^l = gamma**e V_{i+k}^{j+l}: e = (-(i*l))_0."""
    return spec.char_exp(spec.neg(spec.mul(i, l)))


def commute(spec: GfSpec, i, j, k, l) -> bool:
    """V_i^j and V_k^l commute iff (i*l)_0 = (j*k)_0 in shift/phase labels."""
    return spec.char_exp(spec.mul(i, l)) == spec.char_exp(spec.mul(j, k))


# --- mod-N flavor ---------------------------------------------------------------

def beta(N: int, n: int) -> complex:
    """Phase with beta**(2 N2) conventions: exp(i pi/N2) if N2 even, else 1."""
    if n % N == 0:
        return 1.0 + 0j
    N2 = N // math.gcd(n, N)
    return np.exp(1j * np.pi / N2) if N2 % 2 == 0 else 1.0 + 0j


@dataclass
class RingHW:
    N: int

    @property
    def gamma(self) -> complex:
        return np.exp(2j * np.pi / self.N)

    @property
    def X(self) -> np.ndarray:
        return np.roll(np.eye(self.N, dtype=complex), 1, axis=0)

    @property
    def Z(self) -> np.ndarray:
        return np.diag(self.gamma ** np.arange(self.N))

    def X_pow(self, n: int) -> np.ndarray:
        return np.roll(np.eye(self.N, dtype=complex), n, axis=0)

    def Z_pow(self, n: int) -> np.ndarray:
        return np.diag(self.gamma ** ((n * np.arange(self.N)) % self.N))

    def XZ(self, m: int, n: int) -> np.ndarray:
        return self.X_pow(m) @ self.Z_pow(n)

    def eigenbasis(self, n: int) -> np.ndarray:
        """Columns |n,k>, eigenkets of X Z^n; n = N gives the computational basis."""
        N = self.N
        if n == N:
            return np.eye(N, dtype=complex)
        l = np.arange(N)
        k = np.arange(N)
        b = beta(N, n)
        expo = (-np.outer(l, k) + n * (l * (l - 1) // 2)[:, None]) % N
        return (b ** (-l))[:, None] * self.gamma ** expo / math.sqrt(N)


def ring_ops(hw: RingHW, what: str, n: int = 0, k: int = 1) -> np.ndarray:
    if what == "X_pow":
        return hw.X_pow(n)
    if what == "Z_pow":
        return hw.Z_pow(n)
    if what == "XZn_pow":
        return np.linalg.matrix_power(hw.XZ(1, n), k)
    if what == "eigenbasis":
        return hw.eigenbasis(n)
    raise ValueError(f"unknown ring operation {what!r}")


def is_mu(B1: np.ndarray, B2: np.ndarray, tol: float = 1e-9) -> bool:
    N = B1.shape[0]
    return bool(np.max(np.abs(np.abs(B1.conj().T @ B2) ** 2 - 1.0 / N)) < tol)


def _order(m: int, n: int, N: int) -> int:
    return N // math.gcd(math.gcd(m, n), N)


@dataclass
class RingSubgroups:
    N: int
    generators: list[tuple[int, int]]
    elements: list[frozenset]
    graph: nx.Graph
    clique_number: int
    max_clique: list[int]

    def label(self, idx: int) -> str:
        m, n = self.generators[idx]
        parts = []
        if m:
            parts.append("X" if m == 1 else f"X^{m}")
        if n:
            parts.append("Z" if n == 1 else f"Z^{n}")
        return "".join(parts)

    def partners(self, idx: int) -> list[int]:
        return sorted(self.graph.neighbors(idx))


def ring_subgroups(N: int, tol: float = 1e-9) -> RingSubgroups:
    """Cyclic order-N subgroups of Z_N x Z_N and their complementarity graph."""
    if N > 12:
        raise ValueError("exhaustive subgroup enumeration limited to N <= 12")
    seen: dict[frozenset, tuple[int, int]] = {}
    for m in range(N):
        for n in range(N):
            if _order(m, n, N) != N:
                continue
            elems = frozenset(((t * m) % N, (t * n) % N) for t in range(N))
            if elems not in seen:
                seen[elems] = (m, n)  # first hit in lexicographic order is minimal

    def sort_key(item):
        m, n = item[1]
        if m == 1:
            return (0, n, 0)
        if (m, n) == (0, 1):
            return (1, 0, 0)
        return (2, m, n)

    items = sorted(seen.items(), key=sort_key)
    gens = [g for _, g in items]
    hw = RingHW(N)
    bases = []
    for m, n in gens:
        U = hw.XZ(m, n)
        _, Q = schur(U, output="complex")
        bases.append(Q)
    G = nx.Graph()
    G.add_nodes_from(range(len(gens)))
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            if is_mu(bases[a], bases[b], tol):
                G.add_edge(a, b)
    best = max(nx.find_cliques(G), key=len)
    return RingSubgroups(N, gens, [e for e, _ in items], G, len(best), sorted(best))


def xz_expand(hw: RingHW, F: np.ndarray) -> np.ndarray:
    """f[j, k] = <j^|F|k> / <j^|k> with X|j^> = gamma**j |j^>."""
    N = hw.N
    F = np.asarray(F, dtype=complex)
    hat = hw.eigenbasis(0)  # column j is |j^>
    overlap = hat.conj().T  # <j^|k>
    return (hat.conj().T @ F) / overlap


def xz_synthesize(hw: RingHW, f: np.ndarray) -> np.ndarray:
    hat = hw.eigenbasis(0)
    return hat @ (hat.conj().T * f)


def composite_factor(hw: RingHW, N1: int, N2: int):
    """Commuting clock/shift pairs (X1, Z1), (X2, Z2) for N = N1 N2, k = k1 + k2 N1."""
    N = hw.N
    if N1 * N2 != N or N1 < 2 or N2 < 2:
        raise NotComposite(f"{N} = {N1} x {N2} is not a nontrivial factorization")
    X = hw.X
    I = np.eye(N)
    delta = np.diag((np.arange(N) % N1 == 0).astype(float))  # projector on Z^{N2} = 1
    X1 = X - (I - hw.X_pow(-N1)) @ delta @ X
    X2 = hw.X_pow(N1)
    k = np.arange(N)
    Z1 = np.diag(np.exp(2j * np.pi * (k % N1) / N1))
    Z2 = np.diag(np.exp(2j * np.pi * (k // N1) / N2))
    return X1, X2, Z1, Z2


def galois_for(N: int) -> GaloisHW:
    return GaloisHW(gf_for(N))
