"""Bases as simplices in R^{N^2-1}, Grassmannian distance, and numerical searches
for kets unbiased to a pair (1, H) and for MU constellations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
from scipy.optimize import least_squares, minimize
from scipy.stats import unitary_group

from .hadamard import HMat


class IncompleteCatalog(ValueError):
    pass


# --- geometry ----------------------------------------------------------------------

@dataclass
class BasisVectorSet:
    N: int
    vectors: np.ndarray  # (N, N, N): vectors[a] = |e_a><e_a| - 1/N

    def gram(self) -> np.ndarray:
        """e_a . e_b = tr(M_a M_b) / 2."""
        return np.einsum("aij,bji->ab", self.vectors, self.vectors).real / 2

    def coords(self) -> np.ndarray:
        """Real coordinates (columns) with the dot product tr(M_a M_b) / 2."""
        V = self.vectors.reshape(self.N, -1)
        return np.concatenate([V.real, V.imag], axis=1).T / math.sqrt(2)

    def plane(self) -> np.ndarray:
        """Projector 2 B B^T onto the (N-1)-plane of the simplex."""
        B = self.coords()
        return 2 * B @ B.T


def basis_vectors(U: np.ndarray) -> BasisVectorSet:
    U = np.asarray(U, dtype=complex)
    N = U.shape[0]
    P = np.einsum("ia,ja->aij", U, U.conj())
    return BasisVectorSet(N, P - np.eye(N) / N)


def is_simplex(vs: BasisVectorSet, tol: float = 1e-10) -> bool:
    N = vs.N
    want = np.eye(N) / 2 - 1 / (2 * N)
    return bool(np.abs(vs.gram() - want).max() < tol and np.abs(vs.vectors.sum(axis=0)).max() < tol)


def grassmann_d2(B1: np.ndarray, B2: np.ndarray) -> float:
    """sum_{a,b} |<e_a|f_b>|^2 (1 - |<e_a|f_b>|^2)."""
    P = np.abs(np.asarray(B1).conj().T @ np.asarray(B2)) ** 2
    return float(np.sum(P * (1 - P)))


def grassmann_d2_planes(B1: np.ndarray, B2: np.ndarray) -> float:
    """tr((Pi_e - Pi_f)^2) / 2 from the plane projectors."""
    D = basis_vectors(B1).plane() - basis_vectors(B2).plane()
    return float(np.trace(D @ D)) / 2


def haar_unitary(N: int, rng: np.random.Generator) -> np.ndarray:
    return unitary_group.rvs(N, random_state=rng)


def haar_d2(N: int, samples: int, rng: np.random.Generator) -> tuple[float, float]:
    """Mean D_c^2 of a Haar-random basis against the computational one, with its standard error."""
    I = np.eye(N)
    vals = np.array([grassmann_d2(I, haar_unitary(N, rng)) for _ in range(samples)])
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(samples))


def haar_d2_expected(N: int) -> float:
    return N * (N - 1) / (N + 1)


# --- kets unbiased to (1, H) ----------------------------------------------------------

@dataclass
class UnbiasedVectorCatalog:
    H: HMat
    vectors: list[np.ndarray]
    bases: list[tuple[int, ...]]
    restarts: int
    since_new: int
    complete: bool
    hits: int = 0

    @property
    def N_v(self) -> int:
        return len(self.vectors)

    @property
    def N_t(self) -> int:
        return len(self.bases)

    def basis_matrix(self, t: int) -> np.ndarray:
        return np.stack([self.vectors[k] for k in self.bases[t]], axis=1)

    def to_json(self) -> dict:
        return {"family": self.H.family, "params": self.H.to_json()["params"], "N_v": self.N_v, "N_t": self.N_t,
                "restarts": self.restarts, "since_new": self.since_new, "complete": self.complete,
                "vectors": [[v.real.tolist(), v.imag.tolist()] for v in self.vectors],
                "bases": [list(b) for b in self.bases]}


class _Objective:
    """f(theta) = sum_j (|<h_j|z>|^2 - 1/N)^2 with z_k = e^{i theta_k}/sqrt(N), theta_0 = 0."""

    def __init__(self, H: np.ndarray):
        self.N = H.shape[0]
        self.Hn = H / math.sqrt(self.N)

    def ket(self, th: np.ndarray) -> np.ndarray:
        return np.exp(1j * np.concatenate([[0.0], th])) / math.sqrt(self.N)

    def residuals(self, th):
        c = self.Hn.conj().T @ self.ket(th)
        return np.abs(c) ** 2 - 1 / self.N

    def res_jac(self, th):
        z = self.ket(th)
        c = self.Hn.conj().T @ z
        # d|c_j|^2 / d theta_k = 2 Re(c_j^* conj(Hn_kj) i z_k)
        J = 2 * np.real(c.conj()[:, None] * self.Hn.conj().T * (1j * z)[None, :])
        return J[:, 1:]

    def value_grad(self, th):
        r = self.residuals(th)
        return float(r @ r), 2 * self.res_jac(th).T @ r


def unbiased_residual(H: np.ndarray, z: np.ndarray) -> float:
    """Worst deviation from 1/N over both the computational basis and the columns of H."""
    N = len(z)
    a = np.abs(z) ** 2 - 1 / N
    b = np.abs((H / math.sqrt(N)).conj().T @ z) ** 2 - 1 / N
    return float(max(np.abs(a).max(), np.abs(b).max()))


def _phase_fix(z: np.ndarray) -> np.ndarray:
    return z * abs(z[0]) / z[0]


def cluster_bases(vectors: list[np.ndarray], eps: float = 1e-6) -> list[tuple[int, ...]]:
    """Maximal cliques of size N in the orthogonality graph."""
    if not vectors:
        return []
    N = len(vectors[0])
    V = np.stack(vectors, axis=1)
    G = np.abs(V.conj().T @ V)
    g = nx.Graph()
    g.add_nodes_from(range(len(vectors)))
    g.add_edges_from((a, b) for a, b in itertools.combinations(range(len(vectors)), 2) if G[a, b] < eps)
    return sorted(tuple(sorted(c)) for c in nx.find_cliques(g) if len(c) == N)


def unbiased_vector_search(H: HMat, restarts: int = 100000, tol: float = 1e-10, dedup_tol: float = 1e-6,
                           seed: int = 0, patience: int = 500) -> UnbiasedVectorCatalog:
    """Multistart descent; stops after ``patience`` restarts without a new ket."""
    M = H.entries if isinstance(H, HMat) else np.asarray(H)
    H = H if isinstance(H, HMat) else HMat(M)
    N = M.shape[0]
    obj = _Objective(M)
    rng = np.random.default_rng(seed)
    found: list[np.ndarray] = []
    since, hits, done = 0, 0, 0
    for done in range(1, restarts + 1):
        th0 = rng.uniform(0, 2 * np.pi, N - 1)
        res = minimize(obj.value_grad, th0, jac=True, method="BFGS", options={"gtol": 1e-12})
        th = res.x
        if res.fun < 1e-8:
            th = least_squares(obj.residuals, th, jac=obj.res_jac, xtol=1e-15, ftol=1e-15, gtol=1e-15).x
        z = obj.ket(th)
        new = False
        if unbiased_residual(M, z) < tol:
            hits += 1
            z = _phase_fix(z)
            if all(np.linalg.norm(z - w) > dedup_tol for w in found):
                found.append(z)
                new = True
        since = 0 if new else since + 1
        if since >= patience:
            break
    complete = since >= patience
    order = sorted(range(len(found)), key=lambda k: tuple(np.round(np.angle(found[k]), 6)))
    found = [found[k] for k in order]
    return UnbiasedVectorCatalog(H, found, cluster_bases(found), done, since, complete, hits)


def extendability_probe(catalog: UnbiasedVectorCatalog) -> dict:
    """Largest D_c^2 between two bases built from the catalog, raw and divided by N - 1."""
    if not catalog.complete or catalog.N_t < 2:
        raise IncompleteCatalog("need a saturated catalog with at least two bases")
    N = catalog.H.N
    mats = [catalog.basis_matrix(t) for t in range(catalog.N_t)]
    best, pair = -1.0, None
    for a, b in itertools.combinations(range(len(mats)), 2):
        d = grassmann_d2(mats[a], mats[b])
        if d > best:
            best, pair = d, (a, b)
    return {"raw": best, "normalized": best / (N - 1), "pair": pair, "random_normalized": N / (N + 1)}


# --- MU constellations ------------------------------------------------------------------

@dataclass
class ConstellationResult:
    shape: tuple[int, ...]
    N: int
    penalty: float
    sets: list[np.ndarray] = field(repr=False)
    success: bool = False
    penalties: list[float] = field(default_factory=list, repr=False)


def _constellation_residuals(x, shape, N):
    vecs = _unpack(x, shape, N)
    out = []
    for S in vecs:
        G = S.conj().T @ S
        iu = np.triu_indices(S.shape[1], 1)
        out += [G[iu].real, G[iu].imag]
    for S, T in itertools.combinations(vecs, 2):
        out.append((np.abs(S.conj().T @ T) ** 2 - 1 / N).ravel())
    return np.concatenate(out) if out else np.zeros(0)


def _unpack(x, shape, N):
    """First set is the first shape[0] computational kets; the rest are free and normalized."""
    sets = [np.eye(N, dtype=complex)[:, : shape[0]]]
    k = 0
    for s in shape[1:]:
        n = 2 * N * s
        raw = x[k:k + n].reshape(2, N, s)
        v = raw[0] + 1j * raw[1]
        sets.append(v / np.linalg.norm(v, axis=0))
        k += n
    return sets


def constellation_search(shape, N: int, restarts: int = 20, seed: int = 0) -> ConstellationResult:
    """Minimize sum |<u|v>|^2 within sets plus sum (|<u|v>|^2 - 1/N)^2 across sets."""
    shape = tuple(sorted(shape, reverse=True))
    if sum(shape) > N * (N + 1) or max(shape) > N:
        raise ValueError("shape does not fit N")
    rng = np.random.default_rng(seed)
    nvar = 2 * N * sum(shape[1:])
    best, best_x, pens = math.inf, None, []
    for _ in range(restarts):
        x0 = rng.normal(size=nvar)
        res = least_squares(_constellation_residuals, x0, args=(shape, N), xtol=1e-15, ftol=1e-15, gtol=1e-15,
                            max_nfev=2000)
        pen = float(res.fun @ res.fun)
        pens.append(pen)
        if pen < best:
            best, best_x = pen, res.x
        if best < 1e-12:
            break
    return ConstellationResult(shape, N, best, _unpack(best_x, shape, N), best < 1e-12, pens)
