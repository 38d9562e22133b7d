"""Complex Hadamard matrices: families, dephasing, equivalence, defect, MU pairs.

A Hadamard matrix here is unnormalized: unimodular entries and H H^dag = N 1.
Fourier transforms of sequences use the unitary DFT N^{-1/2} F_N.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .cnum import CMatrix
from .gf import GfSpec, prime_power


class BadParameter(ValueError):
    pass


class DegenerateMobiusPoint(ValueError):
    pass


class SizeMismatch(ValueError):
    pass


class IllConditioned(ArithmeticError):
    def __init__(self, ranks):
        super().__init__(f"defect rank depends on the threshold: {ranks}")
        self.ranks = ranks


@dataclass
class HMat:
    entries: np.ndarray
    family: str = "custom"
    params: tuple = ()
    exact: CMatrix | None = field(default=None, repr=False)

    @property
    def N(self) -> int:
        return self.entries.shape[0]

    @cached_property
    def dephased(self) -> np.ndarray:
        return dephase_array(self.entries)

    @cached_property
    def invariants(self) -> np.ndarray:
        return haagerup_invariants(self.entries)

    def to_json(self) -> dict:
        return {"family": self.family, "params": [_jsonable(p) for p in self.params], "N": self.N,
                "re": self.entries.real.tolist(), "im": self.entries.imag.tolist()}


def _jsonable(p):
    if isinstance(p, complex):
        return [p.real, p.imag]
    if isinstance(p, (tuple, list, np.ndarray)):
        return [_jsonable(q) for q in p]
    if isinstance(p, np.generic):
        return p.item()
    return p


def is_hadamard(H, tol: float = 1e-10) -> bool:
    H = H.entries if isinstance(H, HMat) else np.asarray(H)
    N = H.shape[0]
    return bool(np.abs(np.abs(H) - 1).max() < tol and np.abs(H @ H.conj().T - N * np.eye(N)).max() < tol * N)


def _check(H: HMat, tol: float = 1e-10) -> HMat:
    if not is_hadamard(H, tol):
        raise BadParameter(f"{H.family}{H.params} is not a Hadamard matrix")
    return H


# --- families ------------------------------------------------------------------

def fourier(N: int) -> HMat:
    jk = np.outer(np.arange(N), np.arange(N)) % N
    ex = CMatrix.from_exponents(jk, N) if prime_power(N) else None  # cyclotomic orders are prime powers
    return HMat(np.exp(2j * np.pi * jk / N), "fourier", (N,), ex)


def galois_fourier(spec: GfSpec) -> HMat:
    k = np.arange(spec.N)
    e = spec.char_exp(spec.mul(k[:, None], k[None, :]))
    return HMat(np.exp(2j * np.pi * e / spec.p), "galois_fourier", (spec.p, spec.m), CMatrix.from_exponents(e, spec.p))


def F4(a: float) -> HMat:
    u = np.exp(1j * a)
    H = np.array([[1, 1, 1, 1],
                  [1, u, -1, -u],
                  [1, -1, 1, -1],
                  [1, -u, -1, u]], dtype=complex)
    return HMat(H, "F4", (a,))


def F6(a: float, b: float) -> HMat:
    """Affine Fourier family: F_6 with z1 = e^{2 pi i a} on columns 1, 4 and
    z2 = e^{2 pi i b} on columns 2, 5 of the odd rows."""
    H = fourier(6).entries.copy()
    z1, z2 = np.exp(2j * np.pi * a), np.exp(2j * np.pi * b)
    for r in (1, 3, 5):
        H[r, [1, 4]] *= z1
        H[r, [2, 5]] *= z2
    return HMat(H, "F6", (a, b))


def F6T(a: float, b: float) -> HMat:
    return HMat(F6(a, b).entries.T.copy(), "F6T", (a, b))


def dita(a: float) -> HMat:
    if not -1 / 8 < a <= 1 / 8:
        warnings.warn("a outside (-1/8, 1/8] repeats an equivalence class", stacklevel=2)
    z = np.exp(2j * np.pi * a)
    i, zc = 1j, np.conj(z)
    H = np.array([[1, 1, 1, 1, 1, 1],
                  [1, -1, i, -i, -i, i],
                  [1, i, -1, i * z, -i * z, -i],
                  [1, -i, i * zc, -1, i, -i * zc],
                  [1, -i, -i * zc, i, -1, i * zc],
                  [1, i, -i, -i * z, i * z, -1]], dtype=complex)
    return HMat(H, "dita", (a,))


def bjorck_d() -> complex:
    s3 = math.sqrt(3)
    return complex((1 - s3) / 2, math.sqrt(s3 / 2))


def bjorck_c6() -> HMat:
    d = bjorck_d()
    dc = d.conjugate()
    row = np.array([1, 1j * d, -d, -1j, -dc, 1j * dc])
    idx = (np.arange(6)[None, :] - np.arange(6)[:, None]) % 6
    return HMat(row[idx], "bjorck_c6", ())


# Symmetric Butson(3,6) matrix, exponents of omega = e^{2 pi i/3}.  Found by a
# depth-first search over dephased rows with entries {0,1,2}, each row holding
# every exponent twice (orthogonality to the all-ones row), rows increasing,
# symmetry imposed column by column; the search has exactly one solution.
TAO_EXPONENTS = np.array([[0, 0, 0, 0, 0, 0],
                          [0, 0, 1, 1, 2, 2],
                          [0, 1, 0, 2, 1, 2],
                          [0, 1, 2, 0, 2, 1],
                          [0, 2, 1, 2, 0, 1],
                          [0, 2, 2, 1, 1, 0]])


def tao_search() -> list[np.ndarray]:
    """Rerun the search behind TAO_EXPONENTS."""
    rows = sorted({t for t in itertools.permutations((0, 0, 1, 1, 2, 2)) if t[0] == 0})

    def orth(a, b):
        d = [(x - y) % 3 for x, y in zip(a, b)]
        return d.count(0) == 2 and d.count(1) == 2

    found = []

    def dfs(acc):
        k = len(acc)
        if k == 6:
            found.append(np.array(acc))
            return
        for c in rows:
            if k > 1 and c <= acc[-1]:
                continue
            if any(c[j] != acc[j][k] for j in range(k)):
                continue
            if all(orth(c, r) for r in acc):
                dfs(acc + [c])

    dfs([(0,) * 6])
    return found


def tao_s6() -> HMat:
    ex = CMatrix.from_exponents(TAO_EXPONENTS, 3)
    return HMat(np.exp(2j * np.pi * TAO_EXPONENTS / 3), "tao_s6", (), ex)


def standard_prime(p: int, r: int) -> HMat:
    """E_p^r F_p with [E_p]_{jj} = gamma_p^{j^2}; p may be any odd N for the maximality test."""
    j = np.arange(p)
    e = (r * j[:, None] ** 2 + np.outer(j, j)) % p
    ex = CMatrix.from_exponents(e, p) if prime_power(p) else None
    return HMat(np.exp(2j * np.pi * e / p), "standard_prime", (p, r), ex)


# --- Karlsson's H2-reducible family ----------------------------------------------

F2 = np.array([[1, 1], [1, -1]], dtype=complex)


def karlsson_blocks(x) -> tuple[np.ndarray, np.ndarray]:
    """A(x) and B(x) = A(-x) of the block ansatz."""
    def A_of(x1, x2, x3):
        a11 = -0.5 + 0.5j * math.sqrt(3) * (x1 + 1j * x2 + x3)
        a12 = -0.5 + 0.5j * math.sqrt(3) * (x1 - 1j * x2 - x3)
        return np.array([[a11, a12], [np.conj(a12), -np.conj(a11)]])
    x1, x2, x3 = x
    return A_of(x1, x2, x3), A_of(-x1, -x2, -x3)


@dataclass(frozen=True)
class Mobius:
    """z -> (alpha z - beta) / (beta* z - alpha*), maps the unit circle to itself."""

    alpha: complex
    beta: complex

    @property
    def degenerate(self) -> bool:
        return abs(abs(self.alpha) - abs(self.beta)) < 1e-12

    def __call__(self, z):
        return (self.alpha * z - self.beta) / (np.conj(self.beta) * z - np.conj(self.alpha))

    def inverse(self, w):
        return (np.conj(self.alpha) * w - self.beta) / (np.conj(self.beta) * w - self.alpha)

    def constant(self) -> complex:
        """Value of a degenerate map away from its pole."""
        for z in (1, -1, 1j):
            den = np.conj(self.beta) * z - np.conj(self.alpha)
            if abs(den) > 1e-6:
                return complex((self.alpha * z - self.beta) / den)
        raise DegenerateMobiusPoint("map is singular everywhere")

    def pole(self) -> complex:
        return complex(np.conj(self.alpha) / np.conj(self.beta))


def karlsson_maps(x) -> tuple[Mobius, Mobius]:
    A, B = karlsson_blocks(x)
    return Mobius(A[0, 1] ** 2, A[0, 0] ** 2), Mobius(B[0, 1] ** 2, B[0, 0] ** 2)


def karlsson_assemble(x, z1, z2, z3, z4) -> np.ndarray:
    A, B = karlsson_blocks(x)
    Z1 = np.diag([1, z1]) @ F2
    Z2 = np.diag([1, z2]) @ F2
    Z3 = F2 @ np.diag([1, z3])
    Z4 = F2 @ np.diag([1, z4])
    return np.block([[F2, Z1, Z2],
                     [Z3, Z3 @ A @ Z1 / 2, Z3 @ B @ Z2 / 2],
                     [Z4, Z4 @ B @ Z1 / 2, Z4 @ A @ Z2 / 2]])


def karlsson(x1: float, x2: float, x3: float, z1: complex, signs=(1, 1, 1), free=None) -> HMat:
    """Member of the three-parameter H2-reducible family.

    Generic points solve z2, z3, z4 from z1 through the Mobius constraints
    z3^2 = M_A(z1^2) = M_B(z2^2), z4^2 = M_A(z2^2) = M_B(z1^2); ``signs`` pick
    the square roots of z2, z3, z4.  At the four points where both maps are
    degenerate, ``free`` supplies the extra phases: z2 at (0, 0, +-1), where
    z3^2, z4^2 are the constant values of M_A, M_B; (z3, z4) at (+-1, 0, 0),
    where z1^2, z2^2 sit at the poles of M_A, M_B and z1 is ignored.
    """
    x = np.array([x1, x2, x3], dtype=float)
    if abs(x @ x - 1) > 1e-12:
        raise BadParameter("x1^2 + x2^2 + x3^2 must equal 1")
    z1 = complex(z1)
    if abs(abs(z1) - 1) > 1e-12:
        raise BadParameter("z1 must be unimodular")
    MA, MB = karlsson_maps(x)
    s2, s3, s4 = signs
    if MA.degenerate and MB.degenerate:
        if free is None:
            raise DegenerateMobiusPoint(f"both Mobius maps degenerate at {tuple(x)}; pass free=")
        if abs(x[2]) > 0.5:
            (z2,) = free
            z3, z4 = np.sqrt(MA.constant()), np.sqrt(MB.constant())
        else:
            z1, z2 = np.sqrt(MA.pole()), np.sqrt(MB.pole())
            z3, z4 = free
    elif not MB.degenerate:
        w3 = MA(z1 ** 2)
        z2, z3, z4 = np.sqrt(MB.inverse(w3)), np.sqrt(w3), np.sqrt(MB(z1 ** 2))
        if abs(MA(z2 ** 2) - z4 ** 2) > 1e-9:
            raise BadParameter("z1 is not admissible where M_A is degenerate")
    else:
        w4 = MB(z1 ** 2)
        z2 = np.sqrt(MA.inverse(w4))
        z3, z4 = np.sqrt(MA(z1 ** 2)), np.sqrt(w4)
        if abs(MB(z2 ** 2) - z3 ** 2) > 1e-9:
            raise BadParameter("z1 is not admissible where M_B is degenerate")
    z2, z3, z4 = s2 * complex(z2), s3 * complex(z3), s4 * complex(z4)
    H = HMat(karlsson_assemble(x, z1, z2, z3, z4), "karlsson", (tuple(x), z1, tuple(signs), free))
    return _check(H, 1e-9)


def karlsson_sign_members(x1, x2, x3, z1, free=None) -> list[HMat]:
    """The eight sign choices, deduplicated by dephased form."""
    out: list[HMat] = []
    for signs in itertools.product((1, -1), repeat=3):
        H = karlsson(x1, x2, x3, z1, signs, free)
        if not any(np.abs(H.dephased - G.dephased).max() < 1e-9 for G in out):
            out.append(H)
    return out


FAMILIES = {
    "fourier": fourier, "galois_fourier": galois_fourier, "F4": F4, "F6": F6, "F6T": F6T,
    "dita": dita, "bjorck_c6": bjorck_c6, "karlsson": karlsson, "tao_s6": tao_s6,
    "standard_prime": standard_prime,
}


def family(name: str, *params, **kw) -> HMat:
    if name not in FAMILIES:
        raise BadParameter(f"unknown family {name!r}")
    return _check(FAMILIES[name](*params, **kw), 1e-9)


# --- dephasing and equivalence ---------------------------------------------------

def dephase_array(H: np.ndarray) -> np.ndarray:
    H = np.asarray(H, dtype=complex)
    H = H / H[:, :1]
    return H / H[:1, :]


def dephase(H: HMat) -> HMat:
    return HMat(H.dephased.copy(), H.family, H.params)


def _pairings(items):
    if not items:
        yield []
        return
    a = items[0]
    for k in range(1, len(items)):
        rest = items[1:k] + items[k + 1:]
        for tail in _pairings(rest):
            yield [(a, items[k])] + tail


def h2_reducible(H) -> bool:
    """Rows and columns split into pairs so that every 2 x 2 block is Hadamard."""
    H = H.entries if isinstance(H, HMat) else np.asarray(H)
    N = H.shape[0]
    if N % 2:
        return False
    # G[i, k, j, l] = 0 iff the block on rows (i, k), columns (j, l) has orthogonal columns
    G = np.abs(np.einsum("ij,il->ijl", H, H.conj())[:, None] + np.einsum("kj,kl->kjl", H, H.conj())[None, :])
    for rp in _pairings(list(range(N))):
        for cp in _pairings(list(range(N))):
            if all(G[i, k, j, l] < 1e-9 for i, k in rp for j, l in cp):
                return True
    return False


def has_minus_one(H) -> bool:
    D = H.dephased if isinstance(H, HMat) else dephase_array(H)
    return bool(np.any(np.abs(D + 1) < 1e-9))


def haagerup_invariants(H: np.ndarray) -> np.ndarray:
    """Sorted phase angles in [0, 2 pi) of H_ij H_kl H*_il H*_kj over all i, j, k, l."""
    H = np.asarray(H, dtype=complex)
    L = np.einsum("ij,kl,il,kj->ijkl", H, H, H.conj(), H.conj()).ravel()
    ang = np.mod(np.angle(L), 2 * np.pi)
    ang[ang > 2 * np.pi - 1e-9] = 0.0
    return np.sort(ang)


@dataclass
class EquivCertificate:
    verdict: str  # equivalent | inequivalent | unknown
    witness: dict | None = None  # H2 = diag(row_phase) H1[rows][:, cols] diag(col_phase)
    invariant_gap: float | None = None

    def apply(self, H1: np.ndarray) -> np.ndarray:
        w = self.witness
        return np.diag(w["row_phase"]) @ np.asarray(H1)[np.ix_(w["rows"], w["cols"])] @ np.diag(w["col_phase"])


def equivalent(H1, H2, budget: int = 10 ** 6, tol: float = 1e-7) -> EquivCertificate:
    """H2 = E2 P2 H1 P1 E1 test: invariant multisets, then a permutation search."""
    A = H1.entries if isinstance(H1, HMat) else np.asarray(H1, dtype=complex)
    B = H2.entries if isinstance(H2, HMat) else np.asarray(H2, dtype=complex)
    if A.shape != B.shape:
        raise SizeMismatch(f"{A.shape} vs {B.shape}")
    N = A.shape[0]
    ia, ib = haagerup_invariants(A), haagerup_invariants(B)
    gap = np.abs(ia - ib)
    gap = float(np.minimum(gap, 2 * np.pi - gap).max())
    if gap > tol:
        return EquivCertificate("inequivalent", invariant_gap=gap)
    DB = dephase_array(B)
    work = 0
    for r in range(N):
        for c in range(N):
            rows0 = [r] + [i for i in range(N) if i != r]
            cols0 = [c] + [j for j in range(N) if j != c]
            DA = dephase_array(A[np.ix_(rows0, cols0)])
            for perm in itertools.permutations(range(1, N)):
                work += 1
                if work > budget:
                    return EquivCertificate("unknown", invariant_gap=gap)
                cols = [0, *perm]
                M = DA[:, cols]
                used, match = set(), [0]
                for i in range(1, N):
                    hit = next((k for k in range(1, N) if k not in used
                                and np.abs(M[k] - DB[i]).max() < tol), None)
                    if hit is None:
                        break
                    used.add(hit)
                    match.append(hit)
                else:
                    rows = [rows0[k] for k in match]
                    cls = [cols0[j] for j in cols]
                    P = A[np.ix_(rows, cls)]
                    e2 = B[:, 0] / P[:, 0]
                    e1 = B[0, :] / (e2[0] * P[0, :])
                    cert = EquivCertificate("equivalent", {"rows": rows, "cols": cls,
                                                           "row_phase": e2, "col_phase": e1}, gap)
                    if np.abs(cert.apply(A) - B).max() < tol:
                        return cert
    return EquivCertificate("inequivalent", invariant_gap=gap)


def unordered_pair_equivalent(H1, H2, **kw) -> bool:
    """{1, H1} ~ {1, H2} iff H1 ~ H2 or H1 ~ H2^dag."""
    B = H2.entries if isinstance(H2, HMat) else np.asarray(H2)
    return (equivalent(H1, B, **kw).verdict == "equivalent"
            or equivalent(H1, B.conj().T, **kw).verdict == "equivalent")


def mu_pair(H1, H2, tol: float = 1e-10) -> bool:
    A = H1.entries if isinstance(H1, HMat) else np.asarray(H1)
    B = H2.entries if isinstance(H2, HMat) else np.asarray(H2)
    if A.shape != B.shape:
        raise SizeMismatch(f"{A.shape} vs {B.shape}")
    X = A.conj().T @ B / math.sqrt(A.shape[0])
    return bool(np.abs(np.abs(X) - 1).max() < tol)


# --- defect ------------------------------------------------------------------------

def defect_system(H: np.ndarray) -> np.ndarray:
    """Real linear system for first-order core rephasings keeping H unitary.

    Unknowns phi_ij, 1 <= i, j < N, of the dephased form; equations are the
    real and imaginary parts of sum_k H_ik H*_jk (phi_ik - phi_jk) = 0, i < j.
    """
    D = dephase_array(H)
    N = D.shape[0]
    n = (N - 1) ** 2
    rows = []
    for i, j in itertools.combinations(range(N), 2):
        r = np.zeros((N, N), dtype=complex)
        c = D[i] * D[j].conj()
        r[i] += c
        r[j] -= c
        rows.append(r[1:, 1:].ravel())
    R = np.array(rows).reshape(-1, n)
    return np.vstack([R.real, R.imag])


def defect(H, thresholds=(1e-8, 1e-6)) -> int:
    M = H.entries if isinstance(H, HMat) else np.asarray(H)
    S = defect_system(M)
    s = np.linalg.svd(S, compute_uv=False)
    ranks = [int(np.sum(s > t * s[0])) for t in thresholds]
    if len(set(ranks)) > 1:
        raise IllConditioned(ranks)
    return (M.shape[0] - 1) ** 2 - ranks[0]


def fourier_defect_formula(p: int, m: int) -> int:
    return p ** (m - 1) * ((p - 1) * m - p) + 1


# --- biunimodular sequences -------------------------------------------------------

def dft(z: np.ndarray) -> np.ndarray:
    """Unitary transform N^{-1/2} F_N z with [F_N]_jk = gamma_N^{jk}."""
    z = np.asarray(z, dtype=complex)
    N = len(z)
    return fourier(N).entries @ z / math.sqrt(N)


def gauss_sequence(N: int, m: int, n: int) -> np.ndarray:
    """exp(2 pi i (m j^2 + n j)/N) for odd N; exp(pi i (m j^2 + 2 n j)/N) for even N."""
    j = np.arange(N)
    if N % 2:
        if math.gcd(m, N) != 1:
            raise BadParameter("gcd(m, N) must be 1")
        return np.exp(2j * np.pi * ((m * j * j + n * j) % N) / N)
    if math.gcd(m, 2 * N) != 1:
        raise BadParameter("even N needs gcd(m, 2N) = 1")
    return np.exp(1j * np.pi * ((m * j * j + 2 * n * j) % (2 * N)) / N)


def is_biunimodular(z, tol: float = 1e-10) -> bool:
    z = np.asarray(z, dtype=complex)
    return bool(np.abs(np.abs(z) - 1).max() < tol and np.abs(np.abs(dft(z)) - 1).max() < tol)


def circulant(z) -> HMat:
    """C_ij = zt_{i-j mod N} with zt the unitary DFT of z."""
    zt = dft(z)
    N = len(zt)
    idx = (np.arange(N)[:, None] - np.arange(N)[None, :]) % N
    return HMat(zt[idx], "circulant", (tuple(np.asarray(z).tolist()),))


def autocorr(z) -> np.ndarray:
    """Gamma_a = (1/N) sum_i zt*_i zt_{a+i}."""
    zt = dft(z)
    N = len(zt)
    return np.array([np.vdot(zt, np.roll(zt, -a)) for a in range(N)]) / N


def biunimodular(what: str, *args, **kw):
    table = {"gauss": gauss_sequence, "check": is_biunimodular, "circulant": circulant, "autocorr": autocorr}
    if what not in table:
        raise BadParameter(f"unknown biunimodular operation {what!r}")
    return table[what](*args, **kw)


# --- standard MUHM set and bicirculants ------------------------------------------------

def standard_muhm(N: int):
    """[E_N^r F_N for r < N] and a report on which X_{r-s} are Hadamard."""
    if N < 3 or N % 2 == 0:
        raise BadParameter("N must be odd and at least 3")
    mats = [standard_prime(N, r) for r in range(N)]
    pairs = {(s, r): mu_pair(mats[s], mats[r]) for s, r in itertools.combinations(range(N), 2)}
    return mats, {"pairs": pairs, "maximal": all(pairs.values()),
                  "failing_shifts": sorted({(r - s) % N for (s, r), ok in pairs.items() if not ok})}


def circ3(row) -> np.ndarray:
    a, b, c = row
    return np.array([[a, b, c], [c, a, b], [b, c, a]], dtype=complex)


def bicirculant_validate(A_row, B_row, tol: float = 1e-10):
    """[[A, B], [B^dag, -A^dag]] with circulant A, B; HMat or a violation report."""
    A, B = circ3(A_row), circ3(B_row)
    X = np.block([[A, B], [B.conj().T, -A.conj().T]])
    unit = float(np.abs(X @ X.conj().T - 6 * np.eye(6)).max())
    mod = float(np.abs(np.abs(X) - 1).max())
    if unit < tol * 6 and mod < tol:
        return HMat(X, "bicirculant", (tuple(A_row), tuple(B_row)))
    return {"unitarity": unit, "modulus": mod, "commute": float(np.abs(A @ B - B @ A).max())}


def c6_bicirculant_rows():
    """C_6 with rows and columns ordered (0,2,4,1,3,5) and odd rows negated."""
    d = bjorck_d()
    return (1, -d, -d.conjugate()), (1j * d, -1j, 1j * d.conjugate())
