"""Mean King's problem for N = p^m and the finite affine plane behind it.

Alice prepares |B_00>, the king measures q-nit 1 in basis i and finds k,
Alice measures the pair in the basis |(m,n)> and infers k from (m,n).
Two-q-nit kets use the low-digit-first convention of ``bellproto``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bellproto import bell_matrix
from .cnum import CMatrix, hstack, inv_sqrt_scale, tensor
from .gf import AxiomViolation, GfSpec
from .mub import MubSet


def _column(M: CMatrix) -> CMatrix:
    """Flatten an N x N amplitude grid (first q-nit = row) into an N^2 x 1 ket."""
    if not M.exact:
        return CMatrix(val=M.to_float().reshape(-1, 1, order="F"))
    num = M.num.transpose(1, 0, 2).reshape(-1, 1, M.L)
    return CMatrix(num, M.L, M.rat, M.rad)


def pair_ket(mub: MubSet, i: int, k: int) -> CMatrix:
    """|e^{i*}_k, e^i_k> as an exact N^2 x 1 column."""
    e = mub.bases[i][:, k]
    return tensor(e.conj(), e)


@dataclass
class MkBasis:
    mub: MubSet
    seed: CMatrix
    vectors: CMatrix  # column m*N + n is |(m,n)>

    def ket(self, m: int, n: int) -> CMatrix:
        return self.vectors[:, m * self.mub.N + n]


def mk_seed(mub: MubSet) -> CMatrix:
    """|(0,0)> = N^{-1/2} sum_{i=0}^{N} |e^{i*}_0, e^i_0> - |B_00>."""
    N = mub.N
    acc = pair_ket(mub, 0, 0)
    for i in range(1, N + 1):
        acc = acc + pair_ket(mub, i, 0)
    acc = acc.scale(*inv_sqrt_scale(N))
    return acc - _column(bell_matrix(mub.spec, 0, 0))


def mk_basis(mub: MubSet) -> MkBasis:
    N = mub.N
    seed = mk_seed(mub)
    cols = []
    for m in range(N):
        for n in range(N):
            V = mub.hw.V(m, n)
            cols.append(tensor(V.conj(), V) @ seed)
    return MkBasis(mub, seed, hstack(cols))


def mk_infer(spec: GfSpec, i: int, m: int, n: int) -> int:
    if i == spec.N:
        return m
    return int(spec.sub(spec.mul(i, m), n))


@dataclass
class MkReport:
    N: int
    success: dict  # (i, k) -> probability that the inference is right
    detector_probs: dict  # (i, k) -> grid[n, m] of detector probabilities
    exact: bool  # success values were decided by exact arithmetic

    @property
    def success_rate(self):
        return min(self.success.values())


def mk_protocol_sim(mub: MubSet, basis: MkBasis | None = None) -> MkReport:
    """Amplitude evaluation of every king outcome (i, k).

    Exact bases give success values that are Fraction(1) when the
    probability of a correct inference is exactly one.
    """
    basis = basis or mk_basis(mub)
    N = mub.N
    spec = mub.spec
    succ, grids = {}, {}
    exact = basis.vectors.exact
    for i in range(N + 1):
        for k in range(N):
            # the king's projection leaves Alice with |e^{i*}_k, e^i_k>
            probs = (basis.vectors.dagger() @ pair_ket(mub, i, k)).abs2()
            right = np.array([[int(mk_infer(spec, i, m, n) == k) for m in range(N) for n in range(N)]])
            total = CMatrix.integer(right) @ probs
            if total.exact and total.entry(0, 0) == 1:
                succ[(i, k)] = Fraction(1)
            else:
                succ[(i, k)] = float(total.to_float().real[0, 0])
                exact = exact and total.exact
            grids[(i, k)] = probs.to_float().real.reshape(N, N).T
    return MkReport(N, succ, grids, exact)


def pyramid_vectors(basis: MkBasis) -> np.ndarray:
    """Normalized (|(m,n)> + |B_00>) for every (m, n), as float columns."""
    N = basis.mub.N
    B = bell_matrix(basis.mub.spec, 0, 0).to_float().reshape(-1, order="F")
    V = basis.vectors.to_float() + B[:, None]
    return V / np.linalg.norm(V, axis=0)


# --- affine plane and Latin squares -------------------------------------------

@dataclass
class AffinePlane:
    spec: GfSpec
    lines: list[tuple[int, int, int]]
    points: list[tuple[int, int]]

    def on(self, line, pt) -> bool:
        a, b, c = line
        m, n = pt
        s = self.spec
        return s.mul(a, m) == s.add(s.mul(b, n), c)

    def members(self, line) -> list[tuple[int, int]]:
        return [pt for pt in self.points if self.on(line, pt)]


def affine_plane(spec: GfSpec) -> AffinePlane:
    """Lines a m = b n + c, scaled so the first nonzero of (a, b) is 1."""
    N = spec.N
    lines = [(0, 1, c) for c in range(N)] + [(1, b, c) for b in range(N) for c in range(N)]
    pts = [(m, n) for m in range(N) for n in range(N)]
    return AffinePlane(spec, lines, pts)


def check_plane(plane: AffinePlane) -> dict:
    N = plane.spec.N
    members = {ln: set(plane.members(ln)) for ln in plane.lines}
    if len(plane.lines) != N * N + N:
        raise AxiomViolation(f"expected {N * N + N} lines")
    if any(len(v) != N for v in members.values()):
        raise AxiomViolation("a line does not have N points")
    for pt in plane.points:
        if sum(pt in v for v in members.values()) != N + 1:
            raise AxiomViolation(f"point {pt} is not on N+1 lines")
    # A1: two distinct points determine exactly one line
    for p1, p2 in itertools.combinations(plane.points, 2):
        if sum(p1 in v and p2 in v for v in members.values()) != 1:
            raise AxiomViolation(f"points {p1}, {p2} are not joined by exactly one line")
    # A2: through a point off a line there is exactly one parallel line
    for ln, pts in members.items():
        for pt in plane.points:
            if pt in pts:
                continue
            par = [l2 for l2, v in members.items() if pt in v and not (v & pts)]
            if len(par) != 1:
                raise AxiomViolation(f"parallel axiom fails for line {ln} and point {pt}")
    # A3: three non-collinear points exist
    a, b, c = (0, 0), (1, 0), (0, 1)
    if any({a, b, c} <= v for v in members.values()):
        raise AxiomViolation("all points collinear")
    return {"A1": True, "A2": True, "A3": True, "lines": len(plane.lines)}


def mols(spec: GfSpec) -> list[np.ndarray]:
    """N-1 Latin squares L_s[m, n] = s m + n, s = 1..N-1."""
    N = spec.N
    m = np.arange(N)[:, None]
    n = np.arange(N)[None, :]
    return [np.asarray(spec.add(spec.mul(np.broadcast_to(m, (N, N)), s), np.broadcast_to(n, (N, N))))
            for s in range(1, N)]


def is_latin(L: np.ndarray) -> bool:
    N = L.shape[0]
    full = set(range(N))
    return all(set(L[r]) == full for r in range(N)) and all(set(L[:, c]) == full for c in range(N))


def orthogonal(L1: np.ndarray, L2: np.ndarray) -> bool:
    N = L1.shape[0]
    return len(set(zip(L1.ravel().tolist(), L2.ravel().tolist()))) == N * N


def k_grid(spec: GfSpec, i: int) -> np.ndarray:
    """grid[n, m] = inferred k for king's basis i."""
    N = spec.N
    return np.array([[mk_infer(spec, i, m, n) for m in range(N)] for n in range(N)])


def render_grid(grid: np.ndarray) -> str:
    """Rows n from top (N-1) to bottom (0), columns m left to right."""
    return "\n".join(" ".join(str(v) for v in row) for row in grid[::-1])


def affine_tools(spec: GfSpec, what: str):
    if what == "plane":
        plane = affine_plane(spec)
        check_plane(plane)
        return plane
    if what == "mols":
        sq = mols(spec)
        for a, b in itertools.combinations(sq, 2):
            if not orthogonal(a, b):
                raise AxiomViolation("Latin squares are not orthogonal")
        return sq
    if what == "grids":
        return [k_grid(spec, i) for i in range(spec.N + 1)]
    raise ValueError(f"unknown affine tool {what!r}")
