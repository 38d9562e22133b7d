"""Exact cyclotomic scalars and matrices, with a float-complex fallback.

An exact value is ``rat * sqrt(rad) * sum_k c_k zeta_L**k`` where ``L = q**a``
is a prime power, ``zeta_L = exp(2 pi i / L)``, the ``c_k`` are integers,
``rat`` is a Fraction and ``rad`` a squarefree positive integer.  The
coefficient vector is kept canonically reduced modulo the cyclotomic
polynomial, so two reduced values are equal iff their data agree.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .gf import prime_power

DEFAULT_TOL = 1e-9


class DimensionMismatch(ValueError):
    pass


class OrderMismatch(ValueError):
    pass


class NotSquare(ValueError):
    pass


def squarefree_split(n: int) -> tuple[int, int]:
    """n = s*s*f with f squarefree; returns (s, f)."""
    s, f, d = 1, 1, 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
            s *= d
        if n % d == 0:
            n //= d
            f *= d
        d += 1
    return s, f * n


def _base_prime(L: int) -> int:
    if L == 1:
        return 1
    pm = prime_power(L)
    if pm is None:
        raise OrderMismatch(f"order {L} is not a prime power")
    return pm[0]


def reduce_coeffs(c: np.ndarray, L: int) -> np.ndarray:
    """Eliminate zeta**k for k >= L - L/q using sum_j zeta**(k0 + j L/q) = 0.

    Works on the last axis; returns a new integer array.
    """
    c = np.array(c, dtype=object if c.dtype == object else np.int64)
    if L == 1:
        return c
    q = _base_prime(L)
    step = L // q
    for k in range(L - 1, L - step - 1, -1):
        top = c[..., k].copy()
        if not np.any(top):
            continue
        for j in range(1, q):
            c[..., k - j * step] -= top
        c[..., k] = 0
    return c


def _embed(c: np.ndarray, L: int, Lnew: int) -> np.ndarray:
    if L == Lnew:
        return c
    out = np.zeros(c.shape[:-1] + (Lnew,), dtype=c.dtype)
    out[..., :: Lnew // L] = c
    return out


def common_order(L1: int, L2: int) -> int | None:
    """Order both values embed into, or None when no prime-power order does."""
    if L1 == 1:
        return L2
    if L2 == 1:
        return L1
    if _base_prime(L1) != _base_prime(L2):
        return None
    return max(L1, L2)


def _cyclic_product(a: np.ndarray, b: np.ndarray, L: int) -> np.ndarray:
    """Element-wise product of coefficient arrays (broadcast over leading axes)."""
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
    for s in range(L):
        if not np.any(a[..., s]):
            continue
        out += a[..., s : s + 1] * np.roll(b, s, axis=-1)
    return out


def _mul_scale(r1: Fraction, d1: int, r2: Fraction, d2: int) -> tuple[Fraction, int]:
    g = math.gcd(d1, d2)
    return r1 * r2 * g, (d1 // g) * (d2 // g)


def inv_sqrt_scale(N: int) -> tuple[Fraction, int]:
    """1/sqrt(N) as rat * sqrt(rad)."""
    s, f = squarefree_split(N)
    return Fraction(1, s * f), f


class CMatrix:
    """Dense complex matrix, exact (cyclotomic) or float.

    Exact data: ``num`` with shape (rows, cols, L), ``rat`` and ``rad``.
    Float data: ``val`` complex128 of shape (rows, cols).
    """

    __slots__ = ("num", "L", "rat", "rad", "val")

    def __init__(self, num=None, L=1, rat=Fraction(1), rad=1, val=None):
        if val is not None:
            self.val = np.asarray(val, dtype=complex)
            self.num = None
            self.L, self.rat, self.rad = None, None, None
            return
        self.val = None
        self.L = int(L)
        num = reduce_coeffs(np.asarray(num, dtype=np.int64), self.L)
        g = int(np.gcd.reduce(np.abs(num).ravel())) if num.size else 0
        rat = Fraction(rat)
        if g == 0 or rat == 0:
            num = np.zeros_like(num)
            rat, rad = Fraction(0), 1
        elif g > 1:
            num = num // g
            rat = rat * g
        self.num = num
        self.rat = rat
        self.rad = int(rad)

    # constructors -------------------------------------------------------
    @classmethod
    def from_float(cls, a) -> "CMatrix":
        return cls(val=np.atleast_2d(np.asarray(a, dtype=complex)))

    @classmethod
    def from_exponents(cls, exps, L, mask=None, rat=Fraction(1), rad=1) -> "CMatrix":
        """Entries zeta_L**exps where mask is True, zero elsewhere."""
        exps = np.asarray(exps, dtype=np.int64) % L
        num = np.zeros(exps.shape + (L,), dtype=np.int64)
        if mask is None:
            mask = np.ones(exps.shape, dtype=bool)
        idx = np.nonzero(mask)
        num[idx + (exps[idx],)] = 1
        return cls(num, L, rat, rad)

    @classmethod
    def identity(cls, n: int) -> "CMatrix":
        return cls.from_exponents(np.zeros((n, n), dtype=np.int64), 1, np.eye(n, dtype=bool))

    @classmethod
    def integer(cls, a) -> "CMatrix":
        a = np.asarray(a, dtype=np.int64)
        return cls(a[..., None], 1)

    # basics -------------------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.val is None

    @property
    def shape(self) -> tuple[int, int]:
        return self.val.shape if self.val is not None else self.num.shape[:2]

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    def to_float(self) -> np.ndarray:
        if self.val is not None:
            return self.val
        zeta = np.exp(2j * np.pi * np.arange(self.L) / self.L)
        return float(self.rat) * math.sqrt(self.rad) * (self.num @ zeta)

    def __array__(self, dtype=None, copy=None):
        a = self.to_float()
        return a.astype(dtype) if dtype is not None else a

    def as_float(self) -> "CMatrix":
        return CMatrix(val=self.to_float())

    def embed(self, L: int) -> "CMatrix":
        return CMatrix(_embed(self.num, self.L, L), L, self.rat, self.rad)

    def __getitem__(self, key):
        """2-D indexing; integer indices keep their axis (result stays a matrix)."""
        if not isinstance(key, tuple):
            key = (key, slice(None))
        key = tuple(slice(k, k + 1 or None) if isinstance(k, (int, np.integer)) else k for k in key)
        if self.val is not None:
            return CMatrix(val=self.val[key])
        return CMatrix(self.num[key], self.L, self.rat, self.rad)

    def entry(self, r: int, c: int) -> "CycloScalar":
        if self.val is not None:
            raise TypeError("float matrix has no exact entries")
        return CycloScalar(self.num[r, c], self.L, self.rat, self.rad)

    # algebra ------------------------------------------------------------
    def _align(self, other: "CMatrix"):
        """Bring two exact matrices to a common order; None if impossible."""
        L = common_order(self.L, other.L)
        if L is None:
            return None
        return self.embed(L), other.embed(L), L

    def __matmul__(self, other: "CMatrix") -> "CMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        if not (self.exact and other.exact):
            return CMatrix(val=self.to_float() @ other.to_float())
        al = self._align(other)
        if al is None:
            return CMatrix(val=self.to_float() @ other.to_float())
        a, b, L = al
        out = np.zeros((self.rows, other.cols, L), dtype=np.int64)
        for s in range(L):
            As = a.num[:, :, s]
            if not As.any():
                continue
            for t in range(L):
                Bt = b.num[:, :, t]
                if Bt.any():
                    out[:, :, (s + t) % L] += As @ Bt
        rat, rad = _mul_scale(a.rat, a.rad, b.rat, b.rad)
        return CMatrix(out, L, rat, rad)

    def _addsub(self, other: "CMatrix", sign: int) -> "CMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")
        if self.exact and other.exact:
            if other.rat == 0:
                return self
            if self.rat == 0:
                return other if sign > 0 else -other
            al = self._align(other)
            if al is not None and self.rad == other.rad:
                a, b, L = al
                r = Fraction(math.gcd(a.rat.numerator, b.rat.numerator),
                             math.lcm(a.rat.denominator, b.rat.denominator))
                fa, fb = a.rat / r, b.rat / r
                assert fa.denominator == 1 and fb.denominator == 1
                num = a.num * int(fa) + sign * b.num * int(fb)
                return CMatrix(num, L, r, a.rad)
        return CMatrix(val=self.to_float() + sign * other.to_float())

    def __add__(self, other):
        return self._addsub(other, 1)

    def __sub__(self, other):
        return self._addsub(other, -1)

    def __neg__(self):
        if self.val is not None:
            return CMatrix(val=-self.val)
        return CMatrix(self.num, self.L, -self.rat, self.rad)

    def scale(self, rat=Fraction(1), rad: int = 1, zeta_exp: int = 0, zeta_order: int = 1) -> "CMatrix":
        """Multiply by rat * sqrt(rad) * zeta_{order}**exp (exact when possible)."""
        if self.val is None:
            L = common_order(self.L, zeta_order)
            if L is not None:
                a = self.embed(L)
                shift = (zeta_exp * (L // zeta_order)) % L
                r, d = _mul_scale(a.rat, a.rad, Fraction(rat), rad)
                return CMatrix(np.roll(a.num, shift, axis=-1), L, r, d)
        z = float(rat) * math.sqrt(rad) * np.exp(2j * np.pi * zeta_exp / zeta_order)
        return CMatrix(val=self.to_float() * z)

    def scalar_mul(self, s) -> "CMatrix":
        if isinstance(s, CycloScalar):
            if self.exact:
                L = common_order(self.L, s.L)
                if L is not None:
                    a = self.embed(L)
                    c = _embed(s.num, s.L, L)
                    r, d = _mul_scale(a.rat, a.rad, s.rat, s.rad)
                    return CMatrix(_cyclic_product(a.num, c, L), L, r, d)
            s = complex(s)
        if isinstance(s, (int, Fraction)) and self.exact:
            return CMatrix(self.num, self.L, self.rat * s, self.rad)
        return CMatrix(val=self.to_float() * s)

    def conj(self) -> "CMatrix":
        if self.val is not None:
            return CMatrix(val=self.val.conj())
        idx = (-np.arange(self.L)) % self.L
        return CMatrix(self.num[..., idx], self.L, self.rat, self.rad)

    @property
    def T(self) -> "CMatrix":
        if self.val is not None:
            return CMatrix(val=self.val.T)
        return CMatrix(self.num.transpose(1, 0, 2), self.L, self.rat, self.rad)

    def dagger(self) -> "CMatrix":
        return self.conj().T

    def trace(self):
        if self.rows != self.cols:
            raise NotSquare("trace of a non-square matrix")
        if self.val is not None:
            return complex(np.trace(self.val))
        return CycloScalar(np.einsum("iik->k", self.num), self.L, self.rat, self.rad)

    def abs2(self) -> "CMatrix":
        """Element-wise squared modulus, exact when possible."""
        if self.val is not None:
            return CMatrix(val=np.abs(self.val) ** 2)
        c = self.conj()
        num = _cyclic_product(self.num, c.num, self.L)
        return CMatrix(num, self.L, self.rat * self.rat * self.rad, 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CMatrix) or self.shape != other.shape:
            return False
        if self.exact and other.exact:
            if self.rat == 0 or other.rat == 0:
                return self.rat == other.rat
            al = self._align(other)
            if al is not None and self.rad == other.rad:
                a, b, _ = al
                lhs = a.num * (a.rat.numerator * b.rat.denominator)
                rhs = b.num * (b.rat.numerator * a.rat.denominator)
                return bool(np.array_equal(lhs, rhs))
        return bool(np.allclose(self.to_float(), other.to_float(), atol=DEFAULT_TOL))

    __hash__ = None

    def exact_equal(self, other: "CMatrix") -> bool:
        """Equality decided in exact arithmetic only; raises TypeError otherwise."""
        if not (isinstance(other, CMatrix) and self.exact and other.exact):
            raise TypeError("exact comparison needs two exact matrices")
        if self.shape != other.shape:
            return False
        if self.rat == 0 or other.rat == 0:
            return self.rat == other.rat
        al = self._align(other)
        if al is None or self.rad != other.rad:
            raise TypeError(f"cannot align orders {self.L}, {other.L} / radicands {self.rad}, {other.rad}")
        a, b, _ = al
        lhs = a.num * (a.rat.numerator * b.rat.denominator)
        rhs = b.num * (b.rat.numerator * a.rat.denominator)
        return bool(np.array_equal(lhs, rhs))

    def is_zero(self) -> bool:
        if self.val is not None:
            return bool(np.max(np.abs(self.val), initial=0) < DEFAULT_TOL)
        return self.rat == 0

    def __repr__(self):
        kind = f"exact L={self.L}" if self.exact else "float"
        return f"CMatrix({self.rows}x{self.cols}, {kind})"

    # serialization --------------------------------------------------------
    def to_json(self, N: int | None = None) -> dict:
        """JSON form; exact scales are written as scaleRat * N**(scalePow/2).

        Without N (or when the radicand does not match N) the radicand itself
        plays the role of N and is stored as scaleBase.
        """
        if self.val is not None:
            return {
                "rows": self.rows,
                "cols": self.cols,
                "repr": "float",
                "entries": [[[float(z.real), float(z.imag)] for z in row] for row in self.val],
            }
        rat, pow_, base = self.rat, 0, None
        if self.rad > 1:
            s, f = squarefree_split(N) if N else (1, self.rad)
            if f == self.rad:
                # rat sqrt(f) = (rat / s) sqrt(N)
                rat, pow_, base = self.rat / s, 1, N or self.rad
            else:
                rat, pow_, base = self.rat, 1, self.rad
        out = {
            "rows": self.rows,
            "cols": self.cols,
            "repr": "exact",
            "order": self.L,
            "scalePow": pow_,
            "scaleRat": str(rat),
            "entries": [[[int(c) for c in cell] for cell in row] for row in self.num],
        }
        if base is not None and base != N:
            out["scaleBase"] = base
        return out

    @classmethod
    def from_json(cls, d: dict, N: int | None = None) -> "CMatrix":
        if d["repr"] == "float":
            return cls(val=np.array([[complex(*e) for e in row] for row in d["entries"]]))
        base = d.get("scaleBase", N)
        rat, rad = Fraction(d["scaleRat"]), 1
        pw = d["scalePow"]
        if pw:
            s, f = squarefree_split(base)
            if pw == 1:
                rat, rad = rat * s, f
            else:
                rat, rad = rat / (s * f), f
        return cls(np.array(d["entries"], dtype=np.int64), d["order"], rat, rad)


class CycloScalar:
    """rat * sqrt(rad) * sum_k num_k zeta_L**k, canonically reduced."""

    __slots__ = ("m",)

    def __init__(self, num, L=1, rat=Fraction(1), rad=1):
        num = np.asarray(num, dtype=np.int64).reshape(1, 1, -1)
        if num.shape[-1] != L:
            full = np.zeros((1, 1, L), dtype=np.int64)
            full[..., : num.shape[-1]] = num
            num = full
        self.m = CMatrix(num, L, rat, rad)

    @classmethod
    def _wrap(cls, m: CMatrix) -> "CycloScalar":
        if not m.exact:
            raise TypeError("scalar left the exact domain")
        out = cls.__new__(cls)
        out.m = m
        return out

    @classmethod
    def root(cls, L: int, k: int = 1) -> "CycloScalar":
        c = np.zeros(L, dtype=np.int64)
        c[k % L] = 1
        return cls(c, L)

    @classmethod
    def rational(cls, r) -> "CycloScalar":
        return cls([1], 1, Fraction(r))

    @property
    def L(self):
        return self.m.L

    @property
    def num(self):
        return self.m.num[0, 0]

    @property
    def rat(self):
        return self.m.rat

    @property
    def rad(self):
        return self.m.rad

    @property
    def coeffs(self) -> list[Fraction]:
        return [self.rat * int(c) for c in self.num]

    def __complex__(self):
        return complex(self.m.to_float()[0, 0])

    def _other(self, o):
        if isinstance(o, CycloScalar):
            return o
        if isinstance(o, (int, Fraction)):
            return CycloScalar.rational(o)
        return None

    def __mul__(self, o):
        o2 = self._other(o)
        if o2 is None:
            return complex(self) * o
        r = self.m @ o2.m
        return CycloScalar._wrap(r) if r.exact else complex(r.val[0, 0])

    __rmul__ = __mul__

    def __add__(self, o):
        o2 = self._other(o)
        if o2 is None:
            return complex(self) + o
        r = self.m + o2.m
        return CycloScalar._wrap(r) if r.exact else complex(r.val[0, 0])

    __radd__ = __add__

    def __sub__(self, o):
        o2 = self._other(o)
        if o2 is None:
            return complex(self) - o
        return self + (-o2)

    def __neg__(self):
        return CycloScalar._wrap(-self.m)

    def conj(self) -> "CycloScalar":
        return CycloScalar._wrap(self.m.conj())

    def abs2(self) -> "CycloScalar":
        return CycloScalar._wrap(self.m.abs2())

    def __pow__(self, n: int):
        out = CycloScalar.rational(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, o):
        o2 = self._other(o)
        if o2 is None:
            return abs(complex(self) - complex(o)) < DEFAULT_TOL
        return self.m == o2.m

    __hash__ = None

    def is_zero(self) -> bool:
        return self.m.rat == 0

    def reduce(self) -> "CycloScalar":
        return CycloScalar(self.num, self.L, self.rat, self.rad)

    def __repr__(self):
        return f"CycloScalar({complex(self):.6g}, L={self.L})"


# --- module-level operations ---------------------------------------------

def tensor(a: CMatrix, b: CMatrix) -> CMatrix:
    """Kronecker product with the first factor as the low index: k = k_a + k_b * n_a."""
    if a.exact and b.exact:
        L = common_order(a.L, b.L)
        if L is not None:
            A, B = a.embed(L), b.embed(L)
            ra, ca = A.shape
            rb, cb = B.shape
            out = np.zeros((rb, ra, cb, ca, L), dtype=np.int64)
            for s in range(L):
                As = A.num[..., s]
                if not As.any():
                    continue
                for t in range(L):
                    Bt = B.num[..., t]
                    if Bt.any():
                        out[..., (s + t) % L] += np.einsum("ij,kl->kilj", As, Bt)
            rat, rad = _mul_scale(A.rat, A.rad, B.rat, B.rad)
            return CMatrix(out.reshape(rb * ra, cb * ca, L), L, rat, rad)
    return CMatrix(val=np.kron(b.to_float(), a.to_float()))


def hstack(mats) -> CMatrix:
    """Concatenate columns; exact when all inputs share an order family and radicand."""
    mats = list(mats)
    nz = [m for m in mats if not (m.exact and m.rat == 0)]
    if all(m.exact for m in mats) and nz and len({m.rad for m in nz}) == 1:
        L = 1
        for m in mats:
            L = common_order(L, m.L) if L is not None else None
        if L is not None:
            num_g = math.gcd(*[m.rat.numerator for m in nz])
            den_l = math.lcm(*[m.rat.denominator for m in nz])
            r = Fraction(num_g, den_l)
            parts = [m.embed(L).num * int(m.rat / r) for m in mats]
            return CMatrix(np.concatenate(parts, axis=1), L, r, nz[0].rad)
    return CMatrix(val=np.concatenate([m.to_float() for m in mats], axis=1))


def kron_low_first(*mats: np.ndarray) -> np.ndarray:
    """Float Kronecker product, first factor carrying the lowest digit."""
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(m, out)
    return out


def cm_algebra(op: str, *args):
    if op == "add":
        return args[0] + args[1]
    if op == "mul":
        return args[0] @ args[1]
    if op == "scalar_mul":
        return args[0].scalar_mul(args[1])
    if op == "dagger":
        return args[0].dagger()
    if op == "trace":
        return args[0].trace()
    if op == "tensor":
        return tensor(args[0], args[1])
    if op == "to_float":
        return args[0].to_float()
    raise ValueError(f"unknown operation {op!r}")


def cm_checks(m, kind: str, tol: float = DEFAULT_TOL):
    """Maximum violation of the named property.

    unitary: |A A^dag / s - 1| where s = (A A^dag)_{00} absorbs a Hadamard scale.
    For exact input the result is exact (0 or a nonzero exact value).
    """
    if isinstance(m, np.ndarray):
        m = CMatrix(val=m)
    if kind in ("unitary", "hermitian") and m.rows != m.cols:
        raise NotSquare(f"{kind} check needs a square matrix, got {m.shape}")
    if kind == "unitary":
        g = m @ m.dagger()
        if g.exact:
            s = g.entry(0, 0)
            ref = CMatrix.identity(m.rows).scalar_mul(s)
            diff = g - ref
            return 0 if diff.is_zero() else float(np.max(np.abs(diff.to_float())))
        gf = g.to_float()
        s = gf[0, 0].real
        return float(np.max(np.abs(gf / s - np.eye(m.rows))))
    if kind == "hermitian":
        if m.exact:
            diff = m - m.dagger()
            return 0 if diff.is_zero() else float(np.max(np.abs(diff.to_float())))
        return float(np.max(np.abs(m.val - m.val.conj().T)))
    if kind == "unimodular_entries":
        a = m.to_float()
        return float(np.max(np.abs(np.abs(a) - 1.0)))
    raise ValueError(f"unknown check {kind!r}")
