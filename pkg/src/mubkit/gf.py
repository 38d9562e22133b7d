"""Galois field GF(p^m) arithmetic with integer labels.

A field element is an integer ``0 <= i < p**m``; its base-p digits
``(i_0, ..., i_{m-1})`` are the coefficients of a polynomial in x, so the
element ``p**j`` stands for ``x**j``.  Addition is digit-wise mod p and the
product is the bilinear form ``c_k = a M_k b^T`` built from the defining
relation ``x**m = sum_l mu_l x**l``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class NotPrime(ValueError):
    pass


class ReduciblePolynomial(ValueError):
    pass


class AxiomViolation(AssertionError):
    pass


# printed choices of x**m for the worked examples
_DEFAULT_MU = {
    (2, 2): (1, 1),  # 2*2 = 3
    (2, 3): (1, 0, 1),  # 2*4 = 5
    (2, 4): (1, 1, 0, 0),  # 2*8 = 3
    (2, 5): (1, 0, 1, 0, 0),  # 2*16 = 5
    (3, 3): (1, 2, 2),  # 3*9 = 25
}

TABLE_LIMIT = 1 << 10  # full multiplication table up to this N
INVERSE_LIMIT = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(n: int) -> tuple[int, int] | None:
    """Return (p, m) with n = p**m, or None."""
    if n < 2:
        return None
    p = 2
    while n % p:
        p += 1
    m = 0
    while n % p == 0:
        n //= p
        m += 1
    return (p, m) if n == 1 else None


# --- polynomials over GF(p), coefficient lists low -> high ---------------

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, b, p):
    a = _poly_trim(a)
    b = _poly_trim(b)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a = _poly_trim(a)
    return a


def defining_poly(mu, p):
    """Coefficients of x**m - sum mu_l x**l."""
    return [(-c) % p for c in mu] + [1]


def is_irreducible(mu, p) -> bool:
    """Trial division by every monic polynomial of degree 1..m//2."""
    f = defining_poly(mu, p)
    m = len(mu)
    for d in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(f, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    for mu in itertools.product(range(p), repeat=m):
        if mu[0] != 0 and is_irreducible(mu, p):
            return tuple(mu)
    raise ReduciblePolynomial(f"no irreducible polynomial of degree {m} over GF({p})")


def inv_mod_matrix(a: np.ndarray, p: int) -> np.ndarray:
    """Gauss-Jordan inverse of an integer matrix mod p."""
    n = a.shape[0]
    aug = np.concatenate([a % p, np.eye(n, dtype=np.int64)], axis=1).astype(np.int64)
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r, col] % p), None)
        if piv is None:
            raise ValueError("matrix is singular mod p")
        aug[[col, piv]] = aug[[piv, col]]
        aug[col] = aug[col] * pow(int(aug[col, col]), p - 2, p) % p
        for r in range(n):
            if r != col and aug[r, col]:
                aug[r] = (aug[r] - aug[r, col] * aug[col]) % p
    return aug[:, n:]


def power_coefficients(mu, p) -> np.ndarray:
    """Row s holds the digits of x**s for s = 0 .. 2m-2.

    Recurrence: M^(s)_k = M^(s-1)_{k-1} + mu_k M^(s-1)_{m-1}.
    """
    m = len(mu)
    rows = np.zeros((max(2 * m - 1, 1), m), dtype=np.int64)
    for s in range(rows.shape[0]):
        if s < m:
            rows[s, s] = 1
            continue
        prev = rows[s - 1]
        top = prev[m - 1]
        cur = np.zeros(m, dtype=np.int64)
        cur[1:] = prev[:-1]
        cur = (cur + top * np.asarray(mu)) % p
        rows[s] = cur
    return rows


@dataclass(frozen=True)
class GfSpec:
    p: int
    m: int
    mu: tuple[int, ...]
    N: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "N", self.p ** self.m)

    # structure --------------------------------------------------------
    @cached_property
    def mult_matrices(self) -> np.ndarray:
        """Array of shape (m, m, m); entry [k, j, l] = digit k of x**(j+l)."""
        m = self.m
        pw = power_coefficients(self.mu, self.p)
        mats = np.zeros((m, m, m), dtype=np.int64)
        for j in range(m):
            for l in range(m):
                mats[:, j, l] = pw[j + l]
        return mats

    @cached_property
    def mult_matrix_inverses(self) -> np.ndarray:
        return np.stack([inv_mod_matrix(mk, self.p) for mk in self.mult_matrices])

    @cached_property
    def dual_gens(self) -> tuple[int, ...]:
        inv0 = self.mult_matrix_inverses[0]
        return tuple(self.from_digits(inv0[n]) for n in range(self.m))

    @cached_property
    def _weights(self) -> np.ndarray:
        return self.p ** np.arange(self.m, dtype=np.int64)

    @cached_property
    def digit_table(self) -> np.ndarray:
        """digits of every element, shape (N, m)."""
        return self.digits(np.arange(self.N))

    def digits(self, a):
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._weights) % self.p

    def from_digits(self, d) -> int | np.ndarray:
        out = (np.asarray(d, dtype=np.int64) % self.p) @ self._weights
        return int(out) if np.ndim(out) == 0 else out

    # element-wise arithmetic (scalars or arrays) -----------------------
    def add(self, a, b):
        if self.m == 1:
            return (np.asarray(a) + b) % self.p if np.ndim(a) or np.ndim(b) else (a + b) % self.p
        r = self.from_digits(self.digits(a) + self.digits(b))
        return r

    def neg(self, a):
        if self.m == 1:
            return (-np.asarray(a)) % self.p if np.ndim(a) else (-a) % self.p
        return self.from_digits(-self.digits(a))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.m == 1:
            return (np.asarray(a) * b) % self.p if np.ndim(a) or np.ndim(b) else (a * b) % self.p
        if self.N <= TABLE_LIMIT:
            r = self.mul_table[a, b]
            return int(r) if np.ndim(r) == 0 else r
        da, db = self.digits(a), self.digits(b)
        c = np.einsum("...j,kjl,...l->...k", da, self.mult_matrices, db) % self.p
        return self.from_digits(c)

    @cached_property
    def mul_table(self) -> np.ndarray:
        d = self.digit_table
        if self.m == 1:
            i = np.arange(self.N)
            return np.outer(i, i) % self.p
        c = np.einsum("aj,kjl,bl->abk", d, self.mult_matrices, d) % self.p
        return c @ self._weights

    @cached_property
    def add_table(self) -> np.ndarray:
        d = self.digit_table
        return ((d[:, None, :] + d[None, :, :]) % self.p) @ self._weights

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self.from_digits(-self.digit_table)

    @cached_property
    def inv_table(self) -> np.ndarray:
        """Multiplicative inverses via a discrete-log table; entry 0 is -1."""
        N = self.N
        if N > INVERSE_LIMIT:
            raise ValueError("inverse table only precomputed for N <= 2**16")
        order = N - 1
        for g in range(2, N) if N > 2 else [1]:
            exp = [1]
            x = 1
            for _ in range(order - 1):
                x = self.mul(x, g)
                if x == 1:
                    break
                exp.append(x)
            if len(exp) == order:
                break
        inv = np.full(N, -1, dtype=np.int64)
        inv[1] = 1
        for e, x in enumerate(exp):
            inv[x] = exp[(-e) % order]
        return inv

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in a field")
        if self.m == 1:
            return pow(int(a), self.p - 2, self.p)
        if self.N <= INVERSE_LIMIT:
            return int(self.inv_table[a])
        return _poly_inverse(self, int(a))

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by 0 in a field")
        return self.mul(a, self.inv(b))

    def char_exp(self, g):
        """Exponent of gamma = exp(2 pi i/p) that gamma^g reduces to: digit g_0."""
        return np.asarray(g) % self.p if np.ndim(g) else int(g) % self.p

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "mu": list(self.mu),
            "multMatrices": self.mult_matrices.tolist(),
        }


def _poly_inverse(spec: GfSpec, a: int) -> int:
    # lazy extended Euclid on polynomials for fields beyond the table limit
    p = spec.p
    f = defining_poly(spec.mu, p)
    r0, r1 = f, _poly_trim([int(x) for x in spec.digits(a)])
    s0, s1 = [], [1]
    while r1:
        q, r = _poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mulp(q, s1, p), p)
    c = pow(r0[0], p - 2, p)
    s0 = [x * c % p for x in s0] + [0] * spec.m
    return spec.from_digits(s0[: spec.m])


def _poly_divmod(a, b, p):
    a = _poly_trim(a)
    q = [0] * max(len(a) - len(b) + 1, 1)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b) and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a = _poly_trim(a)
    return _poly_trim(q), a


def _poly_mulp(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _poly_trim([(x - y) % p for x, y in zip(a, b)])


def gf_new(p: int, m: int = 1, mu_override=None) -> GfSpec:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m < 1:
        raise ValueError("m must be positive")
    if mu_override is not None:
        mu = tuple(int(c) % p for c in mu_override)
        if len(mu) != m:
            raise ValueError(f"mu must have {m} coefficients")
        if not is_irreducible(mu, p):
            raise ReduciblePolynomial(f"x^{m} - sum {mu} x^l is reducible over GF({p})")
    elif m == 1:
        mu = (1,)  # unused: the product is plain multiplication mod p
    else:
        mu = _DEFAULT_MU.get((p, m)) or smallest_irreducible(p, m)
    return GfSpec(p, m, mu)


def gf_for(N: int, mu_override=None) -> GfSpec:
    pm = prime_power(N)
    if pm is None:
        raise NotPrime(f"{N} is not a prime power")
    return gf_new(pm[0], pm[1], mu_override)


def gf_arith(spec, op: str, a: int, b: int | None = None) -> int:
    for x in (a, b):
        if x is not None and not 0 <= x < spec.N:
            raise ValueError(f"{x} is not an element of GF({spec.N})")
    if op == "add":
        return int(spec.add(a, b))
    if op == "sub":
        return int(spec.sub(a, b))
    if op == "neg":
        return int(spec.neg(a))
    if op == "mul":
        return int(spec.mul(a, b))
    if op == "div":
        return int(spec.div(a, b))
    if op == "inv":
        return spec.inv(a)
    raise ValueError(f"unknown operation {op!r}")


def gf_char_exp(spec, g: int) -> int:
    return spec.char_exp(g)


# --- exhaustive axiom checks --------------------------------------------

@dataclass
class TableRing:
    """A finite ring given by explicit tables, e.g. integers mod n."""

    N: int
    p: int
    add_table: np.ndarray
    mul_table: np.ndarray
    char: np.ndarray  # exponent of the additive character, mod p

    def add(self, a, b):
        r = self.add_table[a, b]
        return int(r) if np.ndim(r) == 0 else r

    def mul(self, a, b):
        r = self.mul_table[a, b]
        return int(r) if np.ndim(r) == 0 else r


def ring_mod(n: int) -> TableRing:
    i = np.arange(n)
    return TableRing(n, n, (i[:, None] + i[None, :]) % n, (i[:, None] * i[None, :]) % n, i % n)


def _tables(spec):
    if isinstance(spec, TableRing):
        return spec.add_table, spec.mul_table, spec.char, spec.p
    if spec.N > 256:
        raise ValueError("exhaustive axiom check limited to N <= 256")
    return spec.add_table, spec.mul_table, spec.mul_table * 0 + np.arange(spec.N) % spec.p, spec.p


def gf_verify_axioms(spec) -> dict:
    """Exhaustive field-axiom check; raises AxiomViolation naming a failing case."""
    add, mul, _, p = _tables(spec)
    N = add.shape[0]
    char = np.arange(N) % p if not isinstance(spec, TableRing) else spec.char
    report = {}

    def fail(name, triple):
        raise AxiomViolation(f"{name} fails at {tuple(int(t) for t in triple)}")

    for name, tab in (("add", add), ("mul", mul)):
        bad = np.argwhere(tab != tab.T)
        if len(bad):
            fail(f"commutativity of {name}", bad[0])
        for a in range(N):
            lhs = tab[tab[a]]  # (a.b).c  indexed [b, c]
            rhs = tab[a][tab]  # a.(b.c)
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                fail(f"associativity of {name}", (a, *bad[0]))
        report[f"{name}_commutative"] = True
        report[f"{name}_associative"] = True
    for a in range(N):
        lhs = mul[a][add]  # a(b+c)
        rhs = add[mul[a][:, None], mul[a][None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            fail("distributivity", (a, *bad[0]))
    report["distributive"] = True
    for a in range(N):
        if (add[a] == 0).sum() != 1:
            fail("unique additive inverse", (a,))
    for a in range(1, N):
        hits = np.flatnonzero(mul[a] == 1)
        if len(hits) != 1:
            zero_div = np.flatnonzero(mul[a] == 0)
            witness = (a, int(zero_div[1])) if len(zero_div) > 1 else (a,)
            fail("unique multiplicative inverse", witness)
    report["inverses"] = True
    # sum_j gamma^{j*i} = N delta_{i,0}, exact: the digit histogram must be flat
    for i in range(N):
        counts = np.bincount(char[mul[:, i]], minlength=p)
        flat = bool(np.all(counts == counts[0]))
        if flat == (i == 0):
            fail("character identity", (i,))
    report["character_identity"] = True
    # gamma^i gamma^j = gamma^(i+j)
    if not np.array_equal(char[add], (char[:, None] + char[None, :]) % p):
        fail("additive character", (0,))
    report["additive_character"] = True
    return report
