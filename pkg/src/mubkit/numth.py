"""The prime-distinguishing function g(N), the multiplicative h(N), and the
Gauss-sum magnitudes behind them, exactly over square roots of integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .cnum import squarefree_split


@dataclass(frozen=True)
class RadicalValue:
    """sum_d c_d sqrt(d) with squarefree d and nonzero rational c_d."""

    terms: tuple = field(default=())  # sorted ((d, c_d), ...)

    @classmethod
    def of(cls, mapping: dict) -> RadicalValue:
        return cls(tuple(sorted((d, Fraction(c)) for d, c in mapping.items() if c != 0)))

    @classmethod
    def rational(cls, q) -> RadicalValue:
        return cls.of({1: Fraction(q)})

    @classmethod
    def sqrt(cls, n: int, coeff=1) -> RadicalValue:
        """coeff * sqrt(n) for any positive integer n."""
        s, f = squarefree_split(n)
        return cls.of({f: Fraction(coeff) * s})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other):
        other = _lift(other)
        acc = self.as_dict()
        for d, c in other.terms:
            acc[d] = acc.get(d, 0) + c
        return RadicalValue.of(acc)

    __radd__ = __add__

    def __neg__(self):
        return RadicalValue(tuple((d, -c) for d, c in self.terms))

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        acc: dict = {}
        for a, ca in self.terms:
            for b, cb in other.terms:
                g = math.gcd(a, b)
                d = a * b // (g * g)  # sqrt(a) sqrt(b) = g sqrt(ab/g^2)
                acc[d] = acc.get(d, 0) + ca * cb * g
        return RadicalValue.of(acc)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            return self.terms == _lift(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __float__(self):
        return float(sum(float(c) * math.sqrt(d) for d, c in self.terms))

    def sign(self) -> int:
        """Sign of the value; zero only for the empty map (square roots of
        distinct squarefree integers are linearly independent over Q)."""
        if self.is_zero():
            return 0
        v = float(self)
        if abs(v) < 1e-9 * max(1.0, sum(abs(float(c)) * math.sqrt(d) for d, c in self.terms)):
            raise ArithmeticError("value too close to zero for a float sign")
        return 1 if v > 0 else -1

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}" if d == 1 else f"{c}*sqrt({d})" for d, c in self.terms)


def _lift(x) -> RadicalValue:
    if isinstance(x, RadicalValue):
        return x
    if isinstance(x, (int, Fraction)):
        return RadicalValue.rational(x)
    raise TypeError(f"cannot combine RadicalValue with {type(x).__name__}")


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    out, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def is_prime_trial(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, math.isqrt(n) + 1))


def kept_count(N: int, d: int) -> int:
    """Number of n in 1..N-1 with gcd(n, N) = d that survive the omission rule."""
    N2 = N // d
    if N2 == 1:
        return 0
    phi = totient(N2)
    if N % 2 == 0 and N2 % 2 == 1:
        # n = d m with m coprime to N2; m and N2 - m have opposite parity, so half are even
        return phi // 2
    return phi


def g_exact(N: int) -> RadicalValue:
    """sum' sqrt(gcd(n, N)) - (N - 1), grouped by the divisor d = gcd(n, N)."""
    if N < 2:
        raise ValueError("g(N) needs N >= 2")
    acc = RadicalValue.rational(-(N - 1))
    for d in divisors(N)[:-1]:
        acc = acc + RadicalValue.sqrt(d, kept_count(N, d))
    return acc


def gauss_magnitude(N: int, n) -> np.ndarray:
    """N^{-1/2} |sum_l gamma_{2N}^{(N-l) l n}| evaluated in floating point."""
    n = np.atleast_1d(np.asarray(n, dtype=np.int64))
    l = np.arange(N, dtype=np.int64)
    e = ((N - l) * l) % (2 * N)
    ph = (e[None, :] * (n[:, None] % (2 * N))) % (2 * N)
    return np.abs(np.exp(1j * np.pi * ph / N).sum(axis=1)) / math.sqrt(N)


def g_float(N: int) -> float:
    """Direct evaluation of sum_n (N^{-1/2} |sum_l gamma_{2N}^{(N-l) l n}| - 1)."""
    if N < 2:
        raise ValueError("g(N) needs N >= 2")
    return float(np.sum(gauss_magnitude(N, np.arange(1, N)) - 1))


def gauss_rule(N: int, n: int) -> RadicalValue:
    """0 if N is even with N/gcd and n/gcd both odd, else sqrt(gcd(n, N))."""
    g = math.gcd(n, N)
    if N % 2 == 0 and (N // g) % 2 == 1 and (n // g) % 2 == 1:
        return RadicalValue()
    return RadicalValue.sqrt(g)


def gauss_sum_check(N: int, n: int, tol: float = 1e-8) -> RadicalValue:
    if not 1 <= n <= N - 1:
        raise ValueError("need 1 <= n <= N-1")
    rule = gauss_rule(N, n)
    val = float(gauss_magnitude(N, n)[0])
    if abs(val - float(rule)) > tol:
        raise ArithmeticError(f"Gauss sum {val} disagrees with {rule} at N={N}, n={n}")
    return rule


def h(N: int) -> RadicalValue:
    """g(N) + N + sqrt(N) - 1 (odd N) or g(N) + N + sqrt(N)/2 - 1 (even N); h(1) = 1."""
    if N == 1:
        return RadicalValue.rational(1)
    coeff = Fraction(1) if N % 2 else Fraction(1, 2)
    return g_exact(N) + RadicalValue.rational(N - 1) + RadicalValue.sqrt(N, coeff)


def g_prime_power(p: int, m: int) -> RadicalValue:
    """(p^{m/2} - 1)(p^{(m-1)/2} - 1)."""
    a = RadicalValue.sqrt(p ** m) - 1
    b = RadicalValue.sqrt(p ** (m - 1)) - 1
    return a * b


def g_two_p(p: int) -> float:
    """(sqrt p - 1)(sqrt 2 + 1 - sqrt p)/(2 + sqrt 2)."""
    r = math.sqrt(p)
    return (r - 1) * (math.sqrt(2) + 1 - r) / (2 + math.sqrt(2))


def is_prime_via_g(N: int) -> bool:
    return g_exact(N).is_zero()


def negative_count(limit: int) -> int:
    return sum(1 for N in range(2, limit + 1) if g_exact(N).sign() < 0)


def figure_table(limit: int = 50) -> list[tuple[int, float]]:
    """(N, g(N)/(N-1)) for 2 <= N <= limit."""
    return [(N, float(g_exact(N)) / (N - 1)) for N in range(2, limit + 1)]
