"""Arithmetic in GF(p^n) for odd primes p.

Elements are plain ints in ``[0, q)``.  The base-p digits of an element are
the coefficients ``c_0 .. c_{n-1}`` of its residue polynomial, constant term
first, so the prime subfield is exactly ``range(p)`` and lookup tables can be
dense arrays indexed by element.

Scalar operations (:meth:`Field.add`, :meth:`Field.mul`, ...) work directly on
coefficient vectors.  The vectorised tables (:attr:`Field.add_table`,
:attr:`Field.mul_table`, ...) are built from discrete logarithms and are only
materialised on first use.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import product

import numpy as np

__all__ = [
    "FieldError",
    "NotPrimeError",
    "EvenCharacteristicError",
    "ReducibleModulusError",
    "BadModulusError",
    "FieldOverflowError",
    "Field",
    "make_field",
    "is_prime",
    "prime_factors",
]


class FieldError(ValueError):
    """Base class for field construction errors."""


class NotPrimeError(FieldError):
    pass


class EvenCharacteristicError(FieldError):
    pass


class ReducibleModulusError(FieldError):
    pass


class BadModulusError(FieldError):
    """Modulus has the wrong degree, is not monic, or has out-of-range coefficients."""


class FieldOverflowError(FieldError):
    pass


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    k = 3
    while k * k <= m:
        if m % k == 0:
            return False
        k += 2
    return True


def prime_factors(m: int) -> list[int]:
    """Distinct prime divisors of ``m`` in increasing order."""
    out = []
    k = 2
    while k * k <= m:
        if m % k == 0:
            out.append(k)
            while m % k == 0:
                m //= k
        k += 1
    if m > 1:
        out.append(m)
    return out


# -- coefficient-vector helpers over F_p (lists, constant term first) ---------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_rem(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m`` over F_p."""
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * c) % p
        _trim(a)
    return a


def _is_irreducible(m: list[int], p: int) -> bool:
    """Trial division of the monic ``m`` by every monic polynomial of degree <= deg(m)/2."""
    n = len(m) - 1
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_rem(m, list(low) + [1], p):
                return False
    return True


def _canonical_modulus(p: int, n: int) -> tuple[int, ...]:
    for enc in range(p**n):
        low = [(enc // p**i) % p for i in range(n)]
        m = low + [1]
        if _is_irreducible(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")  # unreachable


@dataclass(frozen=True, eq=False)
class Field:
    """The finite field GF(p^n) with a fixed defining polynomial.

    Construct through :func:`make_field`, which validates the parameters.
    """

    p: int
    n: int
    modulus: tuple[int, ...]
    q: int = dc_field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p**self.n)

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and (self.p, self.n, self.modulus) == (other.p, other.n, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    def __repr__(self):
        return f"Field(p={self.p}, n={self.n}, modulus={list(self.modulus)})"

    @property
    def label(self) -> str:
        return f"F_{self.p}" if self.n == 1 else f"F_{self.p}^{self.n}"

    # -- encoding -----------------------------------------------------------

    def digits(self, x: int) -> list[int]:
        p = self.p
        return [(x // p**i) % p for i in range(self.n)]

    def from_digits(self, ds) -> int:
        p = self.p
        return sum((int(c) % p) * p**i for i, c in enumerate(ds))

    def const(self, k: int) -> int:
        """The prime-subfield element ``k mod p`` (so ``const(-3)`` is -3)."""
        return k % self.p

    def check(self, x: int) -> int:
        if not 0 <= x < self.q:
            raise ValueError(f"{x} is not an element of {self.label}")
        return x

    # -- scalar arithmetic --------------------------------------------------

    def add(self, x: int, y: int) -> int:
        p = self.p
        out, scale = 0, 1
        for _ in range(self.n):
            out += ((x % p + y % p) % p) * scale
            x //= p
            y //= p
            scale *= p
        return out

    def neg(self, x: int) -> int:
        p = self.p
        out, scale = 0, 1
        for _ in range(self.n):
            out += ((-x) % p) * scale
            x //= p
            scale *= p
        return out

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if self.n == 1:
            return (x * y) % self.p
        a, b = self.digits(x), self.digits(y)
        prod = [0] * (2 * self.n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        return self.from_digits(_poly_rem(prod, list(self.modulus), self.p))

    def pow(self, x: int, k: int) -> int:
        """``x**k`` by square-and-multiply; ``pow(0, 0) == 1``."""
        if k < 0:
            raise ValueError("negative exponent")
        result, base = 1, x
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self.label}")
        return self.pow(x, self.q - 2)

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def trace(self, x: int) -> int:
        """Absolute trace ``sum_i x^(p^i)``; the result lies in ``range(p)``."""
        acc, frob = 0, x
        for _ in range(self.n):
            acc = self.add(acc, frob)
            frob = self.pow(frob, self.p)
        return acc

    def chi(self, x: int) -> int:
        """Quadratic character: 0, +1 on nonzero squares, -1 otherwise."""
        if x == 0:
            return 0
        return 1 if self.pow(x, (self.q - 1) // 2) == 1 else -1

    def sqrt(self, x: int) -> int | None:
        """Square root with the smaller encoding of ``{r, -r}``, or None."""
        for r in range(self.q):
            if self.mul(r, r) == x:
                return r
        return None

    def order(self, x: int) -> int:
        """Multiplicative order of a nonzero element."""
        if x == 0:
            raise ZeroDivisionError("0 has no multiplicative order")
        k = self.q - 1
        for ell in prime_factors(self.q - 1):
            while k % ell == 0 and self.pow(x, k // ell) == 1:
                k //= ell
        return k

    @cached_property
    def primitive_element(self) -> int:
        """Generator of F* with the smallest encoding."""
        exps = [(self.q - 1) // ell for ell in prime_factors(self.q - 1)]
        for g in range(1, self.q):
            if all(self.pow(g, e) != 1 for e in exps):
                return g
        raise AssertionError("no primitive element")  # unreachable

    @cached_property
    def half(self) -> int:
        return self.inv(2)

    # -- vectorised tables --------------------------------------------------

    @cached_property
    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    @cached_property
    def digit_matrix(self) -> np.ndarray:
        """Row ``x`` holds the coefficient vector of ``x``."""
        e = self.elements
        return np.stack([(e // self.p**i) % self.p for i in range(self.n)], axis=1)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return ((-self.digit_matrix) % self.p) @ (self.p ** np.arange(self.n))

    @cached_property
    def add_table(self) -> np.ndarray:
        e = self.elements
        out = np.zeros((self.q, self.q), dtype=np.int64)
        for i in range(self.n):
            w = self.p**i
            d = (e // w) % self.p
            out += ((d[:, None] + d[None, :]) % self.p) * w
        return out

    @cached_property
    def sub_table(self) -> np.ndarray:
        return self.add_table[:, self.neg_table]

    @cached_property
    def exp_table(self) -> np.ndarray:
        """``exp_table[k] = g**k`` for the primitive element g, k in [0, q-1)."""
        g = self.primitive_element
        out = np.empty(self.q - 1, dtype=np.int64)
        x = 1
        for k in range(self.q - 1):
            out[k] = x
            x = self.mul(x, g)
        return out

    @cached_property
    def log_table(self) -> np.ndarray:
        """Discrete log base g; entry 0 is a sentinel (-1)."""
        out = np.full(self.q, -1, dtype=np.int64)
        out[self.exp_table] = np.arange(self.q - 1)
        return out

    @cached_property
    def mul_table(self) -> np.ndarray:
        lg = self.log_table
        out = self.exp_table[(lg[:, None] + lg[None, :]) % (self.q - 1)]
        out[0, :] = 0
        out[:, 0] = 0
        return out

    @cached_property
    def inv_table(self) -> np.ndarray:
        """Inverse map with 0 -> 0."""
        return self.power_array(self.q - 2)

    @cached_property
    def chi_table(self) -> np.ndarray:
        # g^k is a square iff k is even
        out = np.where(self.log_table % 2 == 0, 1, -1)
        out[0] = 0
        return out

    @cached_property
    def trace_table(self) -> np.ndarray:
        acc = np.zeros(self.q, dtype=np.int64)
        frob = self.elements
        to_p = self.power_array(self.p)
        for _ in range(self.n):
            acc = self.add_table[acc, frob]
            frob = to_p[frob]
        return acc

    def power_array(self, d: int) -> np.ndarray:
        """``x**d`` for every element x (with ``0**0 == 1``)."""
        if d < 0:
            raise ValueError("negative exponent")
        out = np.empty(self.q, dtype=np.int64)
        out[1:] = self.exp_table[(self.log_table[1:] * (d % (self.q - 1))) % (self.q - 1)]
        out[0] = 1 if d == 0 else 0
        return out


def make_field(p: int, n: int = 1, modulus=None) -> Field:
    """Validate parameters and build GF(p^n).

    Without ``modulus`` the canonical one is used: the monic irreducible of
    degree n whose low coefficients, read as a base-p integer, are smallest.
    For n = 1 that is ``X`` and arithmetic is plain arithmetic mod p.
    """
    p, n = int(p), int(n)
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    if p == 2:
        raise EvenCharacteristicError("characteristic 2 is not supported")
    if n < 1:
        raise FieldError(f"degree must be >= 1, got {n}")
    if p**n > sys.maxsize:
        raise FieldOverflowError(f"{p}^{n} does not fit a native integer")
    if modulus is None:
        mod = _canonical_modulus(p, n)
    else:
        mod = tuple(int(c) for c in modulus)
        if len(mod) != n + 1:
            raise BadModulusError(f"modulus must have {n + 1} coefficients, got {len(mod)}")
        if any(not 0 <= c < p for c in mod):
            raise BadModulusError("modulus coefficients must lie in [0, p)")
        if mod[-1] != 1:
            raise BadModulusError("modulus must be monic")
        if not _is_irreducible(list(mod), p):
            raise ReducibleModulusError(f"{list(mod)} is reducible over F_{p}")
    return Field(p, n, mod)
