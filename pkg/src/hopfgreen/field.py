"""Finite fields GF(p^k) with vectorised numpy arithmetic.

Elements are the integers ``0 .. q-1``; an integer encodes the coefficient
vector of a polynomial over GF(p) in base-p digits (least significant digit is
the constant term).  For ``k == 1`` this is ordinary arithmetic mod p.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

SUPPORTED_PRIMES = (2, 3, 5, 7)
MAX_ORDER = 1024


class FieldError(ValueError):
    pass


def _poly_divmod(num: list[int], den: list[int], p: int) -> tuple[list[int], list[int]]:
    num = list(num)
    inv_lead = pow(den[-1], p - 2, p)
    quot = [0] * max(len(num) - len(den) + 1, 1)
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        c = num[-1] * inv_lead % p
        quot[shift] = c
        for i, d in enumerate(den):
            num[shift + i] = (num[shift + i] - c * d) % p
        while num and num[-1] == 0:
            num.pop()
    return quot, num


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(modulus) - 1
    if deg < 1 or modulus[-1] % p == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            _, rem = _poly_divmod(list(modulus), list(low) + [1], p)
            if not any(rem):
                return False
    return True


def _first_irreducible(p: int, k: int) -> tuple[int, ...]:
    for low in itertools.product(range(p), repeat=k):
        cand = tuple(reversed(low)) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")  # pragma: no cover


class FiniteField:
    """The field GF(p^k).

    ``modulus`` is the coefficient tuple (constant term first) of the monic
    irreducible polynomial defining the extension; it is ``(0, 1)`` for prime
    fields.
    """

    def __init__(self, p: int, k: int = 1, modulus: tuple[int, ...] | None = None):
        if p not in SUPPORTED_PRIMES:
            raise FieldError(f"unsupported characteristic {p}; expected one of {SUPPORTED_PRIMES}")
        if k < 1:
            raise FieldError("extension degree must be >= 1")
        if p**k > MAX_ORDER:
            raise FieldError(f"field order {p}^{k} exceeds the supported maximum {MAX_ORDER}")
        if modulus is None:
            modulus = (0, 1) if k == 1 else _first_irreducible(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) - 1 != k:
            raise FieldError(f"modulus degree {len(modulus) - 1} does not match k={k}")
        if modulus[-1] != 1:
            raise FieldError("modulus must be monic")
        if k > 1 and not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self._build_tables()

    def _build_tables(self) -> None:
        q, p, k = self.q, self.p, self.k
        if k == 1:
            idx = np.arange(q)
            self._inv = np.array([0] + [pow(int(a), p - 2, p) for a in range(1, p)], dtype=np.int64)
            self._add_t = None
            self._mul_t = None
            self._neg = (-idx) % p
            return
        digits = np.array([[(a // p**i) % p for i in range(k)] for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(k)
        add_t = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        neg = ((-digits) % p) @ weights
        mul_t = np.zeros((q, q), dtype=np.int64)
        red = [list(self.modulus)]
        for a in range(q):
            for b in range(a, q):
                prod = np.convolve(digits[a], digits[b]) % p
                _, rem = _poly_divmod([int(c) for c in prod], red[0], p)
                rem = rem + [0] * (k - len(rem))
                v = int(np.dot(rem[:k], weights))
                mul_t[a, b] = mul_t[b, a] = v
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul_t[a] == 1)[0][0])
        self._add_t = add_t.astype(np.int64)
        self._mul_t = mul_t
        self._neg = neg.astype(np.int64)
        self._inv = inv

    # --- descriptors ---------------------------------------------------
    @property
    def is_prime(self) -> bool:
        return self.k == 1

    def elements(self) -> range:
        """Canonical enumeration order 0, 1, ..., q-1."""
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.k, self.modulus) == (
            other.p,
            other.k,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def to_json(self) -> dict:
        return {"p": self.p, "ext": self.k, "modulus": list(self.modulus)}

    # --- elementwise arithmetic (scalars or arrays) ----------------------
    def add(self, a, b):
        if self._add_t is None:
            return (np.asarray(a) + b) % self.p
        return self._add_t[a, b]

    def neg(self, a):
        return self._neg[a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self._mul_t is None:
            return (np.asarray(a) * b) % self.p
        return self._mul_t[a, b]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self._inv[a]

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> GF(q)."""
        return int(n) % self.p

    def array(self, values) -> np.ndarray:
        arr = np.asarray(values, dtype=np.int64)
        if self.is_prime:
            return arr % self.p
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise FieldError("array entries are not field elements")
        return arr

    def sum(self, arr, axis=None):
        arr = np.asarray(arr)
        if self.is_prime:
            return arr.sum(axis=axis) % self.p
        arr = arr.ravel() if axis is None else np.moveaxis(arr, axis, 0)
        acc = np.zeros(arr.shape[1:], dtype=np.int64)
        for row in arr:
            acc = self.add(acc, row)
        return acc

    def matmul(self, A, B) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if self.is_prime:
            # float64 products are exact here: entries < 7 and inner dims stay far below 2**40
            out = A.astype(np.float64) @ B.astype(np.float64)
            return np.rint(np.fmod(out, self.p)).astype(np.int64)
        if A.ndim == 1:
            return self.matmul(A[None, :], B)[0]
        vec = B.ndim == 1
        if vec:
            B = B[:, None]
        acc = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for i in range(A.shape[1]):
            acc = self.add(acc, self.mul(A[:, i][:, None], B[i, :][None, :]))
        return acc[:, 0] if vec else acc

    def power(self, a: int, n: int) -> int:
        r = 1
        for _ in range(n):
            r = int(self.mul(r, a))
        return r

    def random(self, rng: np.random.Generator, size=None):
        return rng.integers(0, self.q, size=size)


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1, modulus: tuple[int, ...] | None = None) -> FiniteField:
    """Return GF(p^k); cached so equal requests share tables."""
    return FiniteField(p, k, modulus)
