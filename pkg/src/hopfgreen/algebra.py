"""Truncated polynomial algebras k[x_1..x_r]/(x_i^(p^n_i)) and their tensor squares."""

from __future__ import annotations

import json
from functools import cached_property
from math import comb, prod

import numpy as np

from .field import FiniteField, make_field

DEFAULT_DIM_CAP = 2**16
_NAMES = "xyzw"


class AlgebraError(ValueError):
    pass


def _trunc_mul(F: FiniteField, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of two coefficient arrays in a truncated polynomial ring.

    Both arrays have the shape of the exponent box; terms whose exponent
    leaves the box vanish.
    """
    if np.count_nonzero(a) > np.count_nonzero(b):
        a, b = b, a
    shape = a.shape
    out = np.zeros(shape, dtype=np.int64)
    for idx in zip(*np.nonzero(a)):
        dst = tuple(slice(i, None) for i in idx)
        src = tuple(slice(0, n - i) for i, n in zip(idx, shape))
        c = int(a[idx])
        out[dst] = F.add(out[dst], F.mul(c, b[src]) if c != 1 else b[src])
    return out


class TruncatedAlgebra:
    """Commutative local algebra with monomial basis in lexicographic exponent order."""

    def __init__(self, field: FiniteField, orders, dim_cap: int = DEFAULT_DIM_CAP):
        orders = tuple(int(n) for n in orders)
        if not orders or any(n < 1 for n in orders):
            raise AlgebraError("orders must be a nonempty list of positive exponents")
        self.field = field
        self.p = field.p
        self.orders = orders
        self.shape = tuple(field.p**n for n in orders)
        self.dim = prod(self.shape)
        if self.dim > dim_cap:
            raise AlgebraError(f"dimension {self.dim} exceeds the cap {dim_cap}")
        self.rank = len(orders)

    # --- descriptors ---------------------------------------------------
    def __eq__(self, other) -> bool:
        return isinstance(other, TruncatedAlgebra) and (self.field, self.orders) == (other.field, other.orders)

    def __hash__(self) -> int:
        return hash((self.field, self.orders))

    def __repr__(self) -> str:
        rels = ", ".join(f"{n}^{s}" for n, s in zip(self.names, self.shape))
        return f"{self.field}[{', '.join(self.names)}]/({rels})"

    @property
    def names(self) -> list[str]:
        if self.rank <= len(_NAMES):
            return list(_NAMES[: self.rank])
        return [f"x{i + 1}" for i in range(self.rank)]

    def gen_index(self, name) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.rank:
                raise AlgebraError(f"generator index {name} out of range")
            return name
        try:
            return self.names.index(name)
        except ValueError:
            raise AlgebraError(f"unknown generator {name!r}") from None

    @property
    def is_cyclic(self) -> bool:
        return self.rank == 1

    @property
    def is_elementary(self) -> bool:
        """All truncations are x_i^p = 0 (u of an abelian Lie algebra with zero p-map)."""
        return all(n == 1 for n in self.orders)

    @property
    def is_kronecker(self) -> bool:
        return self.p == 2 and self.orders == (1, 1)

    def descriptor(self) -> dict:
        return {"p": self.p, "ext": self.field.k, "orders": list(self.orders)}

    def to_json(self) -> str:
        return json.dumps(self.descriptor())

    @classmethod
    def from_descriptor(cls, desc: dict) -> "TruncatedAlgebra":
        return make_truncated_algebra(make_field(int(desc["p"]), int(desc.get("ext", 1))), desc["orders"])

    # --- basis ---------------------------------------------------------
    @cached_property
    def exponents(self) -> list[tuple[int, ...]]:
        return [tuple(int(v) for v in e) for e in np.ndindex(*self.shape)]

    def index(self, exponent) -> int:
        return int(np.ravel_multi_index(tuple(exponent), self.shape))

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([sum(e) for e in self.exponents], dtype=np.int64)

    @property
    def top_index(self) -> int:
        return self.dim - 1

    def monomial(self, exponent) -> "AlgElement":
        v = np.zeros(self.dim, dtype=np.int64)
        v[self.index(exponent)] = 1
        return AlgElement(self, v)

    def one(self) -> "AlgElement":
        return self.monomial((0,) * self.rank)

    def zero(self) -> "AlgElement":
        return AlgElement(self, np.zeros(self.dim, dtype=np.int64))

    def gen(self, i) -> "AlgElement":
        i = self.gen_index(i)
        e = [0] * self.rank
        e[i] = 1
        return self.monomial(e)

    def gens(self) -> list["AlgElement"]:
        return [self.gen(i) for i in range(self.rank)]

    def element(self, coeffs) -> "AlgElement":
        return AlgElement(self, self.field.array(np.asarray(coeffs).reshape(self.dim)))

    def scalar(self, c: int) -> "AlgElement":
        v = np.zeros(self.dim, dtype=np.int64)
        v[0] = c
        return AlgElement(self, v)

    def null_coordinates(self) -> list[int]:
        """Basis indices of x_i^(p^(n_i - 1)), the coordinate directions of p-nilpotent elements."""
        out = []
        for i, n in enumerate(self.orders):
            e = [0] * self.rank
            e[i] = self.p ** (n - 1)
            out.append(self.index(e))
        return out

    def parse(self, text: str) -> "AlgElement":
        """Parse a polynomial such as ``x + y*z`` or ``1 + 2*x^3`` in the generator names."""
        from sympy import Poly, SympifyError, symbols, sympify

        gens = symbols(self.names)
        try:
            expr = sympify(text.replace("^", "**"), locals=dict(zip(self.names, gens)))
        except (SympifyError, SyntaxError, TypeError) as exc:
            raise AlgebraError(f"cannot parse {text!r}: {exc}") from None
        extra = expr.free_symbols - set(gens)
        if extra:
            raise AlgebraError(f"unknown generators {sorted(map(str, extra))} in {text!r}; have {list(self.names)}")
        try:
            poly = Poly(expr, *gens)
        except Exception as exc:
            raise AlgebraError(f"{text!r} is not a polynomial: {exc}") from None
        if any(not c.is_Integer for c in poly.coeffs()):
            raise AlgebraError(f"non-integer coefficient in {text!r}")
        out = self.zero()
        for monom, coeff in poly.terms():
            if any(e >= s for e, s in zip(monom, self.shape)):
                continue
            out = out + self.monomial(monom) * self.field.from_int(int(coeff))
        return out

    @cached_property
    def mult_table(self) -> np.ndarray:
        """mult_table[i, j] is the basis index of e_i * e_j, or -1 when the product vanishes."""
        E = np.array(self.exponents, dtype=np.int64)
        S = E[:, None, :] + E[None, :, :]
        ok = np.all(S < np.array(self.shape), axis=2)
        flat = np.zeros(S.shape[:2], dtype=np.int64)
        stride = 1
        for axis in reversed(range(self.rank)):
            flat += S[:, :, axis] * stride
            stride *= self.shape[axis]
        return np.where(ok, flat, -1)

    def mult_matrix(self, a: "AlgElement") -> np.ndarray:
        """Matrix of left multiplication by a on the monomial basis."""
        cols = [(a * self.element(np.eye(self.dim, dtype=np.int64)[j])).coeffs for j in range(self.dim)]
        return np.stack(cols, axis=1)

    def augmentation(self, a: "AlgElement") -> int:
        return int(a.coeffs[0])

    # --- tensor powers ---------------------------------------------------
    @cached_property
    def square(self) -> "TruncatedAlgebra":
        return TruncatedAlgebra(self.field, self.orders + self.orders, dim_cap=self.dim**2)


def make_truncated_algebra(field: FiniteField, orders, dim_cap: int = DEFAULT_DIM_CAP) -> TruncatedAlgebra:
    return TruncatedAlgebra(field, orders, dim_cap)


class AlgElement:
    """Element of a truncated algebra stored as a coefficient vector on the monomial basis."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: TruncatedAlgebra, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if coeffs.shape != (algebra.dim,):
            raise AlgebraError(f"coefficient vector of length {coeffs.shape} for algebra of dim {algebra.dim}")
        self.algebra = algebra
        self.coeffs = coeffs

    @property
    def field(self) -> FiniteField:
        return self.algebra.field

    def _check(self, other: "AlgElement") -> None:
        if other.algebra != self.algebra:
            raise AlgebraError("elements belong to different algebras")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.algebra.scalar(self.field.from_int(other))
        self._check(other)
        return AlgElement(self.algebra, self.field.add(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return AlgElement(self.algebra, self.field.neg(self.coeffs))

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.algebra.scalar(self.field.from_int(other))
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return AlgElement(self.algebra, self.field.mul(int(other), self.coeffs))
        self._check(other)
        return alg_mul(self.algebra, self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        result = self.algebra.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgElement) and self.algebra == other.algebra and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.algebra, self.coeffs.tobytes()))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def in_radical(self) -> bool:
        return self.coeffs[0] == 0

    def augmentation(self) -> int:
        return int(self.coeffs[0])

    def linear_part(self) -> np.ndarray:
        """Coefficients of the generators x_1 .. x_r."""
        A = self.algebra
        return np.array([self.coeffs[A.index(tuple(int(j == i) for j in range(A.rank)))] for i in range(A.rank)])

    def terms(self) -> dict[tuple[int, ...], int]:
        return {self.algebra.exponents[i]: int(self.coeffs[i]) for i in np.flatnonzero(self.coeffs)}

    def to_json(self) -> dict[str, int]:
        return {".".join(str(v) for v in e): c for e, c in self.terms().items()}

    @classmethod
    def from_json(cls, algebra: TruncatedAlgebra, data: dict) -> "AlgElement":
        v = np.zeros(algebra.dim, dtype=np.int64)
        for key, c in data.items():
            v[algebra.index(tuple(int(s) for s in key.split(".")))] = int(c)
        return AlgElement(algebra, algebra.field.array(v))

    def __repr__(self) -> str:
        return format_element(self)


def format_element(a: AlgElement) -> str:
    names = a.algebra.names
    parts = []
    for e, c in a.terms().items():
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
        if not mono:
            parts.append(str(c))
        else:
            parts.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(parts) if parts else "0"


def alg_mul(A: TruncatedAlgebra, a: AlgElement, b: AlgElement) -> AlgElement:
    """Product in A: exponents add, anything past a truncation vanishes."""
    out = _trunc_mul(A.field, a.coeffs.reshape(A.shape), b.coeffs.reshape(A.shape))
    return AlgElement(A, out.reshape(A.dim))


class TensorSquareElement:
    """Element of A (x) A.

    Stored as the coefficient matrix ``C`` with ``C[i, j]`` the coefficient
    of ``e_i (x) e_j``; :meth:`terms` gives the sparse view.  A (x) A is
    itself a truncated algebra in 2r generators, which is how products are
    computed.
    """

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: TruncatedAlgebra, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if coeffs.shape != (algebra.dim, algebra.dim):
            raise AlgebraError("tensor coefficient matrix has the wrong shape")
        self.algebra = algebra
        self.coeffs = coeffs

    @classmethod
    def pure(cls, a: AlgElement, b: AlgElement) -> "TensorSquareElement":
        F = a.field
        return cls(a.algebra, F.mul(a.coeffs[:, None], b.coeffs[None, :]))

    @classmethod
    def zero(cls, A: TruncatedAlgebra) -> "TensorSquareElement":
        return cls(A, np.zeros((A.dim, A.dim), dtype=np.int64))

    @classmethod
    def one(cls, A: TruncatedAlgebra) -> "TensorSquareElement":
        return cls.pure(A.one(), A.one())

    @classmethod
    def primitive(cls, a: AlgElement) -> "TensorSquareElement":
        """a (x) 1 + 1 (x) a."""
        one = a.algebra.one()
        return cls.pure(a, one) + cls.pure(one, a)

    def __add__(self, other: "TensorSquareElement") -> "TensorSquareElement":
        return TensorSquareElement(self.algebra, self.algebra.field.add(self.coeffs, other.coeffs))

    def __neg__(self):
        return TensorSquareElement(self.algebra, self.algebra.field.neg(self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        A = self.algebra
        if isinstance(other, (int, np.integer)):
            return TensorSquareElement(A, A.field.mul(int(other), self.coeffs))
        shape = A.shape + A.shape
        out = _trunc_mul(A.field, self.coeffs.reshape(shape), other.coeffs.reshape(shape))
        return TensorSquareElement(A, out.reshape(A.dim, A.dim))

    def __pow__(self, n: int):
        result = TensorSquareElement.one(self.algebra)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TensorSquareElement)
            and self.algebra == other.algebra
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self) -> int:
        return hash(self.coeffs.tobytes())

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def swap(self) -> "TensorSquareElement":
        return TensorSquareElement(self.algebra, self.coeffs.T.copy())

    def terms(self) -> dict[tuple[tuple[int, ...], tuple[int, ...]], int]:
        E = self.algebra.exponents
        return {(E[i], E[j]): int(self.coeffs[i, j]) for i, j in zip(*np.nonzero(self.coeffs))}

    def to_json(self) -> dict[str, int]:
        key = lambda e: ".".join(str(v) for v in e)  # noqa: E731
        return {f"{key(a)}|{key(b)}": c for (a, b), c in self.terms().items()}

    @classmethod
    def from_json(cls, algebra: TruncatedAlgebra, data: dict) -> "TensorSquareElement":
        C = np.zeros((algebra.dim, algebra.dim), dtype=np.int64)
        for k, c in data.items():
            a, b = k.split("|")
            C[algebra.index([int(s) for s in a.split(".")]), algebra.index([int(s) for s in b.split(".")])] = int(c)
        return cls(algebra, algebra.field.array(C))

    def __repr__(self) -> str:
        A = self.algebra
        parts = []
        for (a, b), c in self.terms().items():
            left = format_element(A.monomial(a))
            right = format_element(A.monomial(b))
            parts.append(f"{'' if c == 1 else f'{c}*'}{left}(x){right}")
        return " + ".join(parts) if parts else "0"


def omega(A: TruncatedAlgebra, t: AlgElement) -> TensorSquareElement:
    """sum_{i=1}^{p-1} ((p-1)!/(i!(p-i)!)) t^i (x) t^(p-i), coefficients reduced mod p."""
    p = A.p
    out = TensorSquareElement.zero(A)
    for i in range(1, p):
        c = A.field.from_int(comb(p, i) // p)
        if c:
            out = out + TensorSquareElement.pure(t**i, t ** (p - i)) * c
    return out
