"""Augmented automorphisms of truncated algebras."""

from __future__ import annotations

import itertools
from typing import Iterator

import numpy as np

from . import linalg
from .algebra import AlgebraError, AlgElement, TruncatedAlgebra


class BudgetExceeded(RuntimeError):
    pass


def _linear_map(A: TruncatedAlgebra, images: list[AlgElement]) -> np.ndarray:
    """Matrix of the algebra endomorphism determined by generator images."""
    cols = [None] * A.dim
    cols[0] = A.one()
    for j, e in enumerate(A.exponents[1:], start=1):
        i = next(k for k, v in enumerate(e) if v)
        prev = list(e)
        prev[i] -= 1
        cols[j] = cols[A.index(prev)] * images[i]
    return np.stack([c.coeffs for c in cols], axis=1)


class AugAutomorphism:
    """Automorphism of A fixing the augmentation, given on generators.

    The inverse is computed eagerly from the induced linear map, so a
    singular map fails at construction.
    """

    def __init__(self, algebra: TruncatedAlgebra, images: list[AlgElement], name: str | None = None):
        if len(images) != algebra.rank:
            raise AlgebraError(f"expected {algebra.rank} generator images, got {len(images)}")
        for i, (img, n) in enumerate(zip(images, algebra.orders)):
            if img.algebra != algebra:
                raise AlgebraError("image lies in a different algebra")
            if not img.in_radical():
                raise AlgebraError(f"image of {algebra.names[i]} is not in the radical")
            if not (img ** (algebra.p**n)).is_zero():
                raise AlgebraError(f"image of {algebra.names[i]} violates {algebra.names[i]}^{algebra.p**n} = 0")
        self.algebra = algebra
        self.images = list(images)
        self.matrix = _linear_map(algebra, self.images)
        try:
            self.inverse_matrix = linalg.inverse(algebra.field, self.matrix)
        except np.linalg.LinAlgError:
            raise AlgebraError("induced linear map is singular (linear part not invertible)") from None
        self.inverse_images = [AlgElement(algebra, self.inverse_matrix[:, algebra.gen(i).coeffs.argmax()])
                               for i in range(algebra.rank)]
        self.name = name

    def __call__(self, a: AlgElement) -> AlgElement:
        return AlgElement(self.algebra, self.algebra.field.matmul(self.matrix, a.coeffs))

    def apply_inverse(self, a: AlgElement) -> AlgElement:
        return AlgElement(self.algebra, self.algebra.field.matmul(self.inverse_matrix, a.coeffs))

    def inverse(self) -> "AugAutomorphism":
        name = None if self.name is None else f"{self.name}^-1"
        return AugAutomorphism(self.algebra, self.inverse_images, name=name)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AugAutomorphism)
            and self.algebra == other.algebra
            and all(a == b for a, b in zip(self.images, other.images))
        )

    def __hash__(self) -> int:
        return hash(tuple(img.coeffs.tobytes() for img in self.images))

    def is_identity(self) -> bool:
        return all(img == g for img, g in zip(self.images, self.algebra.gens()))

    def label(self) -> str:
        if self.name:
            return self.name
        return "phi[" + ", ".join(f"{n}->{img!r}" for n, img in zip(self.algebra.names, self.images)) + "]"

    def to_json(self) -> dict:
        return {"name": self.name, "images": {n: img.to_json() for n, img in zip(self.algebra.names, self.images)}}

    def __repr__(self) -> str:
        return f"AugAutomorphism({self.label()})"


def make_automorphism(A: TruncatedAlgebra, images, name: str | None = None) -> AugAutomorphism:
    images = [A.parse(img) if isinstance(img, str) else img for img in images]
    return AugAutomorphism(A, images, name=name)


def identity_automorphism(A: TruncatedAlgebra) -> AugAutomorphism:
    return AugAutomorphism(A, A.gens(), name="id")


def aut_compose(phi: AugAutomorphism, psi: AugAutomorphism) -> AugAutomorphism:
    """phi o psi (apply psi first)."""
    if phi.algebra != psi.algebra:
        raise AlgebraError("automorphisms of different algebras")
    name = None
    if phi.name and psi.name:
        name = f"{phi.name}*{psi.name}"
    return AugAutomorphism(phi.algebra, [phi(img) for img in psi.images], name=name)


def _gl_size(r: int, q: int) -> int:
    out = 1
    for i in range(r):
        out *= q**r - q**i
    return out


def automorphism_search_size(A: TruncatedAlgebra) -> int:
    """Invertible linear parts times choices of radical-squared coefficients."""
    q = A.field.q
    higher = A.dim - 1 - A.rank
    return _gl_size(A.rank, q) * q ** (A.rank * higher)


def enumerate_automorphisms(A: TruncatedAlgebra, budget: int = 100_000) -> Iterator[AugAutomorphism]:
    """Every augmented automorphism defined over the working field, in a fixed order."""
    size = automorphism_search_size(A)
    if size > budget:
        raise BudgetExceeded(f"automorphism search space {size} exceeds budget {budget}")
    F = A.field
    r = A.rank
    gen_idx = [A.gen(i).coeffs.argmax() for i in range(r)]
    higher_idx = [j for j in range(1, A.dim) if j not in set(gen_idx)]
    count = 0
    for lin in itertools.product(F.elements(), repeat=r * r):
        L = np.array(lin, dtype=np.int64).reshape(r, r)
        if not linalg.is_invertible(F, L):
            continue
        for high in itertools.product(F.elements(), repeat=r * len(higher_idx)):
            H = np.array(high, dtype=np.int64).reshape(r, len(higher_idx))
            images = []
            ok = True
            for i in range(r):
                v = np.zeros(A.dim, dtype=np.int64)
                v[gen_idx] = L[i]
                v[higher_idx] = H[i]
                img = AlgElement(A, v)
                if not (img ** (A.p ** A.orders[i])).is_zero():
                    ok = False
                    break
                images.append(img)
            if ok:
                yield AugAutomorphism(A, images, name=f"phi-{count}")
                count += 1


def random_automorphism(A: TruncatedAlgebra, rng: np.random.Generator, tries: int = 1000) -> AugAutomorphism:
    """A random valid automorphism over the working field (rejection sampling)."""
    F = A.field
    r = A.rank
    gen_idx = [A.gen(i).coeffs.argmax() for i in range(r)]
    for _ in range(tries):
        images = []
        for i in range(r):
            v = F.random(rng, A.dim)
            v[0] = 0
            images.append(AlgElement(A, v))
        L = np.array([img.coeffs[gen_idx] for img in images])
        if not linalg.is_invertible(F, L):
            continue
        if all((img ** (A.p**n)).is_zero() for img, n in zip(images, A.orders)):
            return AugAutomorphism(A, images)
    raise BudgetExceeded("no valid random automorphism found")
