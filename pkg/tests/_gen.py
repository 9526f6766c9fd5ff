"""Seeded generators of modules with known decompositions."""

from collections import Counter

import numpy as np

from hopfgreen import linalg
from hopfgreen.geometry import support
from hopfgreen.modules import (
    Module, direct_sum, induce_trivial, jordan_module, kronecker_module, regular_module, trivial_module,
)
from hopfgreen.points import rational_points


def random_invertible(F, n: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        Q = F.random(rng, (n, n))
        if linalg.is_invertible(F, Q):
            return Q


def scramble(M: Module, rng: np.random.Generator) -> Module:
    """Same module in a random basis, so no block structure is visible."""
    Q = random_invertible(M.algebra.field, M.dim, rng)
    return Module(M.algebra, M.conjugate(Q), label=M.label)


def indecomposables(A, max_n: int = 3) -> list[tuple[str, Module]]:
    """Classified indecomposables of small dimension over A."""
    out = [("J1", trivial_module(A))]
    if A.is_cyclic:
        out += [(f"J{i}", jordan_module(A, i)) for i in range(2, A.dim + 1)]
        return out
    out.append(("P", regular_module(A)))
    if A.orders == (1, 1) and A.p == 2:
        for pt in rational_points(A.field, 2):
            for n in range(1, max_n + 1):
                M = kronecker_module(A, n, pt)
                out.append((M.label, M))
    else:
        for i in range(A.rank):
            M = induce_trivial(A, i)
            out.append((M.label, M))
    return out


def random_sum(A, rng: np.random.Generator, max_parts: int = 4, max_dim: int = 24, max_n: int = 3):
    """A scrambled direct sum and the multiset of its summand labels."""
    pool = indecomposables(A, max_n)
    k = int(rng.integers(1, max_parts + 1))
    parts, dim = [], 0
    for _ in range(k):
        for _ in range(20):
            lab, M = pool[int(rng.integers(len(pool)))]
            if dim + M.dim <= max_dim:
                parts.append((lab, M))
                dim += M.dim
                break
    M = direct_sum([m for _, m in parts], algebra=A)
    return scramble(M, rng), dict(Counter(lab for lab, _ in parts))


def random_jordan(A, rng: np.random.Generator, max_parts: int = 5):
    sizes = [int(s) for s in rng.integers(1, A.dim + 1, size=int(rng.integers(1, max_parts + 1)))]
    M = direct_sum([trivial_module(A) if s == 1 else jordan_module(A, s) for s in sizes], algebra=A)
    return scramble(M, rng), dict(Counter(sizes))


def support_set(A, M) -> set:
    return set(support(A, M))
