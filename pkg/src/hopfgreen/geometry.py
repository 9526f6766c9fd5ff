"""pi-points, supports, noble points and the automorphism action on points."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import AlgebraError, AlgElement, TruncatedAlgebra
from .automorphism import AugAutomorphism, BudgetExceeded
from .hopf import GROUPLIKE_CAP, HopfStructure, grouplikes, primitives
from .modules import AlgebraMorphism, Module, along_element
from .points import PointError, ProjPoint, rational_points, sort_key

__all__ = [
    "PiPoint",
    "ProjPoint",
    "PointError",
    "pi_point_from_element",
    "point_of",
    "point_element",
    "support",
    "support_is_partial",
    "noble_points",
    "aut_on_point",
    "isotropy_in",
    "all_points",
]


class PiPointError(ValueError):
    pass


@dataclass(frozen=True)
class PiPoint:
    element: AlgElement
    morphism: AlgebraMorphism


def is_flat(A: TruncatedAlgebra, u: AlgElement) -> bool:
    """A is free over k[u] iff u acts on A with rank dim(A)(p-1)/p."""
    r = linalg.rank(A.field, A.mult_matrix(u))
    return r * A.p == A.dim * (A.p - 1)


def pi_point_from_element(A: TruncatedAlgebra, u: AlgElement) -> PiPoint:
    if u.algebra != A:
        raise AlgebraError("element of a different algebra")
    if u.is_zero():
        raise PiPointError("u = 0 does not define a pi-point")
    if not u.in_radical():
        raise PiPointError("u is not in the augmentation ideal")
    if not (u**A.p).is_zero():
        raise PiPointError(f"u^{A.p} != 0")
    if not is_flat(A, u):
        raise PiPointError("not flat: rank test fails")
    return PiPoint(u, along_element(A, u))


def _coords(A: TruncatedAlgebra, u: AlgElement) -> list[int]:
    return [int(u.coeffs[j]) for j in A.null_coordinates()]


def point_of(A: TruncatedAlgebra, pi: PiPoint) -> ProjPoint:
    """Projective class of the leading coordinates of u (the linear part for Kronecker)."""
    c = _coords(A, pi.element)
    if A.is_cyclic:
        c = [1] if c[0] else c
    if not any(c):
        raise PiPointError("pi-point has zero leading coordinates")
    return ProjPoint(A.field, c)


def point_element(A: TruncatedAlgebra, pt: ProjPoint) -> AlgElement:
    """Canonical representative u = sum c_i x_i^(p^(n_i-1)) of a point."""
    if pt.dim != A.rank:
        raise PointError(f"point {pt} has the wrong number of coordinates for {A}")
    v = np.zeros(A.dim, dtype=np.int64)
    for c, j in zip(pt.coords, A.null_coordinates()):
        v[j] = c
    return AlgElement(A, v)


def support_is_partial(A: TruncatedAlgebra) -> bool:
    """True when only coordinate directions are examined."""
    return not (A.is_cyclic or A.is_elementary)


def all_points(A: TruncatedAlgebra) -> list[ProjPoint]:
    """Points examined by support for this shape."""
    if A.is_cyclic:
        return [ProjPoint(A.field, [1])]
    if A.is_elementary:
        return rational_points(A.field, A.rank)
    return [ProjPoint(A.field, [int(i == k) for i in range(A.rank)]) for k in range(A.rank)]


def _not_free(M: Module, S: np.ndarray, p: int) -> bool:
    return linalg.rank(M.algebra.field, S) * p < M.dim * (p - 1)


def support(A: TruncatedAlgebra, M: Module) -> list[ProjPoint]:
    """Points whose pi-point restriction of M is not free, sorted."""
    if M.algebra != A:
        raise AlgebraError("module over a different algebra")
    out = []
    for pt in all_points(A):
        S = M.action_of(point_element(A, pt))
        if _not_free(M, S, A.p):
            out.append(pt)
    return sorted(out, key=sort_key)


def _radical_span(A: TruncatedAlgebra, basis: list[AlgElement], cap: int):
    h = len(basis)
    q = A.field.q
    if q**h > cap:
        raise BudgetExceeded(f"{q**h} candidate elements exceed the cap {cap}")
    if h == 0:
        return
    B = np.stack([b.coeffs for b in basis])
    digits = q ** np.arange(h - 1, -1, -1)
    for idx in range(1, q**h):
        c = (idx // digits) % q
        yield AlgElement(A, A.field.matmul(c, B))


def noble_points(H: HopfStructure, cap: int = GROUPLIKE_CAP) -> list[ProjPoint]:
    """Points of order-p subgroups: primitive u with u^p = 0, or grouplike 1+u of order p."""
    A = H.algebra
    cands = list(_radical_span(A, primitives(H), cap))
    cands += [g - A.one() for g in grouplikes(H, cap) if not (g - A.one()).is_zero()]
    out = set()
    for u in cands:
        if not (u**A.p).is_zero() or not is_flat(A, u):
            continue
        out.add(point_of(A, PiPoint(u, along_element(A, u))))
    return sorted(out, key=sort_key)


def aut_on_point(phi: AugAutomorphism, pt: ProjPoint) -> ProjPoint:
    A = phi.algebra
    u = phi(point_element(A, pt))
    return point_of(A, pi_point_from_element(A, u))


def isotropy_in(phi: AugAutomorphism, pt: ProjPoint) -> bool:
    return aut_on_point(phi, pt) == pt
