"""Cocommutative Hopf structures on truncated algebras."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg
from .algebra import AlgebraError, AlgElement, TensorSquareElement, TruncatedAlgebra, omega
from .automorphism import AugAutomorphism, BudgetExceeded, enumerate_automorphisms

GROUPLIKE_CAP = 2**20


class HopfError(ValueError):
    pass


class HopfStructure:
    """A comultiplication on A given by the images of the generators.

    Counit is the augmentation of A.  The antipode is solved for on first use
    and cached; recomputation always yields the same matrix, so a racing
    double computation is harmless.
    """

    def __init__(self, algebra: TruncatedAlgebra, coproduct_images: list[TensorSquareElement], label: str):
        if len(coproduct_images) != algebra.rank:
            raise HopfError(f"expected {algebra.rank} coproduct images")
        self.algebra = algebra
        self.coproduct_images = list(coproduct_images)
        self.label = label
        self._antipode: np.ndarray | None = None

    def __repr__(self) -> str:
        return f"HopfStructure({self.label})"

    def same_images(self, other: "HopfStructure") -> bool:
        return self.algebra == other.algebra and all(
            a == b for a, b in zip(self.coproduct_images, other.coproduct_images)
        )

    @cached_property
    def relations_ok(self) -> bool:
        return all(
            (d ** (self.algebra.p**n)).is_zero() for d, n in zip(self.coproduct_images, self.algebra.orders)
        )

    @cached_property
    def monomial_coproducts(self) -> np.ndarray:
        """D[e] is the coefficient matrix of the coproduct of the e-th basis monomial."""
        A = self.algebra
        out = [None] * A.dim
        out[0] = TensorSquareElement.one(A)
        for j, e in enumerate(A.exponents[1:], start=1):
            i = next(k for k, v in enumerate(e) if v)
            prev = list(e)
            prev[i] -= 1
            out[j] = out[A.index(prev)] * self.coproduct_images[i]
        return np.stack([t.coeffs for t in out])

    def coproduct(self, a: AlgElement) -> TensorSquareElement:
        A = self.algebra
        D = self.monomial_coproducts.reshape(A.dim, A.dim * A.dim)
        return TensorSquareElement(A, A.field.matmul(a.coeffs, D).reshape(A.dim, A.dim))

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "algebra": self.algebra.descriptor(),
            "coproduct": {n: d.to_json() for n, d in zip(self.algebra.names, self.coproduct_images)},
        }

    @classmethod
    def from_json(cls, algebra: TruncatedAlgebra, data: dict) -> "HopfStructure":
        imgs = [TensorSquareElement.from_json(algebra, data["coproduct"][n]) for n in algebra.names]
        return cls(algebra, imgs, data["label"])


def coproduct(H: HopfStructure, a: AlgElement) -> TensorSquareElement:
    return H.coproduct(a)


# --- catalog ---------------------------------------------------------------

def _cyclic_images(A: TruncatedAlgebra, i: int, n: int) -> list[tuple[str, TensorSquareElement]]:
    x = A.gen(i)
    p = A.p
    prim = TensorSquareElement.primitive(x)
    grouplike = prim + TensorSquareElement.pure(x, x)
    if n == 1:
        return [("G0", prim), ("G1", grouplike)]
    if n == 2:
        return [("G0", prim), ("G1", prim + omega(A, x**p)), ("G2", grouplike)]
    if n == 3:
        return [
            ("G0", prim),
            ("G1", prim + omega(A, x ** (p * p))),
            # omega(x^p) alone is not coassociative; the x^(p^2) correction fixes it
            ("G2", prim + omega(A, x**p) + omega(A, x ** (p * p)) * TensorSquareElement.primitive(x**p) ** (p - 1)),
            ("G3", grouplike),
        ]
    raise HopfError(f"no classification for k[x]/x^(p^{n})")


def catalog(A: TruncatedAlgebra) -> list[HopfStructure]:
    """Orbit representatives of cocommutative Hopf structures; the primitive one first."""
    if A.rank == 1:
        return [HopfStructure(A, [img], lab) for lab, img in _cyclic_images(A, 0, A.orders[0])]
    if A.orders == (1, 1):
        x, y = A.gens()
        px = TensorSquareElement.primitive(x)
        py = TensorSquareElement.primitive(y)
        gx = px + TensorSquareElement.pure(x, x)
        gy = py + TensorSquareElement.pure(y, y)
        return [
            HopfStructure(A, [px, py], "G0"),
            HopfStructure(A, [px, py + omega(A, x)], "G1"),
            HopfStructure(A, [px, gy], "G2"),
            HopfStructure(A, [gx, gy], "G3"),
        ]
    if any(n > 3 for n in A.orders):
        raise HopfError(f"unsupported algebra shape {A.orders}")
    factors = [_cyclic_images(A, i, n) for i, n in enumerate(A.orders)]
    out = []
    for combo in itertools.product(*factors):
        labels = [lab for lab, _ in combo]
        label = "G0" if all(lab == "G0" for lab in labels) else "*".join(labels)
        out.append(HopfStructure(A, [img for _, img in combo], label))
    return out


def catalog_entry(A: TruncatedAlgebra, label: str) -> HopfStructure:
    for H in catalog(A):
        if H.label == label:
            return H
    raise HopfError(f"no catalog structure {label!r} on {A}")


# --- axioms ------------------------------------------------------------------

@dataclass
class HopfReport:
    coassociative: bool
    cocommutative: bool
    counit_ok: bool
    antipode_ok: bool
    well_defined: bool = True
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.coassociative and self.cocommutative and self.counit_ok and self.antipode_ok and self.well_defined

    def to_json(self) -> dict:
        return {
            "well_defined": self.well_defined,
            "coassociative": self.coassociative,
            "cocommutative": self.cocommutative,
            "counit_ok": self.counit_ok,
            "antipode_ok": self.antipode_ok,
            "failures": [{"check": c, "witness": w} for c, w in self.failures],
        }


def _key(A: TruncatedAlgebra, j: int) -> str:
    return ".".join(str(v) for v in A.exponents[j])


def _coassociativity_defect(H: HopfStructure) -> np.ndarray:
    """Boolean per basis element: (D (x) id) D(b) != (id (x) D) D(b)."""
    A = H.algebra
    F = A.field
    n = A.dim
    D = H.monomial_coproducts  # (b, e, f)
    # left[b, k, i, j] = sum_e D[b, e, k] D[e, i, j]
    left = F.matmul(D.transpose(0, 2, 1).reshape(n * n, n), D.reshape(n, n * n)).reshape(n, n, n, n)
    left = left.transpose(0, 2, 3, 1)
    # right[b, i, j, k] = sum_f D[b, i, f] D[f, j, k]
    right = F.matmul(D.reshape(n * n, n), D.reshape(n, n * n)).reshape(n, n, n, n)
    return np.any((left != right).reshape(n, -1), axis=1)


def verify_bialgebra(H: HopfStructure, with_antipode: bool = True) -> HopfReport:
    """Check coassociativity, cocommutativity, counit (and the antipode) on every basis element."""
    A = H.algebra
    failures: list[tuple[str, str]] = []
    if not H.relations_ok:
        bad = [n for n, d, k in zip(A.names, H.coproduct_images, A.orders) if not (d ** (A.p**k)).is_zero()]
        return HopfReport(False, False, False, False, well_defined=False,
                          failures=[("relation", b) for b in bad])
    D = H.monomial_coproducts
    eye = np.eye(A.dim, dtype=np.int64)
    counit_bad = [j for j in range(A.dim) if not (np.array_equal(D[j][0], eye[j]) and np.array_equal(D[j][:, 0], eye[j]))]
    cocomm_bad = [j for j in range(A.dim) if not np.array_equal(D[j], D[j].T)]
    coass_bad = list(np.flatnonzero(_coassociativity_defect(H)))
    failures += [("counit", _key(A, j)) for j in counit_bad[:3]]
    failures += [("cocommutative", _key(A, j)) for j in cocomm_bad[:3]]
    failures += [("coassociative", _key(A, int(j))) for j in coass_bad[:3]]
    antipode_ok = False
    if with_antipode and not counit_bad and not coass_bad:
        try:
            antipode(H)
            antipode_ok = True
        except HopfError as exc:
            failures.append(("antipode", str(exc)))
    return HopfReport(
        coassociative=not coass_bad,
        cocommutative=not cocomm_bad,
        counit_ok=not counit_bad,
        antipode_ok=antipode_ok,
        failures=failures,
    )


def _mult_structure(A: TruncatedAlgebra) -> np.ndarray:
    """M[k, z, o] = 1 when e_k e_z = e_o."""
    T = A.mult_table
    M = np.zeros((A.dim, A.dim, A.dim), dtype=np.int64)
    k, z = np.nonzero(T >= 0)
    M[k, z, T[k, z]] = 1
    return M


def _convolution_check(H: HopfStructure, S: np.ndarray, side: str) -> bool:
    A = H.algebra
    F = A.field
    T = A.mult_table
    for b in range(A.dim):
        C = H.monomial_coproducts[b]
        # left: sum (S C)[k, z] e_k e_z; right: sum (C S^T)[a, k] e_a e_k
        W = F.matmul(S, C) if side == "left" else F.matmul(S, C.T).T
        lhs = np.zeros(A.dim, dtype=np.int64)
        for kk, zz in zip(*np.nonzero(W)):
            o = T[kk, zz]
            if o >= 0:
                lhs[o] = F.add(lhs[o], W[kk, zz])
        expect = np.zeros(A.dim, dtype=np.int64)
        expect[0] = 1 if b == 0 else 0
        if not np.array_equal(lhs, expect):
            return False
    return True


def antipode(H: HopfStructure) -> np.ndarray:
    """Matrix of S, the convolution inverse of the identity, solved on the basis."""
    if H._antipode is not None:
        return H._antipode
    A = H.algebra
    F = A.field
    n = A.dim
    D = H.monomial_coproducts  # (b, a, z)
    M = _mult_structure(A)  # (k, z, o)
    # E[b, o, k, a] = sum_z D[b, a, z] M[k, z, o]
    E = F.matmul(D.reshape(n * n, n), M.transpose(1, 0, 2).reshape(n, n * n)).reshape(n, n, n, n)
    E = E.transpose(0, 3, 2, 1).reshape(n * n, n * n)  # rows (b, o), cols (k, a)
    rhs = np.zeros(n * n, dtype=np.int64)
    rhs[0] = 1  # b = 1, o = 1
    sol = linalg.solve(F, E, rhs)
    if sol is None:
        raise HopfError("convolution system is inconsistent: no antipode")
    if linalg.nullspace(F, E).shape[1]:
        raise HopfError("convolution system is singular: antipode not unique")
    S = sol[:, 0].reshape(n, n)
    if not (_convolution_check(H, S, "left") and _convolution_check(H, S, "right")):
        raise HopfError("antipode fails the convolution axioms")
    H._antipode = S
    return S


def apply_antipode(H: HopfStructure, a: AlgElement) -> AlgElement:
    return AlgElement(H.algebra, H.algebra.field.matmul(antipode(H), a.coeffs))


# --- twisting, primitives, grouplikes ---------------------------------------

def twist_hopf(H: HopfStructure, phi: AugAutomorphism) -> HopfStructure:
    """Delta^phi = (phi (x) phi) o Delta o phi^-1 on generators."""
    if phi.algebra != H.algebra:
        raise AlgebraError("automorphism acts on a different algebra")
    A = H.algebra
    F = A.field
    P = phi.matrix
    images = []
    for inv_img in phi.inverse_images:
        C = H.coproduct(inv_img).coeffs
        images.append(TensorSquareElement(A, F.matmul(F.matmul(P, C), P.T)))
    return HopfStructure(A, images, f"twisted({H.label},{phi.label()})")


def primitives(H: HopfStructure) -> list[AlgElement]:
    """Basis of {u : Delta(u) = u (x) 1 + 1 (x) u}."""
    A = H.algebra
    F = A.field
    cols = []
    for j in range(A.dim):
        e = A.element(np.eye(A.dim, dtype=np.int64)[j])
        defect = TensorSquareElement(A, H.monomial_coproducts[j]) - TensorSquareElement.primitive(e)
        cols.append(defect.coeffs.reshape(-1))
    N = linalg.nullspace(F, np.stack(cols, axis=1))
    return [AlgElement(A, N[:, k]) for k in range(N.shape[1])]


def _radical_elements(A: TruncatedAlgebra, cap: int):
    q = A.field.q
    total = q ** (A.dim - 1)
    if total > cap:
        raise BudgetExceeded(f"radical has {total} elements over the working field (cap {cap})")
    chunk = 4096
    digits = np.array([q**i for i in reversed(range(A.dim - 1))], dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        U = np.zeros((idx.size, A.dim), dtype=np.int64)
        U[:, 1:] = (idx[:, None] // digits[None, :]) % q
        yield U


def grouplikes(H: HopfStructure, cap: int = GROUPLIKE_CAP) -> list[AlgElement]:
    """All g in 1 + rad over the working field with Delta(g) = g (x) g."""
    A = H.algebra
    F = A.field
    D = H.monomial_coproducts.reshape(A.dim, -1)
    out = []
    for U in _radical_elements(A, cap):
        G = U.copy()
        G[:, 0] = 1
        delta = F.matmul(G, D)
        outer = F.mul(G[:, :, None], G[:, None, :]).reshape(G.shape[0], -1)
        hits = np.flatnonzero(np.all(delta == outer, axis=1))
        out.extend(AlgElement(A, G[h]) for h in hits)
    return out


@dataclass
class IsoVerdict:
    kind: str  # "iso" | "no_iso_over_base_field" | "budget_exceeded"
    automorphism: AugAutomorphism | None = None
    searched: int = 0

    def to_json(self) -> dict:
        return {
            "verdict": self.kind,
            "automorphism": None if self.automorphism is None else self.automorphism.to_json(),
            "searched": self.searched,
            "scope": "base field only",
        }


def hopf_isomorphic(H1: HopfStructure, H2: HopfStructure, budget: int = 100_000) -> IsoVerdict:
    """Search the base-field automorphisms for phi with twist(H1, phi) == H2."""
    if H1.algebra != H2.algebra:
        raise AlgebraError("structures on different algebras")
    try:
        auts = enumerate_automorphisms(H1.algebra, budget)
        searched = 0
        for phi in auts:
            searched += 1
            if twist_hopf(H1, phi).same_images(H2):
                return IsoVerdict("iso", phi, searched)
    except BudgetExceeded:
        return IsoVerdict("budget_exceeded")
    return IsoVerdict("no_iso_over_base_field", None, searched)
