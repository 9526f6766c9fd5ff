"""Finite-dimensional modules over truncated algebras, given by generator actions."""

from __future__ import annotations

import re

import numpy as np

from . import linalg
from .algebra import AlgebraError, AlgElement, TruncatedAlgebra, make_truncated_algebra
from .automorphism import AugAutomorphism
from .points import ProjPoint


class ModuleError(ValueError):
    pass


class Module:
    """Commuting nilpotent matrices, one per generator of the algebra."""

    def __init__(self, algebra: TruncatedAlgebra, actions, label: str | None = None, check: bool = True):
        self.algebra = algebra
        F = algebra.field
        actions = [F.array(a) for a in actions]
        if len(actions) != algebra.rank:
            raise ModuleError(f"expected {algebra.rank} action matrices, got {len(actions)}")
        dims = {a.shape for a in actions}
        if len(dims) != 1 or any(len(s) != 2 or s[0] != s[1] for s in dims):
            raise ModuleError("action matrices must be square of equal size")
        self.dim = actions[0].shape[0]
        self.actions = actions
        self.label = label
        self._mono: dict[int, np.ndarray] = {}
        if check:
            self.validate()

    def validate(self) -> None:
        A = self.algebra
        F = A.field
        for i, X in enumerate(self.actions):
            if linalg.matrix_power(F, X, A.p ** A.orders[i]).any():
                raise ModuleError(f"{A.names[i]}^{A.p ** A.orders[i]} does not act as zero")
            for j in range(i):
                if not np.array_equal(F.matmul(X, self.actions[j]), F.matmul(self.actions[j], X)):
                    raise ModuleError(f"actions of {A.names[j]} and {A.names[i]} do not commute")

    def __repr__(self) -> str:
        name = self.label or "Module"
        return f"<{name} dim={self.dim} over {self.algebra}>"

    def mono(self, j: int) -> np.ndarray:
        """Action matrix of the j-th basis monomial (memoized)."""
        M = self._mono.get(j)
        if M is not None:
            return M
        A = self.algebra
        e = A.exponents[j]
        if j == 0:
            M = linalg.identity(self.dim)
        else:
            i = next(k for k, v in enumerate(e) if v)
            prev = list(e)
            prev[i] -= 1
            M = A.field.matmul(self.mono(A.index(prev)), self.actions[i])
        self._mono[j] = M
        return M

    def action_of(self, a: AlgElement) -> np.ndarray:
        if a.algebra != self.algebra:
            raise AlgebraError("element of a different algebra")
        F = self.algebra.field
        out = linalg.zeros(self.dim)
        for j in np.flatnonzero(a.coeffs):
            out = F.add(out, F.mul(int(a.coeffs[j]), self.mono(int(j))))
        return out

    def fingerprint(self) -> tuple[int, ...]:
        """Ranks of every non-unit monomial action; an isomorphism invariant."""
        F = self.algebra.field
        return tuple(linalg.rank(F, self.mono(j)) for j in range(1, self.algebra.dim))

    def submodule_on(self, basis: np.ndarray, label: str | None = None) -> "Module":
        """Module on the span of the columns of basis, which must be invariant."""
        F = self.algebra.field
        L = linalg.left_inverse(F, basis)
        acts = [F.matmul(L, F.matmul(X, basis)) for X in self.actions]
        return Module(self.algebra, acts, label=label, check=False)

    def conjugate(self, Q: np.ndarray) -> list[np.ndarray]:
        """Actions in the basis given by the columns of the invertible Q."""
        F = self.algebra.field
        Qi = linalg.inverse(F, Q)
        return [F.matmul(Qi, F.matmul(X, Q)) for X in self.actions]

    def same_matrices(self, other: "Module") -> bool:
        return self.algebra == other.algebra and all(np.array_equal(a, b) for a, b in zip(self.actions, other.actions))

    def to_json(self) -> dict:
        q = self.algebra.field.q
        w = len(format(q - 1, "x"))
        return {
            "algebra": self.algebra.descriptor(),
            "dim": self.dim,
            "label": self.label,
            "actions": {
                n: ["".join(format(int(v), f"0{w}x") for v in row) for row in X]
                for n, X in zip(self.algebra.names, self.actions)
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "Module":
        A = TruncatedAlgebra.from_descriptor(data["algebra"])
        w = len(format(A.field.q - 1, "x"))
        d = data["dim"]
        acts = []
        for n in A.names:
            rows = data["actions"][n]
            acts.append(np.array([[int(r[k * w:(k + 1) * w], 16) for k in range(d)] for r in rows],
                                 dtype=np.int64).reshape(d, d))
        return cls(A, acts, label=data.get("label"))


# --- constructions -----------------------------------------------------------

def regular_module(A: TruncatedAlgebra) -> Module:
    return Module(A, [A.mult_matrix(g) for g in A.gens()], label="P", check=False)


def trivial_module(A: TruncatedAlgebra, dim: int = 1) -> Module:
    return Module(A, [linalg.zeros(dim) for _ in range(A.rank)], label="J1" if dim == 1 else f"{dim}J1", check=False)


def jordan_block(i: int) -> np.ndarray:
    """x e_j = e_(j+1): ones on the subdiagonal."""
    return np.eye(i, k=-1, dtype=np.int64)


def jordan_module(A: TruncatedAlgebra, i: int) -> Module:
    if not A.is_cyclic:
        raise ModuleError("Jordan modules need a single-generator algebra")
    if not 1 <= i <= A.dim:
        raise ModuleError(f"block size {i} outside 1..{A.dim}")
    return Module(A, [jordan_block(i)], label=f"J{i}", check=False)


def default_aux(point: ProjPoint) -> ProjPoint:
    a, b = point.coords
    return ProjPoint(point.field, (0, 1) if b == 0 else (1, 0))


def kronecker_module(A: TruncatedAlgebra, n: int, point: ProjPoint, aux: ProjPoint | None = None) -> Module:
    """V_2n(point): s2 = ax+by acts by (0 N; 0 0), s1 = cx+dy by (0 I; 0 0)."""
    if A.orders != (1, 1):
        raise ModuleError("Kronecker modules need k[x,y]/(x^p,y^p)")
    if n < 1:
        raise ModuleError("half-dimension must be >= 1")
    F = A.field
    if point.field != F or point.dim != 2:
        raise ModuleError(f"point {point} is not a point of the line over {F}")
    aux = default_aux(point) if aux is None else aux
    a, b = point.coords
    c, d = aux.coords
    det = int(F.sub(F.mul(c, b), F.mul(d, a)))
    if det == 0:
        raise ModuleError(f"auxiliary direction {aux} is parallel to {point}")
    S1 = linalg.zeros(2 * n)
    S2 = linalg.zeros(2 * n)
    for j in range(n):
        S1[j, n + j] = 1
        if j:
            S2[j - 1, n + j] = 1
    inv = int(F.inv(det))
    X = F.mul(inv, F.sub(F.mul(b, S1), F.mul(d, S2)))
    Y = F.mul(inv, F.sub(F.mul(c, S2), F.mul(a, S1)))
    return Module(A, [X, Y], label=f"V{2 * n}@{point}", check=False)


def _kron(F, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    if F.is_prime:
        return np.kron(P, Q) % F.p
    m, n = P.shape
    r, s = Q.shape
    return F.mul(P[:, None, :, None], Q[None, :, None, :]).reshape(m * r, n * s)


def tensor_module(H, M: Module, N: Module) -> Module:
    """M (x) N with x_i acting through the coproduct Delta(x_i) of H."""
    A = H.algebra
    if M.algebra != A or N.algebra != A:
        raise AlgebraError("tensor factors live over a different algebra")
    F = A.field
    acts = []
    for img in H.coproduct_images:
        X = linalg.zeros(M.dim * N.dim)
        for a, b in zip(*np.nonzero(img.coeffs)):
            term = _kron(F, M.mono(int(a)), N.mono(int(b)))
            X = F.add(X, F.mul(int(img.coeffs[a, b]), term))
        acts.append(X)
    label = None
    if M.label and N.label:
        label = f"({M.label})(x)({N.label})"
    return Module(A, acts, label=label, check=False)


class AlgebraMorphism:
    """Augmented algebra map given on the generators of the source."""

    def __init__(self, source: TruncatedAlgebra, target: TruncatedAlgebra, images: list[AlgElement]):
        if len(images) != source.rank:
            raise AlgebraError(f"expected {source.rank} images")
        if source.field != target.field:
            raise AlgebraError("source and target fields differ")
        for i, img in enumerate(images):
            if img.algebra != target:
                raise AlgebraError("image outside the target algebra")
            if not img.in_radical():
                raise AlgebraError(f"image of {source.names[i]} is not in the radical")
            if not (img ** (source.p ** source.orders[i])).is_zero():
                raise AlgebraError(f"image of {source.names[i]} violates the source relation")
        self.source = source
        self.target = target
        self.images = list(images)

    def __repr__(self) -> str:
        return "AlgebraMorphism(" + ", ".join(f"{n}->{img!r}" for n, img in zip(self.source.names, self.images)) + ")"


def cyclic_source(A: TruncatedAlgebra, s: int = 1) -> TruncatedAlgebra:
    """k[t]/t^(p^s) over the field of A."""
    return make_truncated_algebra(A.field, [s])


def along_element(A: TruncatedAlgebra, u: AlgElement, s: int = 1) -> AlgebraMorphism:
    """t -> u from k[t]/t^(p^s)."""
    return AlgebraMorphism(cyclic_source(A, s), A, [u])


def generator_inclusion(A: TruncatedAlgebra, i: int) -> AlgebraMorphism:
    """k[t]/t^(p^n_i) -> A, t -> x_i."""
    return along_element(A, A.gen(i), A.orders[i])


def restrict_module(f: AlgebraMorphism, M: Module) -> Module:
    if M.algebra != f.target:
        raise AlgebraError("module is not over the morphism target")
    return Module(f.source, [M.action_of(img) for img in f.images], check=False)


def induce_trivial(A: TruncatedAlgebra, gen_index: int) -> Module:
    """A / (A x_gen) with left multiplication; x_gen acts as zero."""
    if not 0 <= gen_index < A.rank:
        raise AlgebraError(f"no generator with index {gen_index}")
    keep = [j for j, e in enumerate(A.exponents) if e[gen_index] == 0]
    pos = {j: k for k, j in enumerate(keep)}
    acts = []
    for i in range(A.rank):
        X = linalg.zeros(len(keep))
        if i != gen_index:
            for j in keep:
                e = list(A.exponents[j])
                e[i] += 1
                if e[i] < A.shape[i]:
                    X[pos[A.index(e)], pos[j]] = 1
        acts.append(X)
    return Module(A, acts, label=f"ind({A.names[gen_index]})", check=False)


def induce_along(A: TruncatedAlgebra, u: AlgElement, label: str | None = None) -> Module:
    """A / (A u) with left multiplication (J1 induced from the subalgebra k[u])."""
    F = A.field
    ideal = linalg.column_basis(F, A.mult_matrix(u))
    comp = linalg.complete_basis(F, ideal, A.dim)
    W = linalg.inverse(F, np.hstack([ideal, comp]))[ideal.shape[1]:]
    acts = [F.matmul(W, F.matmul(A.mult_matrix(g), comp)) for g in A.gens()]
    return Module(A, acts, label=label, check=False)


def twist_module(phi: AugAutomorphism, M: Module) -> Module:
    """M^phi: x_i acts by phi^-1(x_i)."""
    if phi.algebra != M.algebra:
        raise AlgebraError("automorphism of a different algebra")
    label = None if M.label is None else f"twist({phi.label()},{M.label})"
    return Module(M.algebra, [M.action_of(img) for img in phi.inverse_images], label=label, check=False)


def direct_sum(parts: list[Module], algebra: TruncatedAlgebra | None = None) -> Module:
    if not parts:
        if algebra is None:
            raise ModuleError("empty direct sum needs an explicit algebra")
        return Module(algebra, [linalg.zeros(0) for _ in range(algebra.rank)], label="0", check=False)
    A = parts[0].algebra
    if any(m.algebra != A for m in parts):
        raise AlgebraError("summands over different algebras")
    d = sum(m.dim for m in parts)
    acts = []
    for i in range(A.rank):
        X = linalg.zeros(d)
        off = 0
        for m in parts:
            X[off:off + m.dim, off:off + m.dim] = m.actions[i]
            off += m.dim
        acts.append(X)
    label = None
    if all(m.label for m in parts):
        label = " + ".join(m.label for m in parts)
    return Module(A, acts, label=label, check=False)


def dual_module(H, M: Module) -> Module:
    """(a f)(v) = f(S(a) v): x_i acts by the transpose of S(x_i)."""
    from .hopf import apply_antipode

    if M.algebra != H.algebra:
        raise AlgebraError("module and structure over different algebras")
    acts = [M.action_of(apply_antipode(H, g)).T.copy() for g in H.algebra.gens()]
    return Module(M.algebra, acts, label=None if M.label is None else f"({M.label})*", check=False)


# --- the text mini-language ----------------------------------------------------

_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9\-]*|\[[^\]]*\]|[()+,@])")


class _Parser:
    def __init__(self, A: TruncatedAlgebra, text: str, automorphisms: dict[str, AugAutomorphism]):
        self.A = A
        self.auts = automorphisms
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ModuleError(f"cannot parse module name {text!r} at position {pos}")
            self.tokens.append(m.group(1))
            pos = m.end()
            while pos < len(text) and text[pos].isspace():
                pos += 1
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expect: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expect is not None and tok != expect):
            raise ModuleError(f"expected {expect or 'a token'}, found {tok!r}")
        self.i += 1
        return tok

    def parse(self) -> Module:
        out = self.sum()
        if self.peek() is not None:
            raise ModuleError(f"unexpected trailing token {self.peek()!r}")
        return out

    def sum(self) -> Module:
        parts = self.term()
        while self.peek() == "+":
            self.take("+")
            parts += self.term()
        return parts[0] if len(parts) == 1 else direct_sum(parts)

    def term(self) -> list[Module]:
        mult = 1
        if self.peek() and self.peek().isdigit():
            mult = int(self.take())
        atom = self.atom()
        return [atom] * mult

    def atom(self) -> Module:
        A = self.A
        tok = self.take()
        if tok == "(":
            inner = self.sum()
            self.take(")")
            return inner
        if tok == "P":
            return regular_module(A)
        if tok == "ind":
            self.take("(")
            name = self.take()
            self.take(")")
            return induce_trivial(A, A.gen_index(name))
        if tok == "twist":
            self.take("(")
            name = self.take()
            if name not in self.auts:
                raise ModuleError(f"unknown automorphism {name!r}")
            self.take(",")
            inner = self.sum()
            self.take(")")
            return twist_module(self.auts[name], inner)
        m = re.fullmatch(r"J(\d+)", tok)
        if m:
            i = int(m.group(1))
            if i == 1:
                return trivial_module(A)
            return jordan_module(A, i)
        m = re.fullmatch(r"V(\d+)", tok)
        if m:
            d = int(m.group(1))
            if d % 2:
                raise ModuleError(f"V{d}: Kronecker modules have even dimension")
            self.take("@")
            pt = ProjPoint.parse(A.field, self.take())
            return kronecker_module(A, d // 2, pt)
        raise ModuleError(f"unknown module name {tok!r}")


def parse_module(A: TruncatedAlgebra, text: str, automorphisms: dict[str, AugAutomorphism] | None = None) -> Module:
    """Build a module from names like "J3", "2V4@[1:0] + P", "ind(x)", "twist(phi, ind(x))"."""
    return _Parser(A, text, automorphisms or {}).parse()
