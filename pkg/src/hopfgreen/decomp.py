"""Hom spaces, isomorphism tests and Krull-Schmidt decomposition of modules."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .modules import Module, ModuleError, induce_trivial, jordan_module, kronecker_module, regular_module, trivial_module
from .points import ProjPoint, rational_points

EXHAUSTIVE_CAP = 4096
RANDOM_TRIES = 256
RANDOM_ENDOS = 64
IDEMPOTENT_SCAN_CAP = 2**16
POINT_RANK_CAP = 64


class InconclusiveError(RuntimeError):
    pass


# --- Hom spaces ------------------------------------------------------------------

def _generators(M: Module) -> np.ndarray:
    """Standard basis vectors spanning M modulo its radical."""
    F = M.algebra.field
    rad = np.hstack(M.actions) if M.actions else linalg.zeros(M.dim, 0)
    return linalg.complete_basis(F, linalg.column_basis(F, rad), M.dim)


def hom_space(M: Module, N: Module) -> np.ndarray:
    """Basis of Hom_A(M, N) as an array of shape (h, dim N, dim M).

    A map is fixed by the images of generators of M; the unknowns are those
    images, constrained by every relation among the generators.
    """
    if M.algebra != N.algebra:
        raise ModuleError("modules over different algebras")
    A = M.algebra
    F = A.field
    dM, dN, nA = M.dim, N.dim, A.dim
    if dM == 0 or dN == 0:
        return np.zeros((0, dN, dM), dtype=np.int64)
    G = _generators(M)
    s = G.shape[1]
    # pi: A^s -> M, column (k, e) is x^e g_k
    pi = np.stack([F.matmul(M.mono(e), G[:, k]) for k in range(s) for e in range(nA)], axis=1)
    rel = linalg.nullspace(F, pi)  # (s*nA, r)
    r = rel.shape[1]
    monos = np.stack([N.mono(e) for e in range(nA)])  # (nA, dN, dN)
    if r:
        Rt = rel.reshape(s, nA, r).transpose(2, 0, 1).reshape(r * s, nA)
        blocks = F.matmul(Rt, monos.reshape(nA, dN * dN)).reshape(r, s, dN, dN)
        E = blocks.transpose(0, 2, 1, 3).reshape(r * dN, s * dN)
        sol = linalg.nullspace(F, E)
    else:
        sol = linalg.identity(s * dN)
    _, piv = linalg.rref(F, pi)
    pinv = linalg.inverse(F, pi[:, piv])
    out = []
    for c in range(sol.shape[1]):
        images = sol[:, c].reshape(s, dN).T  # column k is the image of g_k
        cols = F.matmul(monos.transpose(1, 0, 2).reshape(dN * nA, dN), images)  # rows (i, e)
        full = cols.reshape(dN, nA, s).transpose(0, 2, 1).reshape(dN, s * nA)
        out.append(F.matmul(full[:, piv], pinv))
    if not out:
        return np.zeros((0, dN, dM), dtype=np.int64)
    return np.stack(out)


def is_intertwiner(M: Module, N: Module, f: np.ndarray) -> bool:
    F = M.algebra.field
    return all(np.array_equal(F.matmul(f, X), F.matmul(Y, f)) for X, Y in zip(M.actions, N.actions))


# --- isomorphism ---------------------------------------------------------------------

def fingerprint(M: Module) -> tuple:
    """Monomial-action ranks plus ranks along rational linear directions."""
    A = M.algebra
    F = A.field
    base = M.fingerprint()
    pts = []
    if A.rank > 1 and (F.q**A.rank - 1) // (F.q - 1) <= POINT_RANK_CAP:
        lin = [M.mono(j) for j in A.null_coordinates()]
        for pt in rational_points(F, A.rank):
            S = linalg.zeros(M.dim)
            for c, X in zip(pt.coords, lin):
                if c:
                    S = F.add(S, F.mul(c, X))
            pts.append(linalg.rank(F, S))
    return base + tuple(pts)


@dataclass
class IsoResult:
    verdict: bool | None  # None means inconclusive
    witness: np.ndarray | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.verdict is True

    @property
    def inconclusive(self) -> bool:
        return self.verdict is None


def _first_invertible(F, cands: np.ndarray):
    for f in cands:
        if linalg.is_invertible(F, f):
            return f
    return None


def is_isomorphic(M: Module, N: Module, seed: int = 0, exhaustive_cap: int = EXHAUSTIVE_CAP,
                  tries: int = RANDOM_TRIES) -> IsoResult:
    """Search Hom(M, N) for an invertible map; negatives are certified or flagged inconclusive."""
    if M.algebra != N.algebra:
        raise ModuleError("modules over different algebras")
    F = M.algebra.field
    if M.dim != N.dim:
        return IsoResult(False, reason="dimensions differ")
    if M.dim == 0:
        return IsoResult(True, linalg.zeros(0), "zero modules")
    if fingerprint(M) != fingerprint(N):
        return IsoResult(False, reason="rank fingerprints differ")
    H = hom_space(M, N)
    h = H.shape[0]
    if h == 0:
        return IsoResult(False, reason="Hom space is zero")
    flat = H.reshape(h, -1)
    rng = np.random.default_rng(seed)
    # cheap deterministic and random attempts first
    cands = [H[i] for i in range(h)]
    cands.append((F.sum(H, axis=0)).reshape(N.dim, M.dim))
    for _ in range(tries):
        c = F.random(rng, h)
        cands.append(F.matmul(c, flat).reshape(N.dim, M.dim))
    f = _first_invertible(F, cands)
    if f is not None:
        return IsoResult(True, f, "invertible intertwiner found")
    if F.q**h <= exhaustive_cap:
        digits = F.q ** np.arange(h - 1, -1, -1)
        for start in range(1, F.q**h, 512):
            idx = np.arange(start, min(F.q**h, start + 512))
            C = (idx[:, None] // digits[None, :]) % F.q
            f = _first_invertible(F, F.matmul(C, flat).reshape(-1, N.dim, M.dim))
            if f is not None:
                return IsoResult(True, f, "invertible intertwiner found")
        return IsoResult(False, reason=f"exhaustive search of {F.q**h} intertwiners found none invertible")
    return IsoResult(None, reason=f"no invertible intertwiner among {len(cands)} samples; Hom dim {h}")


# --- Fitting splitting ------------------------------------------------------------------

def _fitting_bases(M: Module, f: np.ndarray) -> list[np.ndarray]:
    F = M.algebra.field
    factors = linalg.coprime_factorisation(F, linalg.char_poly(F, f))
    if len(factors) <= 1:
        return [linalg.identity(M.dim)]
    return [linalg.nullspace(F, linalg.poly_eval_matrix(F, g, f)) for g in factors]


def fitting_split(M: Module, f: np.ndarray) -> list[Module]:
    """Parts of M along the primary decomposition of an endomorphism f."""
    if not is_intertwiner(M, M, f):
        raise ModuleError("f is not an endomorphism of M")
    bases = _fitting_bases(M, f)
    if len(bases) == 1:
        return [M]
    return [M.submodule_on(B) for B in bases]


def _idempotent_split(M: Module, E: np.ndarray) -> tuple[list[np.ndarray] | None, bool]:
    """Scan all of End(M) for a nontrivial idempotent; returns (bases, conclusive)."""
    F = M.algebra.field
    h = E.shape[0]
    if F.q**h > IDEMPOTENT_SCAN_CAP:
        return None, False
    d = M.dim
    flat = E.reshape(h, -1)
    I = linalg.identity(d)
    digits = F.q ** np.arange(h - 1, -1, -1)
    for start in range(0, F.q**h, 1024):
        idx = np.arange(start, min(F.q**h, start + 1024))
        C = (idx[:, None] // digits[None, :]) % F.q
        cand = F.matmul(C, flat).reshape(-1, d, d)
        if F.is_prime:
            sq = np.rint(np.fmod(np.matmul(cand.astype(float), cand.astype(float)), F.p)).astype(np.int64)
        else:
            sq = np.stack([F.matmul(c, c) for c in cand])
        hit = np.all((sq == cand).reshape(len(cand), -1), axis=1)
        for k in np.flatnonzero(hit):
            e = cand[k]
            if e.any() and not np.array_equal(e, I):
                return [linalg.column_basis(F, e), linalg.nullspace(F, e)], True
    return None, True


# --- decomposition ---------------------------------------------------------------------

_LABEL_RE = re.compile(r"(J)(\d+)$|(V)(\d+)@(.*)$|(P)$|(ind)\((.*)\)$")


def label_key(label: str) -> tuple:
    m = _LABEL_RE.match(label)
    if not m:
        return (9, label)
    if m.group(1):
        return (0, int(m.group(2)))
    if m.group(3):
        return (1, int(m.group(4)), m.group(5))
    if m.group(6):
        return (3,)
    return (2, m.group(8))


def label_dim(A, label: str) -> int:
    if label.startswith("UNRECOGNIZED("):
        return int(label[len("UNRECOGNIZED("):].split(",")[0])
    m = _LABEL_RE.match(label)
    if m is None:
        raise ValueError(f"unknown label {label!r}")
    if m.group(1):
        return int(m.group(2))
    if m.group(3):
        return int(m.group(4))
    if m.group(6):
        return A.dim
    return induce_trivial(A, A.gen_index(m.group(8))).dim


def sorted_counts(counts) -> dict[str, int]:
    return {k: int(counts[k]) for k in sorted(counts, key=label_key) if counts[k]}


@dataclass
class Block:
    label: str
    basis: np.ndarray  # columns in the coordinates of the input module
    target: Module | None  # constructor module the block must equal exactly
    indecomposable: bool


@dataclass
class Decomposition:
    summands: dict[str, int]
    certified: bool
    blocks: list[Block] = field(default_factory=list, repr=False)
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"summands": dict(self.summands), "certified": self.certified}
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    @property
    def dim(self) -> int:
        return sum(b.basis.shape[1] for b in self.blocks)

    def has_unrecognized(self) -> bool:
        return any(k.startswith("UNRECOGNIZED") for k in self.summands)


class _Decomposer:
    def __init__(self, M: Module, seed: int):
        self.M = M
        self.A = M.algebra
        self.F = M.algebra.field
        self.rng = np.random.default_rng(seed)
        self.seed = seed
        self.blocks: list[Block] = []
        self.notes: list[str] = []
        self._cands: dict[int, list[tuple[str, Module]]] = {}

    # candidates of a given dimension
    def candidates(self, d: int) -> list[tuple[str, Module]]:
        if d in self._cands:
            return self._cands[d]
        A = self.A
        out: list[tuple[str, Module]] = []
        if d == 1:
            out.append(("J1", trivial_module(A)))
        if A.is_cyclic and 1 < d <= A.dim:
            out.append((f"J{d}", jordan_module(A, d)))
        elif d == A.dim:
            out.append(("P", regular_module(A)))
        if A.orders == (1, 1) and d % 2 == 0:
            for pt in rational_points(self.F, 2):
                mod = kronecker_module(A, d // 2, pt)
                out.append((mod.label, mod))
        if not A.is_cyclic:
            for i in range(A.rank):
                mod = induce_trivial(A, i)
                if mod.dim == d and d != 1:
                    out.append((mod.label, mod))
        self._cands[d] = out
        return out

    def free_label(self) -> str:
        return f"J{self.A.dim}" if self.A.is_cyclic else "P"

    def sub(self, B: np.ndarray) -> Module:
        return self.M.submodule_on(B)

    def run(self) -> None:
        if self.M.dim:
            self.dispatch(linalg.identity(self.M.dim))

    def dispatch(self, B: np.ndarray) -> None:
        if B.shape[1] == 0:
            return
        N = self.sub(B)
        rest = self.split_free(B, N)
        if rest.shape[1] == 0:
            return
        if self.A.is_cyclic:
            self.split_chains(rest)
            return
        rest = self.split_trivial(rest)
        if rest.shape[1] == 0:
            return
        if self.A.is_kronecker:
            rest = self.split_pencil(rest)
            if rest.shape[1] == 0:
                return
        self.generic(rest)

    def split_free(self, B: np.ndarray, N: Module) -> np.ndarray:
        """Peel off free summands via the Frobenius retraction; returns the complement basis."""
        A, F = self.A, self.F
        T = N.mono(A.top_index)
        _, piv = linalg.rref(F, T)
        if not piv:
            return B
        r = len(piv)
        Bf = np.hstack([np.stack([N.mono(e)[:, c] for e in range(A.dim)], axis=1) for c in piv])
        L = linalg.left_inverse(F, Bf)
        lam = L[[k * A.dim + A.top_index for k in range(r)]]
        top = np.array(A.exponents[A.top_index])
        rows = []
        for k in range(r):
            for e in A.exponents:
                rows.append(F.matmul(lam[k], N.mono(A.index(top - np.array(e)))))
        K = linalg.nullspace(F, np.stack(rows))
        target = regular_module(A)
        for k in range(r):
            self.blocks.append(Block(self.free_label(), F.matmul(B, Bf[:, k * A.dim:(k + 1) * A.dim]), target, True))
        return F.matmul(B, K)

    def split_chains(self, B: np.ndarray) -> None:
        F = self.F
        N = self.sub(B)
        T = N.actions[0]
        for head, length in linalg.nilpotent_chains(F, T):
            cols = [head]
            for _ in range(length - 1):
                cols.append(F.matmul(T, cols[-1]))
            basis = F.matmul(B, np.stack(cols, axis=1))
            target = trivial_module(self.A) if length == 1 else jordan_module(self.A, length)
            self.blocks.append(Block(f"J{length}", basis, target, True))

    def split_trivial(self, B: np.ndarray) -> np.ndarray:
        """Trivial summands are socle vectors outside the radical."""
        F = self.F
        N = self.sub(B)
        soc = linalg.nullspace(F, np.vstack(N.actions))
        rad = linalg.column_basis(F, np.hstack(N.actions))
        _, piv = linalg.rref(F, np.hstack([rad, soc]))
        w = [p - rad.shape[1] for p in piv if p >= rad.shape[1]]
        if not w:
            return B
        W = soc[:, w]
        rest = linalg.complete_basis(F, np.hstack([rad, W]), N.dim)
        comp = np.hstack([rad, rest])
        triv = trivial_module(self.A)
        for k in range(W.shape[1]):
            self.blocks.append(Block("J1", F.matmul(B, W[:, [k]]), triv, True))
        return F.matmul(B, comp)

    def split_pencil(self, B: np.ndarray) -> np.ndarray:
        """Kronecker pairs: normal form along a direction outside the support."""
        A, F = self.A, self.F
        N = self.sub(B)
        d = N.dim
        if d % 2:
            return B
        X, Y = N.actions
        pts = rational_points(F, 2)

        def S(pt):
            a, b = pt.coords
            return F.add(F.mul(a, X), F.mul(b, Y))

        both = linalg.rank(F, np.hstack([X, Y]))
        q = next((pt for pt in pts if both == d // 2 and linalg.rank(F, S(pt)) == d // 2), None)
        if q is None:
            return B
        Sq = S(q)
        Lb = linalg.column_basis(F, Sq)
        U = linalg.complete_basis(F, Lb, d)
        Linv = linalg.left_inverse(F, Lb)
        Lq_inv = linalg.inverse(F, F.matmul(Linv, F.matmul(Sq, U)))

        def Tof(pt):
            return F.matmul(Lq_inv, F.matmul(Linv, F.matmul(S(pt), U)))

        r = next(pt for pt in pts if pt != q)
        T = Tof(r)
        rest_cols = []
        for g in linalg.coprime_factorisation(F, linalg.char_poly(F, T)):
            E = linalg.nullspace(F, linalg.poly_eval_matrix(F, g, T))
            root = _single_root(F, g)
            if root is None:
                rest_cols.append(E)
                continue
            # (S_r - root S_q) is singular exactly on E
            coords = [int(F.sub(cr, F.mul(root, cq))) for cr, cq in zip(r.coords, q.coords)]
            pt = ProjPoint(F, coords)
            Tp = Tof(pt)
            TE = F.matmul(linalg.left_inverse(F, E), F.matmul(Tp, E))
            for head, length in linalg.nilpotent_chains(F, TE):
                us = [F.matmul(E, head)]
                for _ in range(length - 1):
                    us.append(F.matmul(Tp, us[-1]))
                us = us[::-1]  # u_0 = T^(n-1) v, ..., u_(n-1) = v
                uN = [F.matmul(U, u) for u in us]
                lN = [F.matmul(Sq, u) for u in uN]
                basis = F.matmul(B, np.stack(lN + uN, axis=1))
                target = kronecker_module(A, length, pt, aux=q)
                self.blocks.append(Block(target.label, basis, target, True))
        if not rest_cols:
            return linalg.zeros(B.shape[0], 0)
        Erest = F.matmul(U, np.hstack(rest_cols))
        return F.matmul(B, np.hstack([F.matmul(Sq, Erest), Erest]))

    def recognize(self, N: Module):
        fp = None
        for label, cand in self.candidates(N.dim):
            if fp is None:
                fp = fingerprint(N)
            if fingerprint(cand) != fp:
                continue
            res = is_isomorphic(N, cand, seed=self.seed)
            if res.verdict:
                return label, cand, res.witness
            if res.inconclusive:
                self.notes.append(f"inconclusive isomorphism test against {label}")
        return None

    def try_split(self, N: Module) -> tuple[list[np.ndarray] | None, bool]:
        F = self.F
        E = hom_space(N, N)
        h = E.shape[0]
        flat = E.reshape(h, -1)
        cands = [E[i] for i in range(h)]
        for _ in range(RANDOM_ENDOS):
            cands.append(F.matmul(F.random(self.rng, h), flat).reshape(N.dim, N.dim))
        for f in cands:
            bases = _fitting_bases(N, f)
            if len(bases) > 1:
                return bases, True
        return _idempotent_split(N, E)

    def generic(self, B: np.ndarray) -> None:
        F = self.F
        N = self.sub(B)
        hit = self.recognize(N)
        if hit is not None:
            label, cand, W = hit
            basis = F.matmul(B, linalg.inverse(F, W))
            self.blocks.append(Block(label, basis, cand, True))
            return
        bases, conclusive = self.try_split(N)
        if bases is not None:
            for Bp in bases:
                self.dispatch(F.matmul(B, Bp))
            return
        fp = N.fingerprint()
        label = f"UNRECOGNIZED({N.dim},{'.'.join(str(v) for v in fp)})"
        if not conclusive:
            self.notes.append(f"{label}: indecomposability not certified (End too large to scan)")
        self.blocks.append(Block(label, B, None, conclusive))

    def verify(self) -> bool:
        F = self.F
        if not self.blocks:
            return self.M.dim == 0
        Q = np.hstack([b.basis for b in self.blocks])
        if Q.shape != (self.M.dim, self.M.dim) or not linalg.is_invertible(F, Q):
            return False
        conj = self.M.conjugate(Q)
        off = 0
        mask = np.zeros((self.M.dim, self.M.dim), dtype=bool)
        for b in self.blocks:
            k = b.basis.shape[1]
            sl = slice(off, off + k)
            mask[sl, sl] = True
            if b.target is not None:
                if any(not np.array_equal(C[sl, sl], T) for C, T in zip(conj, b.target.actions)):
                    return False
            off += k
        return all(not C[~mask].any() for C in conj)


def decompose(M: Module, seed: int = 0) -> Decomposition:
    """Krull-Schmidt decomposition with an explicit block-diagonalizing basis."""
    dec = _Decomposer(M, seed)
    dec.run()
    counts = Counter(b.label for b in dec.blocks)
    if sum(b.basis.shape[1] for b in dec.blocks) != M.dim:
        raise AssertionError("decomposition lost dimensions")
    ok = dec.verify() and all(b.indecomposable for b in dec.blocks)
    return Decomposition(sorted_counts(counts), ok, dec.blocks, dec.notes)


def _single_root(F, g: list[int]) -> int | None:
    """The root of g when g = (t - a)^m, else None."""
    deg = len(g) - 1
    if deg < 1:
        return None
    # coefficient of t^(m-1) in (t - a)^m is -m a
    if deg % F.p == 0:
        for a in F.elements():
            lin = [int(F.neg(a)), 1]
            power = [1]
            for _ in range(deg):
                power = linalg.poly_mul(F, power, lin)
            if power == list(g):
                return a
        return None
    a = int(F.mul(F.neg(g[deg - 1]), F.inv(F.from_int(deg))))
    lin = [int(F.neg(a)), 1]
    power = [1]
    for _ in range(deg):
        power = linalg.poly_mul(F, power, lin)
    return a if power == list(g) else None


def jordan_type(M: Module) -> dict[int, int]:
    """Block sizes of the generator action of a module over k[t]/t^(p^s)."""
    if not M.algebra.is_cyclic:
        raise ModuleError("Jordan type needs a single-generator algebra")
    if M.dim == 0:
        return {}
    return dict(sorted(linalg.jordan_block_lengths(M.algebra.field, M.actions[0]).items()))


def format_jordan_type(jt: dict[int, int]) -> str:
    return " + ".join(f"{c}J{i}" if c > 1 else f"J{i}" for i, c in sorted(jt.items())) or "0"
