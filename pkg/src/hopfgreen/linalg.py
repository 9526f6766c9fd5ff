"""Exact dense linear algebra over a :class:`FiniteField`.

Matrices are ``int64`` numpy arrays holding field elements.  Over GF(2) the
elimination kernel packs rows into bytes and eliminates with XOR, which keeps
the large commutant systems of the decomposer cheap.
"""

from __future__ import annotations

import numpy as np
from sympy import ZZ
from sympy.polys.galoistools import gf_factor

from .field import FiniteField


def zeros(n: int, m: int | None = None) -> np.ndarray:
    return np.zeros((n, n if m is None else m), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def _rref_gf2(M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    m, n = M.shape
    P = np.packbits(M.astype(np.uint8), axis=1, bitorder="little")
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        byte, bit = c >> 3, c & 7
        col = (P[r:, byte] >> bit) & 1
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            P[[r, piv]] = P[[piv, r]]
        hit = (P[:, byte] >> bit) & 1
        hit[r] = 0
        rows = np.flatnonzero(hit)
        if rows.size:
            P[rows, byte:] ^= P[r, byte:]
        pivots.append(c)
        r += 1
    R = np.unpackbits(P, axis=1, count=n, bitorder="little").astype(np.int64)
    return R, pivots


def rref(F: FiniteField, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    M = np.array(M, dtype=np.int64, copy=True)
    if M.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    m, n = M.shape
    if m == 0 or n == 0:
        return M, []
    if F.q == 2:
        return _rref_gf2(M & 1)
    R = F.array(M)
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r, c:] = F.mul(F.inv(R[r, c]), R[r, c:])
        hit = R[:, c].copy()
        hit[r] = 0
        rows = np.flatnonzero(hit)
        if rows.size:
            scale = F.neg(R[rows, c])[:, None]
            R[np.ix_(rows, range(c, n))] = F.add(R[np.ix_(rows, range(c, n))], F.mul(scale, R[r, c:][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(F: FiniteField, M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


def nullspace(F: FiniteField, M) -> np.ndarray:
    """Basis of {v : M v = 0} as the columns of an (n x k) matrix."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1]
    if M.shape[0] == 0:
        return identity(n)
    R, pivots = rref(F, M)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = zeros(n, len(free))
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            if R[i, f]:
                basis[pc, j] = F.neg(R[i, f])
    return basis


def column_basis(F: FiniteField, M) -> np.ndarray:
    """Independent columns of M (greedy left to right) spanning its image."""
    M = np.asarray(M, dtype=np.int64)
    if M.shape[1] == 0:
        return M
    _, pivots = rref(F, M)
    return M[:, pivots]


def inverse(F: FiniteField, M) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, pivots = rref(F, np.hstack([M, identity(n)]))
    if pivots[:n] != list(range(n)):
        raise np.linalg.LinAlgError("singular matrix over the finite field")
    return R[:, n:]


def is_invertible(F: FiniteField, M) -> bool:
    M = np.asarray(M)
    return M.shape[0] == M.shape[1] and rank(F, M) == M.shape[0]


def left_inverse(F: FiniteField, B) -> np.ndarray:
    """A (k x n) matrix L with L @ B = I for a full-column-rank (n x k) B."""
    B = np.asarray(B, dtype=np.int64)
    n, k = B.shape
    if k == 0:
        return zeros(0, n)
    _, rows = rref(F, B.T)
    if len(rows) != k:
        raise np.linalg.LinAlgError("columns are not independent")
    L = zeros(k, n)
    L[:, rows] = inverse(F, B[rows, :])
    return L


def solve(F: FiniteField, A, b) -> np.ndarray | None:
    """One solution x of A x = b, or None when inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(A.shape[0], -1)
    n = A.shape[1]
    R, pivots = rref(F, np.hstack([A, b]))
    if any(p >= n for p in pivots):
        return None
    x = zeros(n, b.shape[1])
    for i, pc in enumerate(pivots):
        x[pc] = R[i, n:]
    return x


def complete_basis(F: FiniteField, B, n: int) -> np.ndarray:
    """Extra standard basis columns completing the columns of B to a basis of F^n."""
    B = np.asarray(B, dtype=np.int64).reshape(n, -1)
    full = np.hstack([B, identity(n)])
    _, pivots = rref(F, full)
    extra = [p - B.shape[1] for p in pivots if p >= B.shape[1]]
    return identity(n)[:, extra]


def matrix_power(F: FiniteField, M, e: int) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    result = identity(M.shape[0])
    base = M
    while e:
        if e & 1:
            result = F.matmul(result, base)
        e >>= 1
        if e:
            base = F.matmul(base, base)
    return result


def is_zero(M) -> bool:
    return not np.any(M)


# --- polynomials (coefficient lists, constant term first) ----------------

def char_poly(F: FiniteField, M) -> list[int]:
    """Characteristic polynomial via Hessenberg reduction (monic, low degree first)."""
    H = F.array(np.array(M, dtype=np.int64, copy=True))
    n = H.shape[0]
    for m in range(1, n - 1):
        nz = np.flatnonzero(H[m:, m - 1])
        if nz.size == 0:
            continue
        i = m + int(nz[0])
        if i != m:
            H[[i, m]] = H[[m, i]]
            H[:, [i, m]] = H[:, [m, i]]
        t_inv = F.inv(H[m, m - 1])
        for i in range(m + 1, n):
            u = int(F.mul(H[i, m - 1], t_inv))
            if u:
                H[i] = F.sub(H[i], F.mul(u, H[m]))
                H[:, m] = F.add(H[:, m], F.mul(u, H[:, i]))
    polys: list[list[int]] = [[1]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        # (x - h_mm) * p_{m-1}
        cur = [0] + list(prev)
        h = int(H[m - 1, m - 1])
        for d, c in enumerate(prev):
            cur[d] = int(F.sub(cur[d], F.mul(h, c)))
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = int(F.mul(prod, H[i, i - 1]))
            coef = int(F.mul(H[i - 1, m - 1], prod))
            if coef:
                for d, c in enumerate(polys[i - 1]):
                    cur[d] = int(F.sub(cur[d], F.mul(coef, c)))
        polys.append(cur)
    return polys[n]


def poly_mul(F: FiniteField, a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = int(F.add(out[i + j], F.mul(x, y)))
    return out


def poly_eval_matrix(F: FiniteField, coeffs: list[int], M) -> np.ndarray:
    """Horner evaluation of a polynomial at a square matrix."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    acc = zeros(n)
    for c in reversed(coeffs):
        acc = F.matmul(acc, M)
        if c:
            acc[np.diag_indices(n)] = F.add(acc[np.diag_indices(n)], c)
    return acc


def coprime_factorisation(F: FiniteField, poly: list[int]) -> list[list[int]]:
    """Split a monic polynomial into pairwise coprime prime-power factors.

    Prime fields use a full factorisation.  Extension fields separate the
    rational roots and keep the remaining cofactor as one block.
    """
    if len(poly) <= 1:
        return []
    if F.is_prime:
        _, factors = gf_factor([int(c) for c in reversed(poly)], F.p, ZZ)
        out = []
        for f, e in factors:
            low = [int(c) for c in reversed(f)]
            power = [1]
            for _ in range(e):
                power = poly_mul(F, power, low)
            out.append(power)
        return out
    rest = list(poly)
    out = []
    for root in F.elements():
        lin = [int(F.neg(root)), 1]
        mult = 0
        while len(rest) > 1:
            q, r = _poly_divmod_field(F, rest, lin)
            if any(r):
                break
            rest = q
            mult += 1
        if mult:
            power = [1]
            for _ in range(mult):
                power = poly_mul(F, power, lin)
            out.append(power)
    if len(rest) > 1:
        out.append(rest)
    return out


def _poly_divmod_field(F: FiniteField, num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    num = list(num)
    inv_lead = int(F.inv(den[-1]))
    quot = [0] * max(len(num) - len(den) + 1, 1)
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        c = int(F.mul(num[-1], inv_lead))
        quot[shift] = c
        for i, d in enumerate(den):
            num[shift + i] = int(F.sub(num[shift + i], F.mul(c, d)))
        while num and num[-1] == 0:
            num.pop()
    return quot, num


def nilpotent_chains(F: FiniteField, T) -> list[tuple[np.ndarray, int]]:
    """Jordan chains of a nilpotent operator as (head vector, length), longest first.

    The chain of a head ``v`` of length ``s`` is ``v, Tv, ..., T^(s-1) v``;
    the union of all chains is a basis of the space.
    """
    T = np.asarray(T, dtype=np.int64)
    d = T.shape[0]
    if d == 0:
        return []
    kernels = [zeros(d, 0)]
    power = identity(d)
    while kernels[-1].shape[1] < d:
        power = F.matmul(power, T)
        if len(kernels) > d:
            raise ValueError("operator is not nilpotent")
        kernels.append(nullspace(F, power))
    top = len(kernels) - 1
    chains: list[tuple[np.ndarray, int]] = []
    for s in range(top, 0, -1):
        pieces = [kernels[s - 1]]
        for head, length in chains:
            pieces.append(F.matmul(matrix_power(F, T, length - s), head)[:, None])
        base = np.hstack(pieces)
        cand = kernels[s]
        _, pivots = rref(F, np.hstack([base, cand]))
        for pc in pivots:
            if pc >= base.shape[1]:
                chains.append((cand[:, pc - base.shape[1]].copy(), s))
    return chains


def jordan_block_lengths(F: FiniteField, T) -> dict[int, int]:
    """Jordan type of a nilpotent matrix from the rank sequence of its powers."""
    T = np.asarray(T, dtype=np.int64)
    d = T.shape[0]
    ranks = [d]
    power = identity(d)
    while ranks[-1] > 0:
        power = F.matmul(power, T)
        r = rank(F, power)
        if r == ranks[-1]:
            raise ValueError("operator is not nilpotent")
        ranks.append(r)
    ranks += [0, 0]
    out = {}
    for i in range(1, len(ranks) - 1):
        c = ranks[i - 1] - 2 * ranks[i] + ranks[i + 1]
        if c:
            out[i] = c
    return out
