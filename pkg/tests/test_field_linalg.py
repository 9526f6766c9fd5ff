import numpy as np
import pytest
from hypothesis import given, strategies as st

from hopfgreen import linalg
from hopfgreen.field import FieldError, make_field

FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)]


@pytest.mark.parametrize("p,k", FIELDS)
def test_field_axioms(p, k):
    F = make_field(p, k)
    els = np.array(list(F.elements()))
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
    A, B = np.meshgrid(els, els)
    assert np.array_equal(F.mul(A, B), F.mul(B, A))
    assert np.array_equal(F.add(A, B), F.add(B, A))


def test_bad_fields():
    with pytest.raises(FieldError):
        make_field(4)
    with pytest.raises(FieldError):
        make_field(2, 0)


@given(st.sampled_from(FIELDS), st.integers(1, 7), st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_rank_nullity(fk, n, m, seed):
    F = make_field(*fk)
    M = F.random(np.random.default_rng(seed), (n, m))
    N = linalg.nullspace(F, M)
    assert linalg.rank(F, M) + N.shape[1] == m
    assert not F.matmul(M, N).any()


@given(st.sampled_from(FIELDS), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_inverse(fk, n, seed):
    F = make_field(*fk)
    M = F.random(np.random.default_rng(seed), (n, n))
    if linalg.is_invertible(F, M):
        assert np.array_equal(F.matmul(M, linalg.inverse(F, M)), linalg.identity(n))
    else:
        with pytest.raises(np.linalg.LinAlgError):
            linalg.inverse(F, M)


@given(st.integers(1, 80), st.integers(1, 80), st.integers(0, 2**32 - 1))
def test_gf2_packed_rank_matches_generic(n, m, seed):
    F2 = make_field(2)
    M = F2.random(np.random.default_rng(seed), (n, m))
    # the generic path via an explicit Gaussian elimination over the integers mod 2
    R = M.copy() % 2
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if R[i, c]), None)
        if piv is None:
            continue
        R[[r, piv]] = R[[piv, r]]
        for i in range(n):
            if i != r and R[i, c]:
                R[i] ^= R[r]
        r += 1
    assert linalg.rank(F2, M) == r


@given(st.lists(st.integers(1, 5), min_size=1, max_size=4), st.integers(0, 2**32 - 1))
def test_jordan_lengths_of_conjugated_blocks(sizes, seed):
    F = make_field(3)
    n = sum(sizes)
    T = np.zeros((n, n), dtype=np.int64)
    o = 0
    for s in sizes:
        for j in range(s - 1):
            T[o + j + 1, o + j] = 1
        o += s
    rng = np.random.default_rng(seed)
    while True:
        Q = F.random(rng, (n, n))
        if linalg.is_invertible(F, Q):
            break
    T2 = F.matmul(linalg.inverse(F, Q), F.matmul(T, Q))
    want = {}
    for s in sizes:
        want[s] = want.get(s, 0) + 1
    assert linalg.jordan_block_lengths(F, T2) == want
