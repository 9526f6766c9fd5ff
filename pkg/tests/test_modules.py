import numpy as np
import pytest
from hypothesis import given, strategies as st

from _gen import random_sum
from conftest import algebra
from hopfgreen.automorphism import make_automorphism, random_automorphism
from hopfgreen.decomp import decompose, is_isomorphic
from hopfgreen.hopf import catalog
from hopfgreen.modules import (
    Module, ModuleError, dual_module, induce_trivial, jordan_module, kronecker_module, parse_module,
    regular_module, restrict_module, tensor_module, trivial_module, twist_module, generator_inclusion,
)
from hopfgreen.points import ProjPoint


def test_module_validation(kron):
    J = np.array([[0, 0], [1, 0]])
    Module(kron, [J, np.zeros((2, 2), dtype=np.int64)])
    with pytest.raises(ModuleError):
        Module(kron, [J, J.T])  # x and y must commute


def test_kronecker_module_aux_independent(kron):
    pt = ProjPoint.parse(kron.field, "[1:1]")
    for n in (1, 2, 3):
        a = kronecker_module(kron, n, pt)
        b = kronecker_module(kron, n, pt, aux=ProjPoint.parse(kron.field, "[0:1]"))
        assert is_isomorphic(a, b).verdict is True


def test_parse_module(kron):
    phi = make_automorphism(kron, ["x + y", "y"], name="phi")
    M = parse_module(kron, "2V4@[1:0] + P + J1", {})
    assert M.dim == 13
    assert decompose(M).summands == {"J1": 1, "V4@[1:0]": 2, "P": 1}
    T = parse_module(kron, "twist(phi, V2@[1:0])", {"phi": phi})
    assert T.dim == 2
    with pytest.raises(ModuleError):
        parse_module(kron, "V3@[1:0]", {})


def _same(M, N) -> bool:
    """Krull-Schmidt: certified decompositions with equal multisets."""
    a, b = decompose(M), decompose(N)
    return a.certified and b.certified and a.summands == b.summands


@given(st.integers(0, 2**32 - 1))
def test_tensor_unit_symmetry_associativity(seed):
    A = algebra(2, [1, 1])
    rng = np.random.default_rng(seed)
    M, _ = random_sum(A, rng, max_parts=2, max_dim=4, max_n=2)
    N, _ = random_sum(A, rng, max_parts=2, max_dim=4, max_n=2)
    L, _ = random_sum(A, rng, max_parts=1, max_dim=3, max_n=1)
    k = trivial_module(A)
    for H in catalog(A):
        assert is_isomorphic(tensor_module(H, M, k), M).verdict is True
        assert _same(tensor_module(H, M, N), tensor_module(H, N, M))
        left = tensor_module(H, tensor_module(H, M, N), L)
        right = tensor_module(H, M, tensor_module(H, N, L))
        assert _same(left, right)


def test_projective_times_anything_is_free(kron):
    P = regular_module(kron)
    V = kronecker_module(kron, 2, ProjPoint.parse(kron.field, "[1:1]"))
    for H in catalog(kron):
        assert decompose(tensor_module(H, P, V)).summands == {"P": 4}


def test_cyclic_tensor_and_dual():
    A = algebra(3, [1])
    H = catalog(A)[0]
    J2 = jordan_module(A, 2)
    assert decompose(tensor_module(H, J2, J2)).summands == {"J1": 1, "J3": 1}
    assert is_isomorphic(dual_module(H, J2), J2).verdict is True


def test_induce_and_restrict():
    A = algebra(2, [1, 1, 1])
    V = induce_trivial(A, 0)
    assert V.dim == 4 and V.label == "ind(x)"
    R = restrict_module(generator_inclusion(A, 0), V)
    assert not R.actions[0].any()


@given(st.integers(0, 2**32 - 1))
def test_twist_preserves_dimension_and_decomposes(seed):
    A = algebra(2, [1, 1])
    rng = np.random.default_rng(seed)
    phi = random_automorphism(A, rng)
    M, want = random_sum(A, rng, max_parts=3, max_dim=8, max_n=2)
    T = twist_module(phi, M)
    assert T.dim == M.dim
    assert decompose(T).certified


def test_json_round_trip(kron):
    M = parse_module(kron, "V4@[1:1] + J1", {})
    M2 = Module.from_json(M.to_json())
    assert M2.same_matrices(M)
