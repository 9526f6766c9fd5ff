import numpy as np
import pytest
from hypothesis import given, strategies as st

from _gen import random_sum, support_set
from conftest import algebra
from hopfgreen.automorphism import make_automorphism, random_automorphism
from hopfgreen.geometry import (
    PiPointError, aut_on_point, isotropy_in, noble_points, pi_point_from_element, point_of, support,
    support_is_partial,
)
from hopfgreen.hopf import catalog
from hopfgreen.modules import induce_trivial, kronecker_module, regular_module, trivial_module, twist_module
from hopfgreen.points import ProjPoint, rational_points


def test_points_over_f2(kron):
    pts = rational_points(kron.field, 2)
    assert [str(p) for p in pts] == ["[1:0]", "[1:1]", "[0:1]"]
    assert len(rational_points(algebra(3, [1, 1]).field, 2)) == 4


def test_supports_of_indecomposables(kron):
    for pt in rational_points(kron.field, 2):
        for n in (1, 2, 3):
            assert support(kron, kronecker_module(kron, n, pt)) == [pt]
    assert support(kron, regular_module(kron)) == []
    assert len(support(kron, trivial_module(kron))) == 3


def test_pi_point_validation(kron):
    x, y = kron.gens()
    assert str(point_of(kron, pi_point_from_element(kron, x + y + x * y))) == "[1:1]"
    for bad in (x * y, kron.one() + x, kron.zero()):
        with pytest.raises(PiPointError):
            pi_point_from_element(kron, bad)


def test_cyclic_nobles_and_partial_flag():
    for orders in ([1], [2], [3]):
        A = algebra(2, orders)
        assert not support_is_partial(A)
        for H in catalog(A):
            assert [str(p) for p in noble_points(H)] == ["[1]"]
    assert support_is_partial(algebra(2, [1, 2]))


@given(st.integers(0, 2**32 - 1))
def test_support_moves_with_twist(seed):
    A = algebra(2, [1, 1])
    rng = np.random.default_rng(seed)
    phi = random_automorphism(A, rng)
    M, _ = random_sum(A, rng, max_parts=3, max_dim=10, max_n=2)
    moved = {aut_on_point(phi, p) for p in support(A, M)}
    assert support_set(A, twist_module(phi, M)) == moved


@given(st.integers(0, 2**32 - 1))
def test_support_of_sum_is_union(seed):
    A = algebra(3, [1, 1])
    rng = np.random.default_rng(seed)
    M, _ = random_sum(A, rng, max_parts=2, max_dim=12)
    N, _ = random_sum(A, rng, max_parts=2, max_dim=12)
    from hopfgreen.modules import direct_sum
    assert support_set(A, direct_sum([M, N])) == support_set(A, M) | support_set(A, N)


def test_isotropy_examples():
    A = algebra(2, [1, 1, 1])
    phi = make_automorphism(A, ["x + y*z", "y", "z"])
    assert isotropy_in(phi, ProjPoint.parse(A.field, "[1:0:0]"))
    B = algebra(2, [1, 2])
    assert not isotropy_in(make_automorphism(B, ["x + y^2", "y"]), ProjPoint.parse(B.field, "[1:0]"))
    assert isotropy_in(make_automorphism(B, ["x + y^3", "y"]), ProjPoint.parse(B.field, "[1:0]"))


def test_induced_support():
    A = algebra(2, [1, 1, 1])
    assert [str(p) for p in support(A, induce_trivial(A, 0))] == ["[1:0:0]"]
