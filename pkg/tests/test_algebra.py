import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import algebra
from hopfgreen.algebra import AlgebraError, AlgElement, TensorSquareElement, omega

SHAPES = [(2, [1, 1]), (2, [3]), (3, [1, 1]), (2, [1, 2]), (5, [1])]


def elements(A):
    return st.lists(st.integers(0, A.field.q - 1), min_size=A.dim, max_size=A.dim).map(
        lambda c: AlgElement(A, np.array(c))
    )


@pytest.mark.parametrize("p,orders", SHAPES)
def test_dims_and_truncation(p, orders):
    A = algebra(p, orders)
    assert A.dim == p ** sum(orders)
    for i, n in enumerate(orders):
        assert (A.gen(i) ** (p**n)).is_zero()
        assert not (A.gen(i) ** (p**n - 1)).is_zero()


@pytest.mark.parametrize("p,orders", SHAPES)
@given(data=st.data())
def test_ring_laws(p, orders, data):
    A = algebra(p, orders)
    a, b, c = (data.draw(elements(A)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a * A.one() == a


def test_parse_round_trip():
    A = algebra(2, [1, 1])
    u = A.parse("x + y + x*y")
    assert u == A.gen(0) + A.gen(1) + A.gen(0) * A.gen(1)
    assert u.in_radical()
    assert not A.parse("1 + x").in_radical()
    with pytest.raises(AlgebraError):
        A.parse("z")


@pytest.mark.parametrize("p", [2, 3, 5])
def test_omega_coefficients(p):
    A = algebra(p, [2])
    t = A.gen(0)
    w = omega(A, t)
    assert w.swap() == w
    if p == 2:
        assert w == TensorSquareElement.pure(t, t)
    # (t(x)1 + 1(x)t)^p = t^p(x)1 + 1(x)t^p in characteristic p
    prim = TensorSquareElement.primitive(t)
    assert prim**p == TensorSquareElement.primitive(t**p)


@given(st.integers(0, 3), st.integers(0, 3))
def test_tensor_json_round_trip(i, j):
    A = algebra(2, [1, 1])
    e = TensorSquareElement.pure(A.monomial((i % 2, i // 2)), A.monomial((j % 2, j // 2)))
    assert TensorSquareElement.from_json(A, e.to_json()) == e
