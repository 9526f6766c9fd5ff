import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import algebra
from hopfgreen.algebra import TensorSquareElement
from hopfgreen.automorphism import (
    aut_compose, enumerate_automorphisms, identity_automorphism, make_automorphism, random_automorphism,
)
from hopfgreen.hopf import (
    HopfStructure, antipode, apply_antipode, catalog, coproduct, grouplikes, hopf_isomorphic, primitives,
    twist_hopf, verify_bialgebra,
)


def test_kronecker_catalog_coproducts(kron):
    x, y = kron.gens()
    T = TensorSquareElement
    H0, H1, H2, H3 = catalog(kron)
    assert coproduct(H0, x) == T.primitive(x)
    assert coproduct(H1, y) == T.primitive(y) + T.pure(x, x)
    assert coproduct(H2, y) == T.primitive(y) + T.pure(y, y)
    assert coproduct(H3, x) == T.primitive(x) + T.pure(x, x)


def test_primitive_and_grouplike_counts(kron):
    H0, H1, H2, H3 = catalog(kron)
    assert len(primitives(H0)) == 2 and len(primitives(H1)) == 1 and len(primitives(H3)) == 0
    assert len(grouplikes(H0)) == 1 and len(grouplikes(H2)) == 2 and len(grouplikes(H3)) == 4


@pytest.mark.parametrize("p,orders", [(2, [1, 1]), (2, [3]), (3, [1]), (2, [1, 2])])
def test_grouplikes_form_a_group(p, orders):
    A = algebra(p, orders)
    for H in catalog(A):
        G = grouplikes(H)
        keys = {tuple(g.coeffs) for g in G}
        assert tuple(A.one().coeffs) in keys
        for g in G:
            for h in G:
                assert tuple((g * h).coeffs) in keys
            assert tuple(apply_antipode(H, g).coeffs) in keys


def test_antipode_p3():
    A = algebra(3, [1])
    S = antipode(catalog(A)[0])
    assert np.array_equal(S, np.diag([1, 2, 1]))


def test_printed_witt_term_is_not_coassociative(x8):
    x = x8.gen(0)
    from hopfgreen.algebra import omega
    bad = HopfStructure(x8, [TensorSquareElement.primitive(x) + omega(x8, x**2)], label="bad")
    rep = verify_bialgebra(bad)
    assert not rep.coassociative and not rep.ok


def test_relation_violation_detected(kron):
    x, y = kron.gens()
    bad = HopfStructure(kron, [TensorSquareElement.pure(x, kron.one()), TensorSquareElement.primitive(y)], label="bad")
    assert not verify_bialgebra(bad).ok


def test_three_generator_twist_example():
    A = algebra(2, [1, 1, 1])
    phi = make_automorphism(A, ["x + y*z", "y", "z"])
    T = twist_hopf(catalog(A)[0], phi)
    x, y, z = A.gens()
    P = TensorSquareElement
    assert coproduct(T, x) == P.primitive(x) + P.pure(z, y) + P.pure(y, z)
    assert verify_bialgebra(T).ok


def test_automorphisms_form_a_group(kron):
    auts = list(enumerate_automorphisms(kron))
    assert len(auts) == 24
    keys = {a.matrix.tobytes() for a in auts}
    for a in auts[:6]:
        for b in auts:
            assert aut_compose(a, b).matrix.tobytes() in keys
        assert aut_compose(a, a.inverse()).matrix.tobytes() == identity_automorphism(kron).matrix.tobytes()


@given(st.integers(0, 2**32 - 1))
def test_twist_composition(seed):
    A = algebra(2, [1, 1])
    rng = np.random.default_rng(seed)
    f, g = random_automorphism(A, rng), random_automorphism(A, rng)
    for H in catalog(A):
        lhs = twist_hopf(twist_hopf(H, f), g)
        assert lhs.same_images(twist_hopf(H, aut_compose(g, f)))
        assert verify_bialgebra(lhs).ok


@given(st.integers(0, 2**32 - 1))
def test_twist_round_trip_is_iso(seed):
    A = algebra(2, [2])
    rng = np.random.default_rng(seed)
    H = catalog(A)[int(rng.integers(3))]
    v = hopf_isomorphic(H, twist_hopf(H, random_automorphism(A, rng)))
    assert v.kind == "iso"


def test_distinct_structures_not_iso(kron):
    v = hopf_isomorphic(catalog(kron)[1], catalog(kron)[2])
    assert v.kind == "no_iso_over_base_field"
    assert v.to_json()["scope"] == "base field only"


def test_budget():
    A = algebra(2, [1, 1, 1])
    H = catalog(A)[0]
    v = hopf_isomorphic(H, twist_hopf(H, make_automorphism(A, ["x + y*z", "y", "z"])), budget=10)
    assert v.kind == "budget_exceeded"


def test_structure_json_round_trip(x8):
    for H in catalog(x8):
        assert HopfStructure.from_json(x8, H.to_json()).same_images(H)
