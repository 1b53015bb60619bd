import random

import pytest
from hypothesis import given, settings, strategies as st

from hyperrel.grouprep import FiniteGroup, GroupError, TrivialAction, group_matrices
from hyperrel.linalg import Mat, Subspace, intersect, permutation_matrix
from hyperrel.randgen import MODELS, make_model, random_space, random_invariant_subspace
from hyperrel.symplectic import (
    SympGSpace,
    SymplecticError,
    classify,
    dual,
    is_lagrangian,
    product,
    standard_omega,
    standard_space,
    symp_orthogonal,
    unit_space,
)

OMEGA0 = Mat([[0, 1], [-1, 0]])


def test_standard_space_examples():
    X = standard_space(1)
    assert X.omega == OMEGA0 and X.dim == 2
    one = standard_space(0)
    assert one.dim == 0 and one.omega.shape == (0, 0)
    # -I is symplectic: (-I)^T Omega0 (-I) = Omega0
    minus = FiniteGroup([Mat([[-1, 0], [0, -1]])])
    assert (Mat.scalar(2, -1).T @ OMEGA0 @ Mat.scalar(2, -1)) == OMEGA0
    assert standard_space(1, minus.defining_action()).group.order == 2


def test_standard_space_rejects_bad_actions():
    shear = FiniteGroup([Mat([[0, 1], [1, 0]])])  # swap, det -1, not symplectic
    with pytest.raises(SymplecticError):
        standard_space(1, shear.defining_action())
    with pytest.raises(SymplecticError):
        standard_space(2, TrivialAction(2))


def test_space_validation():
    with pytest.raises(SymplecticError):
        SympGSpace(2, Mat([[1, 0], [0, 1]]), TrivialAction(2))  # symmetric
    with pytest.raises(SymplecticError):
        SympGSpace(2, Mat.zeros(2, 2), TrivialAction(2))  # degenerate


def test_symp_orthogonal_examples():
    X = standard_space(1)
    e1 = Subspace(2, [[1, 0]])
    assert symp_orthogonal(X, e1) == e1
    assert symp_orthogonal(X, Subspace.zero(2)) == Subspace.full(2)
    assert symp_orthogonal(X, Subspace.full(2)) == Subspace.zero(2)


def test_classify_examples():
    X = standard_space(1)
    assert classify(X, Subspace(2, [[1, 0]])).lagrangian
    z = classify(X, Subspace.zero(2))
    assert z.isotropic and not z.coisotropic
    f = classify(X, Subspace.full(2))
    assert f.coisotropic and f.symplectic and not f.isotropic


def test_dual_and_product_examples():
    X = standard_space(1)
    assert dual(X).omega == -OMEGA0
    one = unit_space()
    P = product(one, X)
    assert P.omega == X.omega and P.dim == 2
    XX = product(X, X)
    assert XX.omega == Mat([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])


def test_product_rejects_model_mismatch():
    z2 = make_model("z2")
    X = random_space(z2, random.Random(0), 1, min_half=1).space
    with pytest.raises(GroupError):
        product(X, standard_space(1))


def _subspaces(V, rng):
    n = V.dim
    k = rng.randint(0, n)
    return Subspace(n, [[rng.randint(-2, 2) for _ in range(n)] for _ in range(k)])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.randoms(use_true_random=False))
def test_orthogonal_is_an_involution(n, rng):
    V = standard_space(n)
    S = _subspaces(V, rng)
    perp = symp_orthogonal(V, S)
    assert S.dim + perp.dim == V.dim
    assert symp_orthogonal(V, perp) == S


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.randoms(use_true_random=False))
def test_lagrangian_flag_agrees_with_dimension_count(n, rng):
    V = standard_space(n)
    S = _subspaces(V, rng)
    kind = classify(V, S)
    assert kind.lagrangian == (kind.isotropic and kind.coisotropic)
    assert kind.lagrangian == (kind.isotropic and 2 * S.dim == V.dim) == is_lagrangian(V, S)
    assert kind.symplectic == (intersect(S, symp_orthogonal(V, S)).dim == 0)


@pytest.mark.parametrize("model", MODELS)
def test_orthogonal_of_invariant_is_invariant(model):
    m = make_model(model)
    rng = random.Random(11)
    for _ in range(15):
        ps = random_space(m, rng, 3)
        S = random_invariant_subspace(ps.space.action, Subspace.full(ps.space.dim), rng)
        assert ps.space.action.is_invariant(symp_orthogonal(ps.space, S))


def test_dual_is_an_involution_and_product_associative():
    rng = random.Random(4)
    m = make_model("z4")
    A, B, C = (random_space(m, rng, 2).space for _ in range(3))
    assert dual(dual(A)) == A
    # associativity: both bracketings use the same coordinate order
    assert product(product(A, B), C) == product(A, product(B, C))
    # the explicit reindexing A x B -> B x A is an equivariant symplectomorphism
    AB, BA = product(A, B), product(B, A)
    a, b = A.dim, B.dim
    P = permutation_matrix([a + i for i in range(b)] + list(range(a)))
    assert P.T @ BA.omega @ P == AB.omega
    for g, h in zip(group_matrices(AB.action), group_matrices(BA.action)):
        assert P @ g == h @ P


def test_standard_omega_shape():
    assert standard_omega(0).shape == (0, 0)
    assert standard_omega(2).det() == 1
