import itertools
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from hyperrel.grouprep import (
    CircleAction,
    CircleWeights,
    FiniteChar,
    FiniteGroup,
    GroupError,
    TrivialAction,
    TrivialDim,
    UnsupportedModel,
    class_add,
    class_equal,
    class_is_zero,
    close_group,
    group_matrices,
    invariant_complement,
    invariant_lagrangian_complement,
    is_invariant,
    iso_class,
)
from hyperrel.linalg import Mat, Subspace, intersect, sum_spaces
from hyperrel.randgen import (
    FINITE_MODELS,
    MODELS,
    make_model,
    random_invariant_split,
    random_isotropic,
    random_invariant_lagrangian,
    random_space,
)
from hyperrel.symplectic import classify, standard_space

ROT = Mat([[0, -1], [1, 0]])
MINUS = Mat([[-1, 0], [0, -1]])
E1 = Subspace(2, [[1, 0]])
E2 = Subspace(2, [[0, 1]])


def test_close_group_z2():
    a = close_group([MINUS])
    assert a.group.order == 2
    assert a.group.elements == (Mat.identity(2), MINUS)


def test_close_group_z4_powers():
    g = FiniteGroup([ROT])
    # hand-multiplied powers of the quarter turn
    assert g.elements == (Mat.identity(2), ROT, MINUS, Mat([[0, 1], [-1, 0]]))


def test_close_group_s3():
    s, t = Mat([[-1, 1], [0, 1]]), Mat([[0, -1], [1, -1]])
    g = FiniteGroup([s, t])
    assert g.order == 6
    # oracle: the standard character is 2 at 1, 0 on reflections, -1 on rotations
    traces = sorted(int(m.trace()) for m in g.elements)
    assert traces == [-1, -1, 0, 0, 0, 2]
    # and the closure is a group: table is a Latin square with an identity row
    for row in g.table:
        assert sorted(row) == list(range(6))
    assert g.table[0] == tuple(range(6))
    for a, b, c in itertools.product(range(6), repeat=3):
        assert g.table[g.table[a][b]][c] == g.table[a][g.table[b][c]]


def test_close_group_cap_and_bad_generators():
    shear = Mat([[1, 1], [0, 1]])
    with pytest.raises(GroupError, match="cap"):
        FiniteGroup([shear], cap=50)
    with pytest.raises(GroupError):
        FiniteGroup([Mat([[1, 0], [0, 0]])])
    with pytest.raises(GroupError):
        FiniteGroup([Mat.identity(2), Mat.identity(3)])


def test_represent_checks_homomorphism():
    g = FiniteGroup([ROT])
    assert g.represent([Mat([[-1]])]).matrices == tuple(Mat([[x]]) for x in (1, -1, 1, -1))
    with pytest.raises(GroupError):
        g.represent([Mat([[2]])])  # 2^4 != 1


def test_is_invariant_examples():
    assert TrivialAction(2).is_invariant(E1)
    assert not is_invariant(close_group([ROT]), E1)
    assert is_invariant(close_group([MINUS]), E1)
    assert CircleAction(ROT).is_invariant(Subspace.full(2))
    assert not CircleAction(ROT).is_invariant(E1)


def test_iso_class_examples():
    z2 = close_group([MINUS])
    c = iso_class(z2, E1)
    assert isinstance(c, FiniteChar) and c.values == (1, -1)
    assert iso_class(CircleAction(ROT), Subspace.full(2)) == CircleWeights.of({1: 1})
    assert class_is_zero(iso_class(z2, Subspace.zero(2)))
    assert class_is_zero(iso_class(CircleAction(ROT), Subspace.zero(2)))
    assert iso_class(TrivialAction(3), Subspace(3, [[1, 2, 3]])) == TrivialDim(1)
    with pytest.raises(GroupError):
        iso_class(close_group([ROT]), E1)


def test_circle_weight_validation():
    A = Mat([[0, -2, 0], [2, 0, 0], [0, 0, 0]])
    assert CircleAction(A).weights == (0, 2)
    with pytest.raises(GroupError):
        CircleAction(Mat([[0, 1], [0, 0]]))  # nilpotent
    with pytest.raises(GroupError):
        CircleAction(Mat([[1, 0], [0, -1]]))  # real eigenvalues
    with pytest.raises(GroupError):
        CircleAction(Mat([[0, -2], [1, 0]]))  # A^2 = -2, weight sqrt 2


def test_class_arithmetic_examples():
    g = FiniteGroup([MINUS])
    a = FiniteChar(g, (1, -1))
    assert class_add(a, a).values == (2, -2)
    assert class_add(a, g.zero_class()) == a
    assert class_add(CircleWeights.of({0: 1}), CircleWeights.of({2: 1})) == CircleWeights.of({0: 1, 2: 1})
    assert CircleWeights.of({0: 1, 2: 1}).total_dim == 3
    with pytest.raises(GroupError):
        class_equal(TrivialDim(1), CircleWeights.of({0: 1}))
    with pytest.raises(GroupError):
        FiniteChar(g, (-1, 1))


def test_class_json():
    g = FiniteGroup([MINUS])
    assert FiniteChar(g, (1, -1)).to_json() == {"character": ["1", "-1"]}
    assert CircleWeights.of({0: 2, 3: 1}).to_json() == {"weights": {"0": 2, "3": 1}}
    assert TrivialDim(4).to_json() == {"trivial_dim": 4}


def test_invariant_complement_examples():
    V = standard_space(1)
    assert invariant_complement(V, E1, Subspace.zero(2)) == E2
    z2 = close_group([MINUS])
    assert invariant_complement(z2, E1, E2) == E2
    with pytest.raises(GroupError):
        invariant_complement(z2, E1, E1)
    with pytest.raises(UnsupportedModel):
        invariant_complement(CircleAction(ROT), Subspace.zero(2), Subspace.zero(2))


def test_invariant_lagrangian_complement_examples():
    V = standard_space(1)
    assert invariant_lagrangian_complement(V, E1, Subspace.zero(2)) == E2
    V4 = standard_space(2)
    L = Subspace(4, [[1, 0, 0, 0], [0, 1, 0, 0]])
    J = Subspace(4, [[0, 0, 1, 0]])
    M = invariant_lagrangian_complement(V4, L, J)
    assert classify(V4, M).lagrangian
    assert M.contains_space(J) and intersect(M, L).dim == 0
    # J already Lagrangian forces M = J
    Jl = Subspace(4, [[0, 0, 1, 0], [0, 0, 0, 1]])
    assert invariant_lagrangian_complement(V4, L, Jl) == Jl
    with pytest.raises(GroupError):
        invariant_lagrangian_complement(V4, Subspace(4, [[1, 0, 0, 0]]), Subspace.zero(4))


# ---- properties


@pytest.mark.parametrize("model", MODELS)
def test_iso_class_additive_on_invariant_sums(model):
    m = make_model(model)
    rng = random.Random(5)
    for _ in range(25):
        V = random_space(m, rng, 3).space
        W, Wc = random_invariant_split(V.action, Subspace.full(V.dim), rng)
        assert intersect(W, Wc).dim == 0 and sum_spaces(W, Wc).dim == V.dim
        a = V.action
        assert class_equal(a.iso_class(Subspace.full(V.dim)), class_add(a.iso_class(W), a.iso_class(Wc)))


@pytest.mark.parametrize("model", MODELS)
def test_iso_class_is_conjugation_stable(model):
    m = make_model(model)
    rng = random.Random(6)
    for _ in range(20):
        V = random_space(m, rng, 3).space
        W, _ = random_invariant_split(V.action, Subspace.full(V.dim), rng)
        a = V.action
        # moving W by a group element, or conjugating the whole action
        if model != "circle":
            for g in group_matrices(a):
                assert class_equal(a.iso_class(W), a.iso_class(W.image(g)))
        P = Mat.identity(V.dim)
        for i in range(V.dim - 1):
            P = P @ Mat([[1 if r == c else (rng.randint(-2, 2) if (r, c) == (i, i + 1) else 0)
                          for c in range(V.dim)] for r in range(V.dim)])
        assert class_equal(a.iso_class(W), a.conjugate(P).iso_class(W.image(P)))


@pytest.mark.parametrize("model", FINITE_MODELS)
def test_invariant_complement_postconditions(model):
    m = make_model(model)
    rng = random.Random(7)
    for _ in range(25):
        ps = random_space(m, rng, 3)
        a = ps.space.action
        L, rest = random_invariant_split(a, Subspace.full(ps.space.dim), rng)
        J, _ = random_invariant_split(a, rest, rng)
        M = invariant_complement(ps.space, L, J)
        assert a.is_invariant(M)
        assert intersect(L, M).dim == 0 and sum_spaces(L, M).dim == ps.space.dim
        assert M.contains_space(J)


@pytest.mark.parametrize("model", FINITE_MODELS)
def test_invariant_lagrangian_complement_postconditions(model):
    m = make_model(model)
    rng = random.Random(8)
    done = 0
    while done < 25:
        ps = random_space(m, rng, 3)
        V = ps.space
        L = random_invariant_lagrangian(ps, rng)
        J = random_isotropic(ps, rng)
        if intersect(L, J).dim:
            continue
        M = invariant_lagrangian_complement(V, L, J)
        assert V.action.is_invariant(M) and classify(V, M).lagrangian
        assert intersect(L, M).dim == 0 and M.contains_space(J)
        done += 1


def test_trivial_class_is_dimension():
    rng = random.Random(9)
    m = make_model("trivial")
    for _ in range(10):
        V = random_space(m, rng, 3).space
        S = Subspace(V.dim, [[rng.randint(-1, 1) for _ in range(V.dim)] for _ in range(2)])
        assert V.action.iso_class(S) == TrivialDim(S.dim)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=3))
def test_circle_weights_match_eigenvalues(weights):
    # oracle: sympy's eigenvalues of the block generator are +-ik with multiplicity
    blocks = [Mat.zeros(1, 1) if k == 0 else Mat([[0, -k], [k, 0]]) for k in weights]
    from hyperrel.linalg import block_diag

    A = block_diag(*blocks)
    got = CircleAction(A).iso_class(Subspace.full(A.rows))
    ev = sympy.Matrix(A.rows, A.rows, [int(x) for r in A for x in r]).eigenvals()
    expect = {}
    for lam, mult in ev.items():
        k = int(sympy.im(lam))
        if k >= 0:
            expect[k] = expect.get(k, 0) + mult
    assert got == CircleWeights.of(expect)
