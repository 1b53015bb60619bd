import random

import pytest

from hyperrel.grouprep import (
    CircleWeights,
    FiniteChar,
    FiniteGroup,
    GroupError,
    TrivialDim,
    UnsupportedModel,
    full_class,
)
from hyperrel.laws import lemma4_triple_classes, random_lemma4_triple
from hyperrel.linalg import Mat, Subspace, direct_product, intersect, kernel, project
from hyperrel.randgen import (
    FINITE_MODELS,
    MODELS,
    make_model,
    random_chain,
    random_class,
    random_invariant_lagrangian,
    random_space,
)
from hyperrel.relations import (
    CompositionError,
    compose_set,
    identity,
    lagrangian_insertion,
    make_relation,
    pair_excess,
    transpose,
    unit_relation,
)
from hyperrel.symplectic import classify, standard_space, unit_space
from hyperrel.wwcat import (
    IndexedRel,
    Word,
    check_lemma4,
    hyper_normal_form,
    indexed,
    lemma4_normal_form,
    normalize,
    shadow,
    shift_action,
    trajectory_space,
    word,
    word_excess,
    ww_compose,
    ww_equal,
    ww_tensor,
    ww_trace,
)

X = standard_space(1)
ELL = Subspace(2, [[1, 0]])
EM = Subspace(2, [[0, 1]])
ell = lagrangian_insertion(X, ELL)
em = lagrangian_insertion(X, EM)

MINUS = FiniteGroup([Mat([[-1, 0], [0, -1]])])
XZ2 = standard_space(1, MINUS.defining_action())


def test_shadow_examples():
    d = identity(X)
    assert shadow(word(ell)) == ell
    assert shadow(word(d, ell)) == ell
    f = make_relation(X, X, [[1, 0, 1, 1], [0, 1, 0, 1]])  # graph of a shear
    assert shadow(word(d, f, d)) == f
    assert shadow(word(transpose(ell), ell)) == unit_relation(X)


def test_trajectory_space_examples():
    d = identity(X)
    assert trajectory_space(word(d, d)).space == Subspace.zero(2)
    assert trajectory_space(word(transpose(ell), ell)).space == ELL
    assert trajectory_space(word(transpose(em), ell)).space.dim == 0


def test_word_excess_examples():
    assert word_excess(word(ell)) == TrivialDim(0)
    assert word_excess(word(transpose(ell), ell)) == TrivialDim(1)
    l2 = lagrangian_insertion(XZ2, ELL)
    c = word_excess(word(transpose(l2), l2))
    assert isinstance(c, FiniteChar) and c.values == (1, -1)


def test_normalize_examples():
    n = normalize(word(ell))
    assert n.rel == ell and n.index == TrivialDim(0)
    n = normalize(word(transpose(ell), ell))
    assert n.rel == unit_relation(X) and n.index == TrivialDim(1)
    n = normalize(word(transpose(em), ell))
    assert n.rel == compose_set(transpose(em), ell) and n.index == TrivialDim(0)


def test_ww_compose_examples():
    a = IndexedRel(ell, TrivialDim(2))
    assert ww_equal(ww_compose(indexed(identity(X)), a), a)
    c = ww_compose(indexed(transpose(ell)), indexed(ell))
    assert c.rel == unit_relation(X) and c.index == TrivialDim(1)
    c = ww_compose(IndexedRel(transpose(ell), TrivialDim(3)), IndexedRel(ell, TrivialDim(4)))
    assert c.index == TrivialDim(3 + 4 + 1)
    with pytest.raises(CompositionError):
        ww_compose(indexed(ell), indexed(ell))


def test_ww_tensor_examples():
    one = indexed(unit_relation(X))
    assert ww_equal(ww_tensor(indexed(ell), one), indexed(ell))
    t = ww_tensor(IndexedRel(ell, TrivialDim(1)), IndexedRel(em, TrivialDim(2)))
    assert t.index == TrivialDim(3)
    assert t.rel.sub.dim == ell.sub.dim + em.sub.dim


def test_ww_equal_examples():
    assert not ww_equal(indexed(ell), IndexedRel(ell, TrivialDim(1)))
    f = make_relation(X, X, [[1, 0, 1, 0], [0, 1, 0, 1]])
    g = make_relation(X, X, [[1, 1, 1, 1], [0, -1, 0, -1]])  # same subspace, other basis
    assert ww_equal(indexed(f), indexed(g))
    with pytest.raises(CompositionError):
        ww_equal(indexed(ell), indexed(identity(X)))
    with pytest.raises(GroupError):
        IndexedRel(ell, CircleWeights.of({0: 1}))


def test_ww_trace_examples():
    assert ww_trace(indexed(identity(X))) == TrivialDim(2)
    neg = make_relation(X, X, [[-1, 0, 1, 0], [0, -1, 0, 1]])  # graph of -Id
    assert ww_trace(indexed(neg)) == TrivialDim(0)
    assert ww_trace(IndexedRel(neg, TrivialDim(3))) == TrivialDim(3)
    assert ww_trace(indexed(identity(XZ2))) == full_class(XZ2.action)
    with pytest.raises(CompositionError):
        ww_trace(indexed(ell))


def test_shift_action_examples():
    a = IndexedRel(ell, TrivialDim(1))
    assert ww_equal(shift_action(TrivialDim(0), a), a)
    assert shift_action(TrivialDim(2), a).index == TrivialDim(3)
    b = indexed(transpose(ell))
    left = ww_compose(shift_action(TrivialDim(2), b), a)
    right = shift_action(TrivialDim(2), ww_compose(b, a))
    assert ww_equal(left, right)


def test_hyper_normal_form_examples():
    form = hyper_normal_form(X, ELL, TrivialDim(1), 0)
    assert (form.Q.dim, form.C.dim, form.L.dim) == (4, 3, 2)
    assert form.excess == TrivialDim(1)
    n = normalize(form.word())
    assert n.rel.sub == ELL and n.index == TrivialDim(1)
    minimal = hyper_normal_form(X, ELL, TrivialDim(0), 0)
    assert minimal.C == Subspace.full(2) and minimal.L == ELL
    big = hyper_normal_form(X, ELL, TrivialDim(1), 2)
    assert big.Q.dim == 8 and ww_equal(normalize(big.word()), n)
    with pytest.raises(GroupError):
        hyper_normal_form(X, Subspace.full(2), TrivialDim(0))


def test_hyper_normal_form_witness_rules():
    l2 = lagrangian_insertion(XZ2, ELL)
    w = trajectory_space(word(transpose(l2), l2))
    K = w.iso_class()
    with pytest.raises(UnsupportedModel):
        hyper_normal_form(XZ2, ELL, K)
    form = hyper_normal_form(XZ2, ELL, K, 1, E=w.restricted)
    assert normalize(form.word()).index == K
    with pytest.raises(GroupError):
        hyper_normal_form(XZ2, ELL, K + K, E=w.restricted)


def test_lemma4_examples():
    _, b = lemma4_normal_form(X, ELL, Subspace.zero(2))
    assert b.dims == (0, 0, 0, 0, 1, 1)
    T, b = lemma4_normal_form(X, ELL, ELL)
    assert b.dims == (1, 1, 0, 0, 0, 0)
    assert check_lemma4(X, ELL, ELL, T, b) == []
    circ = make_model("circle")
    V = random_space(circ, random.Random(0), 1, min_half=1).space
    with pytest.raises(UnsupportedModel):
        lemma4_normal_form(V, Subspace.coordinate(V.dim, range(V.dim // 2)), Subspace.zero(V.dim))


def test_lemma4_equal_classes_equal_signatures_z2():
    m = make_model("z2")
    rng = random.Random(41)
    by_classes = {}
    pairs = 0
    for _ in range(80):
        ps, L, I = random_lemma4_triple(m, rng, 2)
        V = ps.space
        T, b = lemma4_normal_form(V, L, I)
        assert check_lemma4(V, L, I, T, b) == []
        key = tuple(c.values for c in lemma4_triple_classes(V, L, I))
        if key in by_classes:
            assert by_classes[key] == (b.dims, b.classes, b.omega)
            pairs += 1
        by_classes[key] = (b.dims, b.classes, b.omega)
    assert pairs >= 5


# ---- properties


def _trajectory_oracle(w: Word) -> Subspace:
    """Trajectory space by intersecting the full product of factors with the matching constraints."""
    fs = w.factors
    big = fs[0].sub
    for f in fs[1:]:
        big = direct_product(big, f.sub)
    total = big.ambient_dim
    # coordinates of each factor inside the product
    offs, pos = [], 0
    for f in fs:
        offs.append(pos)
        pos += f.nx + f.ny
    rows = []
    for i in range(len(fs) - 1):
        ny = fs[i].ny
        for j in range(ny):
            r = [0] * total
            r[offs[i] + fs[i].nx + j] = 1
            r[offs[i + 1] + j] = -1
            rows.append(r)
    ends = list(range(fs[0].nx)) + list(range(offs[-1] + fs[-1].nx, total))
    for c in ends:
        r = [0] * total
        r[c] = 1
        rows.append(r)
    cut = intersect(big, kernel(Mat(rows, total)) if rows else Subspace.full(total))
    keep = []
    for i in range(len(fs) - 1):
        keep += range(offs[i] + fs[i].nx, offs[i] + fs[i].nx + fs[i].ny)
    return project(cut, keep)


@pytest.mark.parametrize("model", MODELS)
def test_trajectory_space_matches_fibre_product_oracle(model):
    m = make_model(model)
    rng = random.Random(51)
    for _ in range(25):
        n = rng.randint(2, 4)
        w = Word(tuple(random_chain(m, rng, n, 2, total_half=4)))
        t = trajectory_space(w)
        assert t.space == _trajectory_oracle(w)
        assert t.action.is_invariant(t.space)


@pytest.mark.parametrize("model", MODELS)
def test_associativity_of_indexed_composition(model):
    m = make_model(model)
    rng = random.Random(52)
    for _ in range(20):
        f, g, h = random_chain(m, rng, 3, 2)
        a, b, c = (IndexedRel(x, random_class(m, rng)) for x in (f, g, h))
        assert ww_equal(ww_compose(ww_compose(a, b), c), ww_compose(a, ww_compose(b, c)))


@pytest.mark.parametrize("model", MODELS)
def test_normalize_is_a_congruence(model):
    m = make_model(model)
    rng = random.Random(53)
    for _ in range(20):
        fs = random_chain(m, rng, rng.randint(2, 4), 2, total_half=4)
        cut = rng.randint(1, len(fs) - 1)
        u, v = Word(tuple(fs[:cut])), Word(tuple(fs[cut:]))
        assert ww_equal(normalize(u + v), ww_compose(normalize(u), normalize(v)))
        assert word_excess(u + v) == word_excess(u) + word_excess(v) + pair_excess(shadow(u), shadow(v))


def test_trivial_index_is_trajectory_dimension():
    m = make_model("trivial")
    rng = random.Random(54)
    for _ in range(20):
        w = Word(tuple(random_chain(m, rng, rng.randint(2, 4), 2)))
        assert normalize(w).index == TrivialDim(trajectory_space(w).space.dim)


@pytest.mark.parametrize("model", MODELS)
def test_hyper_normal_form_round_trip(model):
    m = make_model(model)
    rng = random.Random(55)
    for _ in range(10):
        # excess class with a witness, taken from a random word
        w = Word(tuple(random_chain(m, rng, 2, 2)))
        witness = trajectory_space(w)
        ps = random_space(m, rng, 2)
        Lam = random_invariant_lagrangian(ps, rng)
        forms = [hyper_normal_form(ps.space, Lam, witness.iso_class(), r, E=witness.restricted) for r in (0, 1, 3)]
        for f in forms:
            assert classify(f.Q, f.C).coisotropic and classify(f.Q, f.L).lagrangian
            n = normalize(f.word())
            assert n.rel.sub == Lam and n.index == witness.iso_class()
        assert ww_equal(normalize(forms[0].word()), normalize(forms[2].word()))


@pytest.mark.parametrize("model", FINITE_MODELS)
def test_lemma4_postconditions(model):
    m = make_model(model)
    rng = random.Random(56)
    for _ in range(15):
        ps, L, I = random_lemma4_triple(m, rng, 3)
        T, b = lemma4_normal_form(ps.space, L, I)
        assert check_lemma4(ps.space, L, I, T, b) == []
        assert sum(b.dims) == ps.space.dim


def test_unit_space_words():
    one = unit_space()
    u = unit_relation(X)
    assert word_excess(word(u, u)) == TrivialDim(0)
    assert trajectory_space(word(u, u)).space.ambient_dim == 0
    assert one.dim == 0
