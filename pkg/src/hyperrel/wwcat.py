"""Words of canonical relations, their excess, and indexed canonical relations.

A WW morphism is represented here by a :class:`Word` (a composable chain of
relations).  :func:`normalize` sends a word to its classified form, an
:class:`IndexedRel` pairing the set-theoretic composite with the iso class of
the trajectory space.  Composition, tensor product, trace and the unit shift
are then computed on indexed relations directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

from .grouprep import (
    Action,
    CircleAction,
    CircleWeights,
    FiniteAction,
    GroupError,
    IsoClass,
    TrivialAction,
    TrivialDim,
    UnsupportedModel,
    group_matrices,
    invariant_complement,
    invariant_lagrangian_complement,
)
from .linalg import Mat, Rat, Subspace, block_diag, intersect, kernel, vstack
from .relations import (
    CanRel,
    CompositionError,
    compose_set,
    epsilon,
    delta,
    fixed_space,
    graph,
    identity,
    lagrangian_insertion,
    pair_excess,
    product_rel,
)
from .symplectic import (
    SympGSpace,
    classify,
    cotangent_space,
    dual,
    product,
    standard_omega,
    symp_orthogonal,
)

_ZERO = Rat(0)
_ONE = Rat(1)


@dataclass(frozen=True)
class Word:
    """A nonempty composable chain ``factors[0] o factors[1] o ...``."""

    factors: tuple

    def __post_init__(self):
        fs = tuple(self.factors)
        object.__setattr__(self, "factors", fs)
        if not fs:
            raise ValueError("a word needs at least one factor")
        for a, b in zip(fs, fs[1:]):
            if a.target != b.source:
                raise CompositionError("word factors are not composable")

    @property
    def source(self) -> SympGSpace:
        return self.factors[0].source

    @property
    def target(self) -> SympGSpace:
        return self.factors[-1].target

    def __len__(self):
        return len(self.factors)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.factors + other.factors)


def word(*factors: CanRel) -> Word:
    return Word(tuple(factors))


@dataclass(frozen=True)
class GSubspaceWitness:
    """An invariant subspace together with the action it carries."""

    action: Action
    space: Subspace
    restricted: Action = field(repr=False)

    @classmethod
    def of(cls, action: Action, space: Subspace) -> "GSubspaceWitness":
        return cls(action, space, action.restrict(space))

    def iso_class(self) -> IsoClass:
        return self.action.iso_class(self.space)


@dataclass(frozen=True)
class IndexedRel:
    rel: CanRel
    index: IsoClass

    def __post_init__(self):
        zero = self.rel.source.group.zero_class()
        if type(zero) is not type(self.index):
            raise GroupError("index belongs to a different group model")

    @property
    def source(self) -> SympGSpace:
        return self.rel.source

    @property
    def target(self) -> SympGSpace:
        return self.rel.target


def indexed(rel: CanRel, index: IsoClass | None = None) -> IndexedRel:
    return IndexedRel(rel, rel.source.group.zero_class() if index is None else index)


def shadow(w: Word) -> CanRel:
    return reduce(compose_set, w.factors)


def _unit_action(action: Action) -> Action:
    if isinstance(action, FiniteAction):
        return FiniteAction(action.group, (Mat.identity(0),) * action.group.order)
    if isinstance(action, CircleAction):
        return CircleAction(Mat.zeros(0, 0), ())
    return TrivialAction(0)


def trajectory_space(w: Word) -> GSubspaceWitness:
    """Trajectories to 0 from 0, as an invariant subspace of the product of intermediate spaces.

    A trajectory is ``(q_1, ..., q_{n-1})`` with ``(0, q_1) in f_1``,
    ``(q_i, q_{i+1}) in f_{i+1}`` and ``(q_{n-1}, 0) in f_n``.  Solved as one
    kernel in the coefficients of all factor bases.
    """
    fs = w.factors
    if len(fs) == 1:
        return GSubspaceWitness.of(_unit_action(fs[0].source.action), Subspace.zero(0))
    offsets = []
    nvars = 0
    for f in fs:
        offsets.append(nvars)
        nvars += f.sub.dim
    eqs = []

    def _constraint(i: int, cols: range, sign: int, target: list):
        F = fs[i].sub.basis
        for k, c in enumerate(cols):
            row = target[k]
            for r in range(F.rows):
                if F[r, c]:
                    row[offsets[i] + r] += sign * F[r, c]

    first = fs[0]
    block = [[_ZERO] * nvars for _ in range(first.nx)]
    _constraint(0, range(first.nx), 1, block)
    eqs += block
    for i in range(len(fs) - 1):
        f, g = fs[i], fs[i + 1]
        block = [[_ZERO] * nvars for _ in range(f.ny)]
        _constraint(i, range(f.nx, f.nx + f.ny), 1, block)
        _constraint(i + 1, range(g.nx), -1, block)
        eqs += block
    last = fs[-1]
    block = [[_ZERO] * nvars for _ in range(last.ny)]
    _constraint(len(fs) - 1, range(last.nx, last.nx + last.ny), 1, block)
    eqs += block
    sol = kernel(Mat(eqs, nvars)) if eqs else Subspace.full(nvars)
    inner = [f.target for f in fs[:-1]]
    amb = sum(s.dim for s in inner)
    rows = []
    for v in sol.basis.entries:
        q = []
        for i, f in enumerate(fs[:-1]):
            F = f.sub.basis
            a = v[offsets[i]: offsets[i] + F.rows]
            q += [sum((a[r] * F[r, c] for r in range(F.rows) if a[r]), _ZERO)
                  for c in range(f.nx, f.nx + f.ny)]
        rows.append(q)
    action = reduce(lambda a, b: a.direct_sum(b), (s.action for s in inner))
    return GSubspaceWitness.of(action, Subspace(amb, rows))


def word_excess(w: Word) -> IsoClass:
    if len(w) == 1:
        return w.source.group.zero_class()
    return trajectory_space(w).iso_class()


def normalize(w: Word) -> IndexedRel:
    return IndexedRel(shadow(w), word_excess(w))


def ww_compose(a: IndexedRel, b: IndexedRel) -> IndexedRel:
    """``(f', K')(f'', K'') = (f' f'', K' + K'' + E[f', f''])``."""
    return IndexedRel(compose_set(a.rel, b.rel), a.index + b.index + pair_excess(a.rel, b.rel))


def ww_tensor(a: IndexedRel, b: IndexedRel) -> IndexedRel:
    return IndexedRel(product_rel(a.rel, b.rel), a.index + b.index)


def ww_equal(a: IndexedRel, b: IndexedRel) -> bool:
    if a.source != b.source or a.target != b.target:
        raise CompositionError("indexed relations between different spaces")
    return a.rel.sub == b.rel.sub and a.index == b.index


def ww_identity(X: SympGSpace) -> IndexedRel:
    return indexed(identity(X))


def ww_trace(a: IndexedRel) -> IsoClass:
    """Index plus the class of the fixed-point space; checked against ``epsilon o graph``."""
    f = a.rel
    if f.source != f.target:
        raise CompositionError("trace of a non-endomorphism")
    direct = f.source.action.iso_class(fixed_space(f)) + a.index
    via_counit = normalize(Word((epsilon(f.source), graph(f)))).index + a.index
    if via_counit != direct:
        raise AssertionError("trace: fixed-point class disagrees with the counit composite")
    return direct


def shift_action(k: IsoClass, a: IndexedRel) -> IndexedRel:
    return IndexedRel(a.rel, k + a.index)


# --------------------------------------------------------------------------
# graph representatives


def graph_word_direct(w: Word) -> Word:
    """``[f_1 x 1, ..., f_{n-1} x 1, graph(f_n)]`` with ``1`` the identity of ``dual(target)``."""
    yb = identity(dual(w.target))
    fs = w.factors
    return Word(tuple(product_rel(f, yb) for f in fs[:-1]) + (graph(fs[-1]),))


def graph_word_product(w: Word) -> Word:
    """Reduction contracting ``X_i-bar x X_i`` pairs, after the product of all factor graphs."""
    fs = w.factors
    legs = [identity(w.source)]
    legs += [epsilon(dual(f.target)) for f in fs[:-1]]
    legs.append(identity(dual(w.target)))
    red = reduce(product_rel, legs)
    graphs = reduce(product_rel, (graph(f) for f in fs))
    return Word((red, graphs))


def snake_word(X: SympGSpace) -> Word:
    """``(epsilon(X) x 1_X) o (1_X x delta(Xbar))``, a word ``X <- X``."""
    left = product_rel(epsilon(X), identity(X))
    right = product_rel(identity(X), delta(dual(X)))
    return Word((left, right))


def snake_word_right(X: SympGSpace) -> Word:
    """``(1_X x epsilon(Xbar)) o (delta(X) x 1_X)``, the other zigzag ``X <- X``."""
    left = product_rel(identity(X), epsilon(dual(X)))
    right = product_rel(delta(X), identity(X))
    return Word((left, right))


# --------------------------------------------------------------------------
# hyper-Lagrangian normal form


@dataclass(frozen=True)
class HyperLagrangianForm:
    """``X <<- Q <-< 1`` with coisotropic ``C`` (the reduction's domain) and Lagrangian ``L`` in Q.

    The reduction is the projection of ``C`` onto its first ``X.dim``
    coordinates; ``C^omega`` must be the kernel of that projection.
    """

    ambient: SympGSpace
    Q: SympGSpace
    C: Subspace
    L: Subspace
    shadow: Subspace
    excess: IsoClass

    def reduction(self) -> CanRel:
        n = self.ambient.dim
        rows = [list(c[:n]) + list(c) for c in self.C.basis.entries]
        return CanRel(self.ambient, self.Q, Subspace(n + self.Q.dim, rows))

    def coreduction(self) -> CanRel:
        return lagrangian_insertion(self.Q, self.L)

    def word(self) -> Word:
        return Word((self.reduction(), self.coreduction()))


def trivial_rep(like: Action, dim: int) -> Action:
    """The trivial representation of the model of ``like`` on Q^dim."""
    if isinstance(like, FiniteAction):
        return FiniteAction(like.group, (Mat.identity(dim),) * like.group.order)
    if isinstance(like, CircleAction):
        return CircleAction(Mat.zeros(dim, dim), (0,) if dim else ())
    return TrivialAction(dim)


def rotation_block(k: int) -> Mat:
    return Mat([[0, -k], [k, 0]])


def circle_rep(weights: CircleWeights) -> CircleAction:
    """Block-rotation generator with the given multiplicities (weight-0 blocks are 1x1 zeros)."""
    blocks = []
    for k, n in weights.mults:
        blocks += [Mat.zeros(1, 1) if k == 0 else rotation_block(k)] * n
    if not blocks:
        return CircleAction(Mat.zeros(0, 0), ())
    return CircleAction(block_diag(*blocks))


def realize(like: Action, K: IsoClass, E: Action | None = None) -> Action:
    """A representation in the class ``K``; ``E`` is an explicit witness, checked against ``K``."""
    if E is None:
        if isinstance(K, TrivialDim):
            E = TrivialAction(K.dim)
        elif isinstance(K, CircleWeights):
            E = circle_rep(K)
        elif K.is_zero():
            E = trivial_rep(like, 0)
        else:
            raise UnsupportedModel("a nonzero finite-group class needs an explicit witness representation")
    if E.group != like.group:
        raise GroupError("witness representation belongs to a different group")
    if E.iso_class(Subspace.full(E.dim)) != K:
        raise GroupError("witness representation is not in the requested class")
    return E


def hyper_normal_form(X: SympGSpace, Lam: Subspace, K: IsoClass, r: int = 0,
                      E: Action | None = None) -> HyperLagrangianForm:
    """``Q = X x (E + E*) x (Q^r + Q^r*)``, ``C = X x E x Q^r``, ``L = Lam x E x Q^r*``."""
    if r < 0:
        raise ValueError("stabilisation parameter r must be nonnegative")
    if not (classify(X, Lam).lagrangian and X.action.is_invariant(Lam)):
        raise GroupError("Lam must be an invariant Lagrangian subspace of X")
    E = realize(X.action, K, E)
    n, e = X.dim, E.dim
    Q = product(X, cotangent_space(E), cotangent_space(trivial_rep(X.action, r)))
    e0 = n
    r0 = n + 2 * e
    C = Subspace.coordinate(Q.dim, list(range(n)) + list(range(e0, e0 + e)) + list(range(r0, r0 + r)))
    lam_rows = [list(v) + [_ZERO] * (Q.dim - n) for v in Lam.basis.entries]
    rest = Subspace.coordinate(Q.dim, list(range(e0, e0 + e)) + list(range(r0 + r, r0 + 2 * r)))
    L = Subspace(Q.dim, lam_rows + [list(v) for v in rest.basis.entries])
    form = HyperLagrangianForm(X, Q, C, L, Lam, K)
    _check_hyper_form(form)
    return form


def _check_hyper_form(form: HyperLagrangianForm) -> None:
    Q = form.Q
    kc, kl = classify(Q, form.C), classify(Q, form.L)
    if not (kc.coisotropic and kl.lagrangian):
        raise AssertionError("normal form: C not coisotropic or L not Lagrangian")
    if not (Q.action.is_invariant(form.C) and Q.action.is_invariant(form.L)):
        raise AssertionError("normal form: C or L not invariant")
    nf = normalize(form.word())
    if nf.rel.sub != form.shadow or nf.index != form.excess:
        raise AssertionError("normal form: shadow or excess differs from the requested pair")
    # excess read directly from the trajectories at zero, C^omega & L
    direct = Q.action.iso_class(intersect(symp_orthogonal(Q, form.C), form.L))
    if direct != form.excess:
        raise AssertionError("normal form: C^omega & L has the wrong class")


# --------------------------------------------------------------------------
# six-block normal form of (V, L, I)


@dataclass(frozen=True)
class SixBlocks:
    """Decomposition ``V = A + A* + J* + J + R* + R`` with ``A = I & L``.

    ``basis`` stacks the new basis vectors in that block order; ``omega`` and
    ``action`` are the model form and the model action built blockwise from the
    actions on ``A``, ``J`` and ``R`` and their contragredients.
    """

    spaces: tuple
    basis: Mat
    omega: Mat
    action: Action
    classes: tuple

    names = ("I&L", "(I&L)*", "J*", "J", "R*", "R")

    @property
    def dims(self) -> tuple:
        return tuple(s.dim for s in self.spaces)

    @property
    def signature(self) -> tuple:
        return self.dims, self.classes, self.omega


def _dual_basis(left: Mat, cands: Mat, om: Mat, left_first: bool) -> Mat:
    """Basis ``d`` of span(cands) with ``omega(left_i, d_j) = delta`` (or ``omega(d_j, left_i)``)."""
    if left.rows == 0:
        return cands
    G = left @ om @ cands.T if left_first else cands @ om @ left.T
    if left_first:
        return G.inverse().T @ cands
    return G.inverse() @ cands


def lemma4_normal_form(V: SympGSpace, L: Subspace, I: Subspace) -> tuple[Mat, SixBlocks]:
    """Equivariant symplectic change of basis ``T`` putting ``(V, L, I)`` in six-block form.

    ``T`` maps V-coordinates to model coordinates: ``T^T omega_model T =
    omega_V``, ``T g = g_model T`` and ``T L``, ``T I`` are coordinate blocks.
    """
    act = V.action
    group_matrices(act)  # raises for the circle model
    if not (classify(V, L).lagrangian and act.is_invariant(L)):
        raise GroupError("L must be an invariant Lagrangian subspace")
    if not (classify(V, I).isotropic and act.is_invariant(I)):
        raise GroupError("I must be an invariant isotropic subspace")
    om = V.omega
    A = intersect(I, L)
    J = invariant_complement(act, A, within=I)
    K = invariant_complement(act, A, within=L)
    M = invariant_lagrangian_complement(V, L, J)
    A_star = intersect(M, symp_orthogonal(V, K))
    K_star = intersect(M, symp_orthogonal(V, A))
    R = invariant_complement(act, J, within=K_star)
    J_star = intersect(K, symp_orthogonal(V, R))
    R_star = intersect(K, symp_orthogonal(V, J))

    a_b = A.basis
    as_b = _dual_basis(a_b, A_star.basis, om, left_first=True)
    j_b = J.basis
    js_b = _dual_basis(j_b, J_star.basis, om, left_first=False)
    r_b = R.basis
    rs_b = _dual_basis(r_b, R_star.basis, om, left_first=False)
    B = vstack(a_b, as_b, js_b, j_b, rs_b, r_b)
    model_omega = block_diag(standard_omega(A.dim), standard_omega(J.dim), standard_omega(R.dim))
    if B @ om @ B.T != model_omega:
        raise AssertionError("six-block basis is not a symplectic basis")
    T = B.inverse().T
    rA, rJ, rR = act.restrict(A), act.restrict(J), act.restrict(R)
    model_action = rA.direct_sum(rA.contragredient()).direct_sum(rJ.contragredient()).direct_sum(rJ)
    model_action = model_action.direct_sum(rR.contragredient()).direct_sum(rR)
    blocks = SixBlocks(
        spaces=(A, A_star, J_star, J, R_star, R),
        basis=B,
        omega=model_omega,
        action=model_action,
        classes=(act.iso_class(A), act.iso_class(J), act.iso_class(R)),
    )
    return T, blocks


def check_lemma4(V: SympGSpace, L: Subspace, I: Subspace, T: Mat, blocks: SixBlocks) -> list:
    """Exact postconditions of :func:`lemma4_normal_form`; returns a list of failures."""
    failures = []
    if T.T @ blocks.omega @ T != V.omega:
        failures.append("T is not symplectic")
    for g, gm in zip(group_matrices(V.action), group_matrices(blocks.action)):
        if T @ g != gm @ T:
            failures.append("T is not equivariant")
            break
    d = blocks.dims
    offs = [sum(d[:i]) for i in range(6)]

    def coords(*which):
        idx = []
        for w in which:
            idx += range(offs[w], offs[w] + d[w])
        return Subspace.coordinate(V.dim, idx)

    if L.image(T) != coords(0, 2, 4):
        failures.append("T does not map L onto the (I&L) + J* + R* block")
    if I.image(T) != coords(0, 3):
        failures.append("T does not map I onto the (I&L) + J block")
    return failures

