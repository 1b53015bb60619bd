"""Seeded generators for random equivariant instances.

Test spaces are cotangent spaces ``E + E*`` of random representations ``E``,
each carrying the polarization ``(E, E*)``.  Random invariant Lagrangians are
built from a polarization ``(P, M)``: pick an invariant ``W <= P`` with
invariant complement ``W'``; the conormal ``B = W + (M & W^omega)`` and
``B' = W' + (M & W'^omega)`` are transverse invariant Lagrangians, and the
result is the graph over ``B`` of an invariant symmetric map into ``B'``.

Invariant data comes from group averaging for the trivial and finite models,
and from generator-stable kernels for the circle model.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .grouprep import (
    Action,
    IsoClass,
    CircleAction,
    FiniteAction,
    FiniteGroup,
    TrivialAction,
    full_class,
    group_matrices,
    invariant_complement,
    reynolds,
)
from .linalg import Mat, Rat, Subspace, block_diag, direct_product, kernel
from .relations import CanRel
from .symplectic import SympGSpace, cotangent_space, dual, product, symp_orthogonal

MODELS = ("trivial", "z2", "z4", "s3", "circle")
FINITE_MODELS = ("trivial", "z2", "z4", "s3")

_ROT = [[0, -1], [1, 0]]
_S3_S = [[-1, 1], [0, 1]]
_S3_T = [[0, -1], [1, -1]]


@dataclass(frozen=True)
class Model:
    """A group model together with the irreducible blocks used to build random representations."""

    name: str
    group: object
    blocks: tuple  # generator images per block (finite), generator (circle), or dims (trivial)

    def rep(self, picks: list) -> Action:
        if self.name == "trivial":
            return TrivialAction(sum(picks))
        if self.name == "circle":
            mats = [self.blocks[i] for i in picks]
            if not mats:
                return CircleAction(Mat.zeros(0, 0), ())
            return CircleAction(block_diag(*mats))
        images = []
        for k in range(len(self.group.generators)):
            mats = [self.blocks[i][k] for i in picks]
            images.append(block_diag(*mats) if mats else Mat.zeros(0, 0))
        if not picks:
            return FiniteAction(self.group, (Mat.identity(0),) * self.group.order)
        return self.group.represent(images)

    def block_dim(self, i: int) -> int:
        if self.name == "trivial":
            return 1
        b = self.blocks[i]
        return b.rows if isinstance(b, Mat) else b[0].rows


def _m(rows) -> Mat:
    return Mat(rows)


def make_model(name: str, circle_weights=(0, 1, 2)) -> Model:
    if name == "trivial":
        from .grouprep import TRIVIAL

        return Model(name, TRIVIAL, (1,))
    if name == "z2":
        g = FiniteGroup([_m([[-1]])])
        return Model(name, g, ((_m([[1]]),), (_m([[-1]]),)))
    if name == "z4":
        g = FiniteGroup([_m(_ROT)])
        return Model(name, g, ((_m([[1]]),), (_m([[-1]]),), (_m(_ROT),)))
    if name == "s3":
        g = FiniteGroup([_m(_S3_S), _m(_S3_T)])
        return Model(name, g, ((_m([[1]]), _m([[1]])), (_m([[-1]]), _m([[1]])), (_m(_S3_S), _m(_S3_T))))
    if name == "circle":
        from .grouprep import CIRCLE

        blocks = tuple(Mat.zeros(1, 1) if k == 0 else _m([[0, -k], [k, 0]]) for k in circle_weights)
        return Model(name, CIRCLE, blocks)
    raise ValueError(f"unknown group model {name!r}")


def rand_rat(rng: random.Random, spread: int = 3, zero_bias: float = 0.3) -> Rat:
    if rng.random() < zero_bias:
        return Rat(0)
    num = rng.randint(-spread, spread)
    den = rng.choice((1, 1, 1, 2, 3))
    return Rat(num, den)


def random_unimodular(rng: random.Random, n: int) -> Mat:
    """Product of a unit lower and a unit upper triangular integer matrix."""
    lo = [[1 if i == j else (rng.randint(-1, 1) if j < i else 0) for j in range(n)] for i in range(n)]
    up = [[1 if i == j else (rng.randint(-1, 1) if j > i else 0) for j in range(n)] for i in range(n)]
    return Mat(lo, n) @ Mat(up, n)


def random_rep(model: Model, rng: random.Random, max_dim: int, min_dim: int = 0, conjugate: bool = True) -> Action:
    """Random direct sum of irreducible blocks of total dimension in ``[min_dim, max_dim]``."""
    target = rng.randint(min_dim, max(min_dim, max_dim))
    picks = []
    dim = 0
    options = list(range(len(model.blocks)))
    while dim < target:
        fitting = [i for i in options if dim + model.block_dim(i) <= max_dim]
        if not fitting:
            break
        i = rng.choice(fitting)
        picks.append(i)
        dim += model.block_dim(i)
    if model.name == "trivial":
        return TrivialAction(dim)
    rep = model.rep(picks)
    if conjugate and dim > 1 and rng.random() < 0.5:
        rep = rep.conjugate(random_unimodular(rng, dim))
    return rep


@dataclass(frozen=True)
class PolarizedSpace:
    """A symplectic G-space with a pair of transverse invariant Lagrangians."""

    space: SympGSpace
    P: Subspace
    M: Subspace


def cotangent(rep: Action) -> PolarizedSpace:
    V = cotangent_space(rep)
    e = rep.dim
    return PolarizedSpace(V, Subspace.coordinate(2 * e, range(e)), Subspace.coordinate(2 * e, range(e, 2 * e)))


def random_space(model: Model, rng: random.Random, max_half: int, min_half: int = 0) -> PolarizedSpace:
    return cotangent(random_rep(model, rng, max_half, min_half))


def polarized_product(a: PolarizedSpace, b: PolarizedSpace, dual_b: bool = False) -> PolarizedSpace:
    sb = dual(b.space) if dual_b else b.space
    return PolarizedSpace(product(a.space, sb), direct_product(a.P, b.P), direct_product(a.M, b.M))


# --------------------------------------------------------------------------
# invariant subspaces


def _random_vector_in(rng: random.Random, S: Subspace) -> list:
    coeffs = [rand_rat(rng, zero_bias=0.1) for _ in range(S.dim)]
    if S.dim and not any(coeffs):
        coeffs[rng.randrange(S.dim)] = Rat(1)
    out = [Rat(0)] * S.ambient_dim
    for c, row in zip(coeffs, S.basis.entries):
        if c:
            for j, x in enumerate(row):
                if x:
                    out[j] += c * x
    return out


def circle_lines(action: CircleAction, within: Subspace, rng: random.Random) -> list:
    """Random decomposition of an invariant subspace into irreducible invariant pieces."""
    A = action.generator
    n = A.rows
    pieces = []
    for k in action.weights:
        K = kernel(A) if k == 0 else kernel(A @ A + Mat.scalar(n, k * k))
        iso = within & K
        current = Subspace.zero(n)
        while current.dim < iso.dim:
            v = _random_vector_in(rng, iso)
            if current.contains(v):
                continue
            line = Subspace(n, [v] if k == 0 else [v, A.apply(v)])
            pieces.append(line)
            current = current + line
    return pieces


def random_invariant_split(action: Action, within: Subspace, rng: random.Random) -> tuple[Subspace, Subspace]:
    """Random invariant ``W <= within`` together with an invariant complement ``W'``."""
    n = action.dim
    if isinstance(action, CircleAction):
        pieces = circle_lines(action, within, rng)
        W, Wc = Subspace.zero(n), Subspace.zero(n)
        for p in pieces:
            if rng.random() < 0.5:
                W = W + p
            else:
                Wc = Wc + p
        return W, Wc
    W = random_invariant_subspace(action, within, rng)
    return W, invariant_complement(action, W, within=within)


def random_invariant_subspace(action: Action, within: Subspace, rng: random.Random) -> Subspace:
    """Image of the group average of a random low-rank map into ``within``."""
    n = action.dim
    if isinstance(action, CircleAction):
        return random_invariant_split(action, within, rng)[0]
    r = rng.randint(0, within.dim)
    if r == 0:
        return Subspace.zero(n)
    if r == within.dim and rng.random() < 0.5:
        return within
    U = Mat([_random_vector_in(rng, within) for _ in range(r)], n)
    C = Mat([[rand_rat(rng) for _ in range(n)] for _ in range(r)], n)
    m = U.T @ C
    total = None
    for g in group_matrices(action):
        t = g @ m @ g.inverse()
        total = t if total is None else total + t
    return Subspace(n, total.T.entries)


# --------------------------------------------------------------------------
# invariant Lagrangians


def _invariant_symmetric(action: Action, B: Subspace, rng: random.Random) -> Mat:
    """Random symmetric ``S`` with ``S = P S P^T`` (finite) or ``P S + S P^T = 0`` (circle).

    ``P`` is the row-convention matrix of the action on the canonical basis of ``B``.
    """
    m = B.dim
    if m == 0 or rng.random() < 0.45:
        return Mat.zeros(m, m)
    restricted = action.restrict(B)
    if isinstance(restricted, CircleAction):
        P = restricted.generator.T
        idx = [(i, j) for i in range(m) for j in range(i, m)]

        def unit(i, j):
            rows = [[0] * m for _ in range(m)]
            rows[i][j] = rows[j][i] = 1
            return Mat(rows, m)

        cols = []
        for i, j in idx:
            E = unit(i, j)
            X = P @ E + E @ P.T
            cols.append([x for row in X.entries for x in row])
        ker = kernel(Mat(cols, m * m).T)
        S = Mat.zeros(m, m)
        for v in ker.basis.entries:
            c = rand_rat(rng, zero_bias=0.4)
            if c:
                S = S + Mat([[v[idx.index((min(i, j), max(i, j)))] for j in range(m)] for i in range(m)], m).scale(c)
        return S
    S0 = [[Rat(0)] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            S0[i][j] = S0[j][i] = rand_rat(rng, zero_bias=0.5)
    S0 = Mat(S0, m)
    mats = [g.T for g in group_matrices(restricted)]
    total = None
    for P in mats:
        t = P @ S0 @ P.T
        total = t if total is None else total + t
    return total.scale(Rat(1, len(mats)))


def random_invariant_lagrangian(ps: PolarizedSpace, rng: random.Random) -> Subspace:
    V = ps.space
    om = V.omega
    W, Wc = random_invariant_split(V.action, ps.P, rng)
    B = W + (ps.M & symp_orthogonal(V, W))
    Bc = Wc + (ps.M & symp_orthogonal(V, Wc))
    if B.dim == 0:
        return B
    S = _invariant_symmetric(V.action, B, rng)
    G = B.basis @ om @ Bc.basis.T
    Bd = G.inverse().T @ Bc.basis
    rows = B.basis + S @ Bd
    return Subspace(V.dim, rows.entries)


def random_relation(X: PolarizedSpace, Y: PolarizedSpace, rng: random.Random, split_bias: float = 0.4) -> CanRel:
    """Random invariant canonical relation ``X <- Y``.

    With probability ``split_bias`` the relation is a product ``l x m`` of
    Lagrangians of X and Y; such factors have large kernels and cokernels and
    so produce nonzero excess in words far more often than generic ones.
    """
    if rng.random() < split_bias:
        sub = direct_product(random_invariant_lagrangian(X, rng), random_invariant_lagrangian(Y, rng))
        return CanRel(X.space, Y.space, sub)
    amb = polarized_product(X, Y, dual_b=True)
    return CanRel(X.space, Y.space, random_invariant_lagrangian(amb, rng))


def random_isotropic(ps: PolarizedSpace, rng: random.Random) -> Subspace:
    """A random invariant subspace of a random invariant Lagrangian."""
    L = random_invariant_lagrangian(ps, rng)
    return random_invariant_subspace(ps.space.action, L, rng)


def random_chain(model: Model, rng: random.Random, length: int, max_half: int,
                 total_half: int | None = None, last_unit: bool = False) -> list:
    """Random composable relations ``X_0 <- X_1 <- ... <- X_length``.

    Half-dimensions are dealt out one unit at a time to random spaces, so a
    total budget is spread along the chain instead of being used up by its
    first spaces.
    """
    n = length + 1
    budget = n * max_half if total_half is None else total_half
    total = rng.randint(min(budget, n // 2 + 1), budget) if budget else 0
    caps = [0 if last_unit and i == length else max_half for i in range(n)]
    halves = [0] * n
    for _ in range(total):
        open_ = [i for i in range(n) if halves[i] < caps[i]]
        if not open_:
            break
        halves[rng.choice(open_)] += 1
    spaces = [random_space(model, rng, h, min_half=h) for h in halves]
    return [random_relation(spaces[i], spaces[i + 1], rng) for i in range(length)]


def random_class(model: Model, rng: random.Random, max_dim: int = 2) -> IsoClass:
    """Iso class of a random representation of dimension at most ``max_dim``."""
    return full_class(random_rep(model, rng, max_dim, conjugate=False))


def _invariant_form(mats, rng: random.Random, m: int, transpose_first: bool) -> Mat:
    # average of P^T S P (or P S P^T) over the listed matrices, S random symmetric
    S0 = [[Rat(0)] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            S0[i][j] = S0[j][i] = rand_rat(rng, zero_bias=0.5)
    S0 = Mat(S0, m)
    total = None
    for g in mats:
        t = g.T @ S0 @ g if transpose_first else g @ S0 @ g.T
        total = t if total is None else total + t
    return total.scale(Rat(1, len(mats)))


def random_symplectomorphism(ps: PolarizedSpace, rng: random.Random) -> Mat:
    """Random equivariant linear symplectomorphism of a cotangent space ``E + E*``.

    A product of ``diag(P, P^-T)`` for an invertible intertwiner ``P`` and two
    shears by invariant symmetric maps ``E -> E*`` and ``E* -> E``.  Needs a
    model where averaging is a finite sum.
    """
    V = ps.space
    e = V.dim // 2
    if e == 0:
        return Mat.identity(0)
    act = V.action
    rho = act.restrict(ps.P)
    mats = group_matrices(rho)
    P = None
    for _ in range(20):
        raw = Mat([[rand_rat(rng) for _ in range(e)] for _ in range(e)], e)
        cand = reynolds(rho, raw)
        if cand.det() != 0:
            P = cand
            break
    if P is None:
        P = Mat.identity(e)
    I = Mat.identity(e)
    Z = Mat.zeros(e, e)
    diag = block_diag(P, P.inverse().T)
    # rho^T S rho = S makes x -> (x, S x) equivariant into the contragredient
    S = _invariant_form(mats, rng, e, transpose_first=True)
    Sp = _invariant_form(mats, rng, e, transpose_first=False)
    lower = Mat([list(a) + list(b) for a, b in zip(I.entries, Z.entries)]
                + [list(a) + list(b) for a, b in zip(S.entries, I.entries)], 2 * e)
    upper = Mat([list(a) + list(b) for a, b in zip(I.entries, Sp.entries)]
                + [list(a) + list(b) for a, b in zip(Z.entries, I.entries)], 2 * e)
    T = upper @ lower @ diag
    if T.T @ V.omega @ T != V.omega:
        raise AssertionError("random symplectomorphism is not symplectic")
    return T
