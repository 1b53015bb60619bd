"""Equivariant linear canonical relations ``X <- Y``.

A relation is stored as a Lagrangian subspace of ``X x Ybar`` with the
X-coordinates first.  Coordinate conventions used throughout:

* ``compose_set(f, g)`` for ``f: X <- Y`` and ``g: Y <- Z`` works in
  ``X x Ybar x Y x Zbar`` and the diagonal pairs coordinate ``nx + i`` with
  ``nx + ny + i``;
* ``product_rel(f, g)`` has coordinate blocks ``(X1, X2, Y1, Y2)``;
* ``delta(X)`` and ``epsilon(X)`` are the diagonal ``{(x, x)}`` in
  ``X x Xbar``, read as ``X x Xbar <- 1`` and ``1 <- X x Xbar``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .grouprep import IsoClass
from .linalg import Mat, Rat, Subspace, direct_product, intersect, kernel, project, sum_spaces
from .symplectic import SympGSpace, dual, is_lagrangian, product, unit_space

_ZERO = Rat(0)
_ONE = Rat(1)


class RelationError(ValueError):
    """Invalid relation data (not Lagrangian, not invariant, wrong shape)."""


class CompositionError(ValueError):
    """Relations that cannot be composed, or spaces of different group models."""


@dataclass(frozen=True)
class CanRel:
    """``source <- target``: an invariant Lagrangian ``sub`` of ``source x dual(target)``."""

    source: SympGSpace
    target: SympGSpace
    sub: Subspace
    ambient: SympGSpace = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        X, Y, S = self.source, self.target, self.sub
        if X.group != Y.group:
            raise CompositionError("source and target carry different group models")
        if S.ambient_dim != X.dim + Y.dim:
            raise RelationError(f"subspace of ambient {S.ambient_dim}, expected {X.dim + Y.dim}")
        amb = product(X, dual(Y))
        object.__setattr__(self, "ambient", amb)
        if not is_lagrangian(amb, S):
            raise RelationError("not Lagrangian")
        if not amb.action.is_invariant(S):
            raise RelationError("not invariant")

    @property
    def nx(self) -> int:
        return self.source.dim

    @property
    def ny(self) -> int:
        return self.target.dim

    def __repr__(self):
        return f"CanRel({self.nx} <- {self.ny}, basis={self.sub.basis.to_json()})"


def make_relation(X: SympGSpace, Y: SympGSpace, basis) -> CanRel:
    sub = basis if isinstance(basis, Subspace) else Subspace(X.dim + Y.dim, basis)
    return CanRel(X, Y, sub)


def identity(X: SympGSpace) -> CanRel:
    n = X.dim
    rows = [[_ONE if j in (i, n + i) else _ZERO for j in range(2 * n)] for i in range(n)]
    return CanRel(X, X, Subspace(2 * n, rows))


def lagrangian_insertion(X: SympGSpace, L: Subspace) -> CanRel:
    """``L`` viewed as a morphism ``X <- 1``."""
    return CanRel(X, unit_space(X.action), L)


def transpose(f: CanRel) -> CanRel:
    nx, ny = f.nx, f.ny
    return CanRel(f.target, f.source, project(f.sub, list(range(nx, nx + ny)) + list(range(nx))))


def _check_composable(f: CanRel, g: CanRel) -> None:
    if f.target != g.source:
        raise CompositionError(
            f"cannot compose: target of left factor ({f.ny}-dim) differs from source of right factor ({g.nx}-dim)"
        )


def compose_set(f: CanRel, g: CanRel) -> CanRel:
    """Set-theoretic composite ``{(x, z) : (x, y) in f, (y, z) in g for some y}``."""
    _check_composable(f, g)
    nx, ny, nz = f.nx, f.ny, g.ny
    F, G = f.sub.basis, g.sub.basis
    p = F.rows
    # coefficient vectors (alpha, beta) with alpha F_y = beta G_y
    constraint = [
        [F[i, nx + c] for i in range(p)] + [-G[k, c] for k in range(G.rows)] for c in range(ny)
    ]
    ker = kernel(Mat(constraint, p + G.rows)) if ny else Subspace.full(p + G.rows)
    rows = []
    for v in ker.basis.entries:
        a, b = v[:p], v[p:]
        x = [sum((a[i] * F[i, j] for i in range(p) if a[i]), _ZERO) for j in range(nx)]
        z = [sum((b[k] * G[k, ny + j] for k in range(G.rows) if b[k]), _ZERO) for j in range(nz)]
        rows.append(x + z)
    return CanRel(f.source, g.target, Subspace(nx + nz, rows))


def _fibre_at_zero(rel: CanRel, zero_side: str) -> Subspace:
    """``{y : (0, y) in rel}`` (zero_side='source') or ``{x : (x, 0) in rel}`` (zero_side='target')."""
    nx, ny = rel.nx, rel.ny
    if zero_side == "source":
        keep, amb = list(range(nx, nx + ny)), ny
    else:
        keep, amb = list(range(nx)), nx
    cut = Subspace.coordinate(nx + ny, keep)
    return project(intersect(rel.sub, cut), keep) if rel.sub.dim else Subspace.zero(amb)


def excess_space(f: CanRel, g: CanRel) -> Subspace:
    """Trajectories to 0 from 0: ``{q in Y : (0, q) in f and (q, 0) in g}``."""
    _check_composable(f, g)
    return intersect(_fibre_at_zero(f, "source"), _fibre_at_zero(g, "target"))


def pair_excess(f: CanRel, g: CanRel) -> IsoClass:
    return f.target.action.iso_class(excess_space(f, g))


def _big_product(f: CanRel, g: CanRel) -> Subspace:
    return direct_product(f.sub, g.sub)


def _diagonal_rows(total: int, off_a: int, off_b: int, n: int) -> list:
    rows = []
    for i in range(n):
        r = [_ZERO] * total
        r[off_a + i] = _ONE
        r[off_b + i] = _ONE
        rows.append(r)
    return rows


def transversal(f: CanRel, g: CanRel) -> bool:
    """Rank test: ``(f x g) + (X x Delta_Y x Zbar)`` is the whole of ``X x Ybar x Y x Zbar``."""
    _check_composable(f, g)
    nx, ny, nz = f.nx, f.ny, g.ny
    total = nx + 2 * ny + nz
    coords = [i for i in range(nx)] + [nx + 2 * ny + i for i in range(nz)]
    C = Subspace(total, _diagonal_rows(total, nx, nx + ny, ny) + [
        [_ONE if j == i else _ZERO for j in range(total)] for i in coords
    ])
    return sum_spaces(_big_product(f, g), C).dim == total


def injective_over_zero(f: CanRel, g: CanRel) -> bool:
    """``(f x g) & ({0} x Delta_Y x {0}) = {0}`` computed in the full four-block space."""
    _check_composable(f, g)
    nx, ny, nz = f.nx, f.ny, g.ny
    total = nx + 2 * ny + nz
    D = Subspace(total, _diagonal_rows(total, nx, nx + ny, ny))
    return intersect(_big_product(f, g), D).dim == 0


def is_congenial(f: CanRel, g: CanRel) -> bool:
    """Zero excess; cross-checked against the transversality rank condition."""
    by_excess = pair_excess(f, g).is_zero()
    if by_excess != transversal(f, g):
        raise AssertionError("excess and transversality disagree on congeniality")
    return by_excess


def is_single_valued(f: CanRel) -> bool:
    return _fibre_at_zero(f, "target").dim == 0


def is_injective(f: CanRel) -> bool:
    return _fibre_at_zero(f, "source").dim == 0


def is_surjective(f: CanRel) -> bool:
    return project(f.sub, range(f.nx)).dim == f.nx


def is_everywhere_defined(f: CanRel) -> bool:
    return project(f.sub, range(f.nx, f.nx + f.ny)).dim == f.ny


def is_reduction(f: CanRel) -> bool:
    return is_surjective(f) and is_single_valued(f)


def is_coreduction(f: CanRel) -> bool:
    return is_injective(f) and is_everywhere_defined(f)


def factor(f: CanRel) -> tuple[CanRel, CanRel]:
    """Split ``f`` as reduction ``r: X <- Q`` after coreduction ``c: Q <- Y``, ``Q = X x Ybar x Y``.

    ``c = {((x, y', y), y) : (x, y') in f}`` and ``r = {(x, (x, y, y))}``.
    """
    X, Y = f.source, f.target
    nx, ny = X.dim, Y.dim
    Q = product(X, dual(Y), Y)
    nq = nx + 2 * ny
    c_rows = [list(v) + [_ZERO] * (2 * ny) for v in f.sub.basis.entries]
    for i in range(ny):
        r = [_ZERO] * (nq + ny)
        r[nx + ny + i] = _ONE
        r[nq + i] = _ONE
        c_rows.append(r)
    c = CanRel(Q, Y, Subspace(nq + ny, c_rows))
    r_rows = []
    for i in range(nx):
        r = [_ZERO] * (nx + nq)
        r[i] = _ONE
        r[nx + i] = _ONE
        r_rows.append(r)
    for i in range(ny):
        r = [_ZERO] * (nx + nq)
        r[2 * nx + i] = _ONE
        r[2 * nx + ny + i] = _ONE
        r_rows.append(r)
    red = CanRel(X, Q, Subspace(nx + nq, r_rows))
    return red, c


def graph(f: CanRel) -> CanRel:
    """``f`` as a morphism ``X x Ybar <- 1``."""
    amb = f.ambient
    return CanRel(amb, unit_space(amb.action), f.sub)


def _diagonal(X: SympGSpace) -> Subspace:
    n = X.dim
    return Subspace(2 * n, _diagonal_rows(2 * n, 0, n, n))


def delta(X: SympGSpace) -> CanRel:
    """Unit ``X x Xbar <- 1``."""
    XX = product(X, dual(X))
    return CanRel(XX, unit_space(X.action), _diagonal(X))


def epsilon(X: SympGSpace) -> CanRel:
    """Counit ``1 <- X x Xbar``: the pairing of ``X`` with its dual, again the diagonal.

    This is the map the trace composes with ``graph(f): X x Xbar <- 1``.
    """
    XX = product(X, dual(X))
    return CanRel(unit_space(X.action), XX, _diagonal(X))


def product_rel(f: CanRel, g: CanRel) -> CanRel:
    """``f x g : X1 x X2 <- Y1 x Y2`` with blocks ordered ``(X1, X2, Y1, Y2)``."""
    if f.source.group != g.source.group:
        raise CompositionError("group model mismatch in product")
    x1, y1, x2, y2 = f.nx, f.ny, g.nx, g.ny
    total = x1 + x2 + y1 + y2
    rows = []
    for v in f.sub.basis.entries:
        rows.append(list(v[:x1]) + [_ZERO] * x2 + list(v[x1:]) + [_ZERO] * y2)
    for v in g.sub.basis.entries:
        rows.append([_ZERO] * x1 + list(v[:x2]) + [_ZERO] * y1 + list(v[x2:]))
    return CanRel(product(f.source, g.source), product(f.target, g.target), Subspace(total, rows))


def swap(X: SympGSpace, Y: SympGSpace) -> CanRel:
    """The symmetry ``Y x X <- X x Y``, ``(y, x) <- (x, y)``."""
    nx, ny = X.dim, Y.dim
    n = nx + ny
    rows = []
    for i in range(nx):
        r = [_ZERO] * (2 * n)
        r[ny + i] = _ONE
        r[n + i] = _ONE
        rows.append(r)
    for i in range(ny):
        r = [_ZERO] * (2 * n)
        r[i] = _ONE
        r[n + nx + i] = _ONE
        rows.append(r)
    return CanRel(product(Y, X), product(X, Y), Subspace(2 * n, rows))


def fixed_space(f: CanRel) -> Subspace:
    """``{x : (x, x) in f}`` for an endomorphism."""
    if f.source != f.target:
        raise CompositionError("fixed points need an endomorphism")
    n = f.nx
    return project(intersect(f.sub, _diagonal(f.source)), range(n))


def projection_relation(X: SympGSpace, C: Subspace) -> CanRel:
    """``{(c', c) : c, c' in C, c - c' in C^omega}`` for a coisotropic ``C``."""
    from .symplectic import symp_orthogonal

    perp = symp_orthogonal(X, C)
    n = X.dim
    rows = [list(v) + list(v) for v in C.basis.entries]
    rows += [list(k) + [_ZERO] * n for k in perp.basis.entries]
    return CanRel(X, X, Subspace(2 * n, rows))


def unit_relation(X: SympGSpace) -> CanRel:
    """The only morphism ``1 <- 1`` for the model of ``X``."""
    one = unit_space(X.action)
    return CanRel(one, one, Subspace.zero(0))

