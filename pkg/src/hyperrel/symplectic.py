"""Symplectic G-spaces and the classification of their subspaces."""

from __future__ import annotations

from dataclasses import dataclass

from .grouprep import Action, TrivialAction, GroupError
from .linalg import Mat, Rat, Subspace, block_diag, intersect, kernel


class SymplecticError(ValueError):
    pass


def standard_omega(n: int) -> Mat:
    """``[[0, I_n], [-I_n, 0]]``."""
    rows = []
    for i in range(2 * n):
        r = [0] * (2 * n)
        if i < n:
            r[n + i] = 1
        else:
            r[i - n] = -1
        rows.append(r)
    return Mat(rows, 2 * n)


@dataclass(frozen=True)
class SympGSpace:
    """A rational symplectic vector space with a symplectic linear group action."""

    dim: int
    omega: Mat
    action: Action

    @classmethod
    def _trusted(cls, dim: int, omega: Mat, action: Action) -> "SympGSpace":
        # products and duals of validated spaces are valid by construction
        v = object.__new__(cls)
        object.__setattr__(v, "dim", dim)
        object.__setattr__(v, "omega", omega)
        object.__setattr__(v, "action", action)
        return v

    def __post_init__(self):
        om = self.omega
        if om.shape != (self.dim, self.dim):
            raise SymplecticError("omega has the wrong shape")
        if self.dim % 2:
            raise SymplecticError("symplectic spaces are even-dimensional")
        if om.T != -om:
            raise SymplecticError("omega is not antisymmetric")
        if self.dim and om.det() == 0:
            raise SymplecticError("omega is degenerate")
        if self.action.dim != self.dim:
            raise SymplecticError(f"action of dimension {self.action.dim} on a space of dimension {self.dim}")
        if not self.action.preserves(om):
            raise SymplecticError("group action is not symplectic")

    @property
    def group(self):
        return self.action.group

    def form(self, u, v) -> Rat:
        return sum((a * b for a, b in zip(u, self.omega.apply(v))), Rat(0))

    def __repr__(self):
        return f"SympGSpace(dim={self.dim}, group={self.group!r})"


def standard_space(n: int, action: Action | None = None) -> SympGSpace:
    action = TrivialAction(2 * n) if action is None else action
    if action.dim != 2 * n:
        raise SymplecticError(f"action dimension {action.dim} does not match 2n = {2 * n}")
    return SympGSpace(2 * n, standard_omega(n), action)


def unit_space(group_action_like: Action | None = None) -> SympGSpace:
    """The zero-dimensional space **1** for the given model (taken from any action of it)."""
    from .grouprep import FiniteAction, CircleAction

    a = group_action_like
    if a is None or isinstance(a, TrivialAction):
        act = TrivialAction(0)
    elif isinstance(a, FiniteAction):
        act = FiniteAction(a.group, (Mat.identity(0),) * a.group.order)
    elif isinstance(a, CircleAction):
        act = CircleAction(Mat.zeros(0, 0), ())
    else:
        raise GroupError(f"unknown action {a!r}")
    return SympGSpace(0, Mat.zeros(0, 0), act)


def cotangent_space(rep: Action) -> SympGSpace:
    """``E (+) E*`` with the canonical pairing form and the contragredient action on ``E*``."""
    e = rep.dim
    return SympGSpace(2 * e, standard_omega(e), rep.direct_sum(rep.contragredient()))


def _check(V: SympGSpace, S: Subspace) -> None:
    if S.ambient_dim != V.dim:
        raise SymplecticError(f"subspace of ambient {S.ambient_dim} in a space of dimension {V.dim}")


def symp_orthogonal(V: SympGSpace, S: Subspace) -> Subspace:
    """``{v : omega(s, v) = 0 for all s in S}``."""
    _check(V, S)
    if S.dim == 0:
        return Subspace.full(V.dim)
    return kernel(S.basis @ V.omega)


@dataclass(frozen=True)
class SubspaceKind:
    isotropic: bool
    coisotropic: bool
    lagrangian: bool
    symplectic: bool


def classify(V: SympGSpace, S: Subspace) -> SubspaceKind:
    _check(V, S)
    perp = symp_orthogonal(V, S)
    iso = perp.contains_space(S)
    coiso = S.contains_space(perp)
    return SubspaceKind(
        isotropic=iso,
        coisotropic=coiso,
        lagrangian=iso and coiso,
        symplectic=intersect(S, perp).dim == 0,
    )


def is_lagrangian(V: SympGSpace, S: Subspace) -> bool:
    """Cheap test: isotropic and half-dimensional."""
    _check(V, S)
    if 2 * S.dim != V.dim:
        return False
    B = S.basis
    return (B @ V.omega @ B.T).is_zero()


def dual(V: SympGSpace) -> SympGSpace:
    return SympGSpace._trusted(V.dim, -V.omega, V.action)


def product(*spaces: SympGSpace) -> SympGSpace:
    """Cartesian product; coordinates are concatenated in argument order."""
    if not spaces:
        raise SymplecticError("product of no spaces: use unit_space")
    first = spaces[0]
    action = first.action
    for s in spaces[1:]:
        action = action.direct_sum(s.action)
    omega = block_diag(*(s.omega for s in spaces))
    return SympGSpace._trusted(sum(s.dim for s in spaces), omega, action)
