"""Group models acting on rational vector spaces, and iso classes of G-spaces.

Three models are supported:

* the trivial group,
* finite matrix groups, given by generators and closed by breadth-first search,
* the circle group, given by an infinitesimal generator ``A`` whose weights are
  nonnegative integers.

Matrices act on column vectors.  Subspaces are spanned by row vectors, so the
image of a subspace with basis ``B`` under ``g`` is spanned by the rows of
``B g^T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence, Union

from .linalg import (
    Mat,
    Rat,
    Subspace,
    block_diag,
    complement_extend,
    intersect,
    kernel,
    rat_to_str,
    solve_left,
    sum_spaces,
    vstack,
)

if TYPE_CHECKING:
    from .symplectic import SympGSpace

DEFAULT_ORDER_CAP = 10_000


class GroupError(ValueError):
    """Invalid group data, non-invariant subspace, or model mismatch."""


class UnsupportedModel(GroupError):
    pass


# --------------------------------------------------------------------------
# groups


class TrivialGroup:
    kind = "trivial"

    def __eq__(self, other):
        return isinstance(other, TrivialGroup)

    def __hash__(self):
        return hash("trivial")

    def __repr__(self):
        return "TrivialGroup()"

    def zero_class(self) -> "TrivialDim":
        return TrivialDim(0)

    def to_json(self) -> dict:
        return {"kind": "trivial"}


class CircleGroup:
    kind = "circle"

    def __eq__(self, other):
        return isinstance(other, CircleGroup)

    def __hash__(self):
        return hash("circle")

    def __repr__(self):
        return "CircleGroup()"

    def zero_class(self) -> "CircleWeights":
        return CircleWeights(())

    def to_json(self) -> dict:
        return {"kind": "circle"}


TRIVIAL = TrivialGroup()
CIRCLE = CircleGroup()


class FiniteGroup:
    """A finite group, realised by the faithful matrices it was closed from.

    ``elements[0]`` is the identity; ``table[i][j]`` is the index of
    ``elements[i] @ elements[j]``; ``words[i]`` lists generator positions whose
    ordered product is element ``i``.
    """

    kind = "finite"

    def __init__(self, generators: Sequence[Mat], cap: int = DEFAULT_ORDER_CAP):
        gens = [g if isinstance(g, Mat) else Mat(g) for g in generators]
        if not gens:
            raise GroupError("a finite group needs at least one generator")
        n = gens[0].rows
        for g in gens:
            if g.shape != (n, n):
                raise GroupError("generators must be square of a common size")
            if n and g.det() == 0:
                raise GroupError("generator is not invertible")
        ident = Mat.identity(n)
        elements = [ident]
        words: list[tuple[int, ...]] = [()]
        index = {ident: 0}
        frontier = 0
        while frontier < len(elements):
            x = elements[frontier]
            for k, g in enumerate(gens):
                y = x @ g
                if y not in index:
                    if len(elements) >= cap:
                        raise GroupError(f"group closure exceeds cap of {cap} elements")
                    index[y] = len(elements)
                    elements.append(y)
                    words.append(words[frontier] + (k,))
            frontier += 1
        self.generators = tuple(gens)
        self.elements = tuple(elements)
        self.words = tuple(words)
        self.order = len(elements)
        self.gen_index = tuple(index[g] for g in gens)
        self.table = tuple(tuple(index[a @ b] for b in elements) for a in elements)
        self.inverse = tuple(row.index(0) for row in self.table)

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and (
            self is other or (self.table == other.table and self.gen_index == other.gen_index)
        )

    def __hash__(self):
        return hash((self.order, self.gen_index))

    def __repr__(self):
        return f"FiniteGroup(order={self.order}, generators={len(self.generators)})"

    def zero_class(self) -> "FiniteChar":
        return FiniteChar(self, (Rat(0),) * self.order)

    def defining_action(self) -> "FiniteAction":
        return FiniteAction(self, self.elements)

    def represent(self, images: Sequence[Mat], dim: int | None = None) -> "FiniteAction":
        """The action sending generator ``k`` to ``images[k]``; checked to be a homomorphism."""
        images = [m if isinstance(m, Mat) else Mat(m) for m in images]
        if len(images) != len(self.generators):
            raise GroupError("need one image per generator")
        if dim is None:
            dim = images[0].rows
        for m in images:
            if m.shape != (dim, dim):
                raise GroupError("generator images must be square of a common size")
        mats = []
        for w in self.words:
            m = Mat.identity(dim)
            for k in w:
                m = m @ images[k]
            mats.append(m)
        return FiniteAction(self, tuple(mats))

    def to_json(self) -> dict:
        return {"kind": "finite", "generators": [g.to_json() for g in self.generators]}


def close_group(generators: Sequence[Mat], cap: int = DEFAULT_ORDER_CAP) -> "FiniteAction":
    """Close a set of invertible matrices into a finite group acting by itself."""
    return FiniteGroup(generators, cap).defining_action()


Group = Union[TrivialGroup, FiniteGroup, CircleGroup]


# --------------------------------------------------------------------------
# isomorphism classes


@dataclass(frozen=True)
class TrivialDim:
    dim: int

    model = "trivial"

    def __add__(self, other):
        _same_model(self, other)
        return TrivialDim(self.dim + other.dim)

    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def total_dim(self) -> int:
        return self.dim

    def to_json(self) -> dict:
        return {"trivial_dim": self.dim}


@dataclass(frozen=True)
class FiniteChar:
    group: FiniteGroup = field(repr=False)
    values: tuple

    model = "finite"

    def __post_init__(self):
        if len(self.values) != self.group.order:
            raise GroupError("character length differs from group order")
        d = self.values[0]
        if d < 0 or Rat(d).denominator != 1:
            raise GroupError("character value at the identity must be a nonnegative integer")

    def __add__(self, other):
        _same_model(self, other)
        return FiniteChar(self.group, tuple(a + b for a, b in zip(self.values, other.values)))

    def is_zero(self) -> bool:
        return not any(self.values)

    @property
    def total_dim(self) -> int:
        return int(self.values[0])

    def to_json(self) -> dict:
        return {"character": [rat_to_str(Rat(v)) for v in self.values]}


@dataclass(frozen=True)
class CircleWeights:
    """Multiplicities ``n_k`` of the weight-``k`` blocks, as sorted ``(k, n_k)`` pairs with ``n_k > 0``."""

    mults: tuple

    model = "circle"

    def __post_init__(self):
        clean = tuple(sorted((int(k), int(n)) for k, n in dict(self.mults).items() if n))
        if any(k < 0 or n < 0 for k, n in clean):
            raise GroupError("weights and multiplicities must be nonnegative")
        object.__setattr__(self, "mults", clean)

    @classmethod
    def of(cls, mapping: dict) -> "CircleWeights":
        return cls(tuple(mapping.items()))

    def as_dict(self) -> dict:
        return dict(self.mults)

    def __add__(self, other):
        _same_model(self, other)
        d = self.as_dict()
        for k, n in other.mults:
            d[k] = d.get(k, 0) + n
        return CircleWeights.of(d)

    def is_zero(self) -> bool:
        return not self.mults

    @property
    def total_dim(self) -> int:
        return sum(n if k == 0 else 2 * n for k, n in self.mults)

    def to_json(self) -> dict:
        return {"weights": {str(k): n for k, n in self.mults}}


IsoClass = Union[TrivialDim, FiniteChar, CircleWeights]


def _same_model(a, b) -> None:
    if type(a) is not type(b):
        raise GroupError(f"group model mismatch: {a.model} vs {getattr(b, 'model', type(b).__name__)}")
    if isinstance(a, FiniteChar) and a.group != b.group:
        raise GroupError("characters of different finite groups")


def class_add(a: IsoClass, b: IsoClass) -> IsoClass:
    return a + b


def class_equal(a: IsoClass, b: IsoClass) -> bool:
    _same_model(a, b)
    return a == b


def class_is_zero(a: IsoClass) -> bool:
    return a.is_zero()


def class_sum(classes, zero: IsoClass) -> IsoClass:
    out = zero
    for c in classes:
        out = out + c
    return out


# --------------------------------------------------------------------------
# actions


def _image_rows(basis: Mat, g: Mat) -> Mat:
    return basis @ g.T


def _restricted(S: Subspace, g: Mat) -> Mat:
    """Matrix of ``g`` on S in the coordinates of S's canonical basis (column convention)."""
    moved = _image_rows(S.basis, g)
    # canonical basis has identity at the pivot columns, so coordinates are read off there
    return moved.submatrix(None, S.pivots).T


@dataclass(frozen=True)
class TrivialAction:
    dim: int

    group = TRIVIAL

    def is_invariant(self, S: Subspace) -> bool:
        _check_dim(self, S)
        return True

    def iso_class(self, S: Subspace) -> TrivialDim:
        _check_dim(self, S)
        return TrivialDim(S.dim)

    def restrict(self, S: Subspace) -> "TrivialAction":
        return TrivialAction(S.dim)

    def direct_sum(self, other: "TrivialAction") -> "TrivialAction":
        _check_group(self, other)
        return TrivialAction(self.dim + other.dim)

    def contragredient(self) -> "TrivialAction":
        return self

    def preserves(self, omega: Mat) -> bool:
        return True

    def conjugate(self, P: Mat) -> "TrivialAction":
        return self

    def generator_mats(self) -> tuple:
        return ()

    def to_json(self):
        return None


@dataclass(frozen=True)
class FiniteAction:
    group: FiniteGroup = field(repr=False)
    matrices: tuple

    @classmethod
    def _trusted(cls, group: FiniteGroup, matrices: tuple) -> "FiniteAction":
        # for actions derived from validated ones (sums, restrictions, duals, conjugates)
        a = object.__new__(cls)
        object.__setattr__(a, "group", group)
        object.__setattr__(a, "matrices", tuple(matrices))
        return a

    def __post_init__(self):
        mats = tuple(m if isinstance(m, Mat) else Mat(m) for m in self.matrices)
        object.__setattr__(self, "matrices", mats)
        if len(mats) != self.group.order:
            raise GroupError("need one matrix per group element")
        n = mats[0].rows
        if any(m.shape != (n, n) for m in mats):
            raise GroupError("action matrices must be square of a common size")
        if mats[0] != Mat.identity(n):
            raise GroupError("identity element must act as the identity")
        table = self.group.table
        for x in range(self.group.order):
            for gi in self.group.gen_index:
                if mats[x] @ mats[gi] != mats[table[x][gi]]:
                    raise GroupError("matrices do not form a representation of the group")

    @property
    def dim(self) -> int:
        return self.matrices[0].rows

    def generator_mats(self) -> tuple:
        return tuple(self.matrices[i] for i in self.group.gen_index)

    def is_invariant(self, S: Subspace) -> bool:
        _check_dim(self, S)
        if S.dim in (0, S.ambient_dim):
            return True
        return all(
            all(S.contains(v) for v in _image_rows(S.basis, g).entries) for g in self.generator_mats()
        )

    def iso_class(self, S: Subspace) -> FiniteChar:
        _require_invariant(self, S)
        if S.dim == 0:
            return self.group.zero_class()
        return FiniteChar(self.group, tuple(_restricted(S, g).trace() for g in self.matrices))

    def restrict(self, S: Subspace) -> "FiniteAction":
        _require_invariant(self, S)
        if S.dim == 0:
            return FiniteAction._trusted(self.group, (Mat.identity(0),) * self.group.order)
        return FiniteAction._trusted(self.group, tuple(_restricted(S, g) for g in self.matrices))

    def direct_sum(self, other: "FiniteAction") -> "FiniteAction":
        _check_group(self, other)
        return FiniteAction._trusted(self.group, tuple(block_diag(a, b) for a, b in zip(self.matrices, other.matrices)))

    def contragredient(self) -> "FiniteAction":
        inv = self.group.inverse
        return FiniteAction._trusted(self.group, tuple(self.matrices[inv[i]].T for i in range(self.group.order)))

    def preserves(self, omega: Mat) -> bool:
        return all(g.T @ omega @ g == omega for g in self.generator_mats())

    def conjugate(self, P: Mat) -> "FiniteAction":
        """The action ``P g P^-1`` on the target of the change of coordinates ``P``."""
        Pi = P.inverse()
        return FiniteAction._trusted(self.group, tuple(P @ g @ Pi for g in self.matrices))

    def to_json(self):
        return [g.to_json() for g in self.generator_mats()]


def circle_weights_of(A: Mat) -> tuple:
    """Validate a circle generator and return its weight set, ascending.

    ``A`` is valid when Q^n splits as ``ker A`` plus the kernels of
    ``A^2 + k^2`` over positive integers k.  Since ``-tr(A^2)/2`` is the sum
    of ``k^2`` with multiplicity, it bounds the candidate weights.
    """
    n = A.rows
    if A.shape != (n, n):
        raise GroupError("circle generator must be square")
    if n == 0:
        return ()
    A2 = A @ A
    s = -A2.trace() / 2
    if s < 0:
        raise GroupError("circle generator has a real nonzero eigenvalue")
    kmax = math.isqrt(math.floor(s))
    total = kernel(A).dim
    weights = [0] if total else []
    for k in range(1, kmax + 1):
        d = kernel(A2 + Mat.scalar(n, k * k)).dim
        if d:
            weights.append(k)
            total += d
    if total != n:
        raise GroupError("circle generator is not semisimple with integer weights")
    return tuple(weights)


@dataclass(frozen=True)
class CircleAction:
    generator: Mat
    weights: tuple = field(default=None, compare=False)

    group = CIRCLE

    def __post_init__(self):
        g = self.generator if isinstance(self.generator, Mat) else Mat(self.generator)
        object.__setattr__(self, "generator", g)
        if self.weights is None:
            object.__setattr__(self, "weights", circle_weights_of(g))

    @property
    def dim(self) -> int:
        return self.generator.rows

    def generator_mats(self) -> tuple:
        return (self.generator,)

    def is_invariant(self, S: Subspace) -> bool:
        _check_dim(self, S)
        return all(S.contains(v) for v in _image_rows(S.basis, self.generator).entries)

    def iso_class(self, S: Subspace) -> CircleWeights:
        _require_invariant(self, S)
        if S.dim == 0:
            return CircleWeights(())
        B = _restricted(S, self.generator)
        d = S.dim
        mults = {}
        for k in self.weights:
            if k == 0:
                mults[0] = kernel(B).dim
            else:
                dk = kernel(B @ B + Mat.scalar(d, k * k)).dim
                mults[k] = dk // 2
        return CircleWeights.of(mults)

    def restrict(self, S: Subspace) -> "CircleAction":
        _require_invariant(self, S)
        if S.dim == 0:
            return CircleAction(Mat.zeros(0, 0), ())
        return CircleAction(_restricted(S, self.generator))

    def direct_sum(self, other: "CircleAction") -> "CircleAction":
        _check_group(self, other)
        w = tuple(sorted(set(self.weights) | set(other.weights)))
        return CircleAction(block_diag(self.generator, other.generator), w)

    def contragredient(self) -> "CircleAction":
        return CircleAction(-self.generator.T, self.weights)

    def preserves(self, omega: Mat) -> bool:
        A = self.generator
        return (A.T @ omega + omega @ A).is_zero()

    def conjugate(self, P: Mat) -> "CircleAction":
        return CircleAction(P @ self.generator @ P.inverse(), self.weights)

    def to_json(self):
        return self.generator.to_json()


Action = Union[TrivialAction, FiniteAction, CircleAction]


def _check_dim(action, S: Subspace) -> None:
    if S.ambient_dim != action.dim:
        raise GroupError(f"subspace of ambient {S.ambient_dim} vs action of dimension {action.dim}")


def _check_group(a, b) -> None:
    if a.group != b.group:
        raise GroupError(f"group model mismatch: {a.group!r} vs {b.group!r}")


def _require_invariant(action, S: Subspace) -> None:
    if not action.is_invariant(S):
        raise GroupError("subspace is not invariant")


def is_invariant(action: Action, S: Subspace) -> bool:
    return action.is_invariant(S)


def iso_class(action: Action, S: Subspace) -> IsoClass:
    return action.iso_class(S)


def full_class(action: Action) -> IsoClass:
    return action.iso_class(Subspace.full(action.dim))


def translate(action: Action, S: Subspace, element: int) -> Subspace:
    """``g . S`` for the group element at position ``element`` (finite model)."""
    if isinstance(action, FiniteAction):
        return S.image(action.matrices[element])
    return S


def group_matrices(action: Action) -> tuple:
    """All group elements as matrices, for the models where averaging is a finite sum."""
    if isinstance(action, TrivialAction):
        return (Mat.identity(action.dim),)
    if isinstance(action, FiniteAction):
        return action.matrices
    raise UnsupportedModel("group averaging is only available for trivial and finite groups")


# --------------------------------------------------------------------------
# invariant complements by averaging


def _action_of(V) -> Action:
    return V.action if hasattr(V, "action") else V


def _average_complement(action: Action, L: Subspace, start: Subspace, outer: Subspace) -> Subspace:
    """Average the complements ``g . start`` of ``L`` in ``outer``, viewed as graphs of maps ``start -> L``."""
    mats = group_matrices(action)
    if L.dim == 0 or start.dim == 0:
        # the only complement is outer itself / start has nothing to move
        return outer if L.dim == 0 else start
    frame = vstack(L.basis, start.basis)
    l = L.dim
    total = None
    for g in mats:
        moved = _image_rows(start.basis, g)
        coef = solve_left(frame, moved)
        CL = coef.submatrix(None, range(l))
        CM = coef.submatrix(None, range(l, coef.cols))
        lam = CM.inverse() @ CL
        total = lam if total is None else total + lam
    avg = total.scale(Rat(1, len(mats)))
    rows = avg @ L.basis + start.basis
    return Subspace(outer.ambient_dim, rows.entries)


def invariant_complement(V, L: Subspace, J: Subspace | None = None, *, within: Subspace | None = None,
                         start: Subspace | None = None) -> Subspace:
    """An invariant ``M`` with ``L (+) M = within`` (default: the whole space) and ``J <= M``.

    ``V`` is a symplectic G-space or a bare action.  Requires ``L`` and ``J``
    invariant with ``L & J = 0``.  ``start`` optionally supplies the initial,
    possibly non-invariant, complement containing ``J``.
    """
    action = _action_of(V)
    n = action.dim
    outer = Subspace.full(n) if within is None else within
    J = Subspace.zero(n) if J is None else J
    if not (outer.contains_space(L) and outer.contains_space(J)):
        raise GroupError("L and J must lie in the enclosing space")
    for name, S in (("L", L), ("J", J), ("enclosing space", outer)):
        if not action.is_invariant(S):
            raise GroupError(f"{name} is not invariant")
    if intersect(L, J).dim:
        raise GroupError("L and J must intersect trivially")
    if start is None:
        LJ = sum_spaces(L, J)
        start = sum_spaces(J, complement_extend(LJ, outer))
    else:
        if not start.contains_space(J) or intersect(start, L).dim or start.dim + L.dim != outer.dim:
            raise GroupError("start is not a complement to L containing J")
    return _average_complement(action, L, start, outer)


def lagrangian_complement(V: "SympGSpace", L: Subspace) -> tuple[Mat, Mat]:
    """A Lagrangian complement to the Lagrangian ``L``, returned as dual bases.

    Returns ``(Lb, Mb)`` with ``Lb`` the canonical basis of ``L`` and ``Mb``
    spanning an isotropic complement with ``omega(Lb[i], Mb[j]) = delta_ij``.
    No invariance is claimed.
    """
    om = V.omega
    W = complement_extend(L, Subspace.full(V.dim))
    Lb = L.basis
    G = Lb @ om @ W.basis.T
    Wt = G.inverse().T @ W.basis
    S = Wt @ om @ Wt.T
    Mb = Wt - S.scale(Rat(1, 2)) @ Lb
    return Lb, Mb


def invariant_lagrangian_complement(V: "SympGSpace", L: Subspace, J: Subspace | None = None) -> Subspace:
    """An invariant Lagrangian complement ``M`` to the invariant Lagrangian ``L`` with ``J <= M``.

    ``J`` is invariant isotropic with ``L & J = 0``.  A Lagrangian complement
    containing ``J`` is built by extending the symmetric partial map that
    ``J`` defines, then made invariant by averaging.
    """
    from .symplectic import classify

    n = V.dim
    J = Subspace.zero(n) if J is None else J
    group_matrices(V.action)
    if not classify(V, L).lagrangian:
        raise GroupError("L is not Lagrangian")
    if not classify(V, J).isotropic:
        raise GroupError("J is not isotropic")
    if not (V.action.is_invariant(L) and V.action.is_invariant(J)):
        raise GroupError("L and J must be invariant")
    if intersect(L, J).dim:
        raise GroupError("L and J must intersect trivially")
    om = V.omega
    Lb, Mb = lagrangian_complement(V, L)
    m = L.dim
    if J.dim:
        # j = sum a_i l_i + sum b_k m_k, read off through the pairing
        a = J.basis @ om @ Mb.T
        b = -(J.basis @ om @ Lb.T)
        D = Subspace(m, b.entries)
        Wd = complement_extend(D, Subspace.full(m))
        P = vstack(b, Wd.basis)
        p = J.dim
        bhat = [[Rat(0)] * m for _ in range(m)]
        ab = a @ b.T
        aw = a @ Wd.basis.T
        for s in range(p):
            for t in range(p):
                bhat[s][t] = ab[s, t]
            for t in range(Wd.dim):
                bhat[s][p + t] = aw[s, t]
                bhat[p + t][s] = aw[s, t]
        Pi = P.inverse()
        sym = Pi @ Mat(bhat, m) @ Pi.T
        start_rows = Mb + sym @ Lb
    else:
        start_rows = Mb
    start = Subspace(n, start_rows.entries)
    return invariant_complement(V, L, J, start=start)


def reynolds(action: Action, m: Mat) -> Mat:
    """Average ``g m g^-1`` over the group: an equivariant endomorphism."""
    mats = group_matrices(action)
    total = None
    for g in mats:
        t = g @ m @ g.inverse()
        total = t if total is None else total + t
    return total.scale(Rat(1, len(mats)))
