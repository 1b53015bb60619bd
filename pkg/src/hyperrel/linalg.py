"""Exact dense linear algebra over the rationals.

Entries are exact rationals of type :data:`Rat`: ``gmpy2.mpq`` when gmpy2
is installed and :class:`fractions.Fraction` otherwise.  There is no floating
point anywhere.  Vectors are rows.  A :class:`Subspace` is stored by
its reduced row-echelon basis, so two subspaces are equal exactly when their
stored fields are equal.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover
    Rat = Fraction

_ZERO = Rat(0)
_ONE = Rat(1)


def rat(x) -> Rat:
    """Coerce ints, Fractions and ``"p/q"`` strings to a :data:`Rat`."""
    if isinstance(x, Rat):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use a string 'p/q' or int")
    if isinstance(x, Fraction):
        return Rat(x.numerator, x.denominator)
    return Rat(x)


def rat_to_str(x: Rat) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Mat:
    """Immutable rows x cols matrix of rationals.  Zero-sized shapes are legal."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, entries: Iterable[Iterable] = (), cols: int | None = None):
        data = tuple(tuple(rat(x) for x in row) for row in entries)
        if cols is None:
            if not data:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(data[0])
        for row in data:
            if len(row) != cols:
                raise ValueError("ragged matrix rows")
        self.rows = len(data)
        self.cols = cols
        self.entries = data
        self._hash = None

    @classmethod
    def _raw(cls, data: tuple, cols: int) -> "Mat":
        # trusted constructor: data is already a tuple of tuples of rationals
        m = object.__new__(cls)
        m.rows = len(data)
        m.cols = cols
        m.entries = data
        m._hash = None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls._raw(tuple((_ZERO,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls._raw(
            tuple(tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def scalar(cls, n: int, c) -> "Mat":
        c = rat(c)
        return cls._raw(tuple(tuple(c if i == j else _ZERO for j in range(n)) for i in range(n)), n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.cols == other.cols and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.cols, self.entries))
        return self._hash

    def __repr__(self):
        body = ", ".join("[" + ", ".join(rat_to_str(x) for x in r) + "]" for r in self.entries)
        return f"Mat({self.rows}x{self.cols}: [{body}])"

    @property
    def T(self) -> "Mat":
        if self.rows == 0:
            return Mat.zeros(self.cols, 0)
        return Mat._raw(tuple(zip(*self.entries)), self.rows)

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Mat._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
            self.cols,
        )

    def __neg__(self) -> "Mat":
        return Mat._raw(tuple(tuple(-a for a in r) for r in self.entries), self.cols)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def scale(self, c) -> "Mat":
        c = rat(c)
        return Mat._raw(tuple(tuple(c * a for a in r) for r in self.entries), self.cols)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ncols = other.cols
        sparse_rows = [[(j, b) for j, b in enumerate(r) if b] for r in other.entries]
        out = []
        for r in self.entries:
            acc = [_ZERO] * ncols
            for k, a in enumerate(r):
                if a:
                    for j, b in sparse_rows[k]:
                        acc[j] += a * b
            out.append(tuple(acc))
        return Mat._raw(tuple(out), ncols)

    def apply(self, v: Sequence) -> tuple:
        """Matrix times column vector ``v``."""
        nz = [(k, a) for k, a in enumerate(v) if a]
        return tuple(sum((r[k] * a for k, a in nz), _ZERO) for r in self.entries)

    def is_zero(self) -> bool:
        return all(not a for r in self.entries for a in r)

    def trace(self) -> Rat:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        return sum((self.entries[i][i] for i in range(self.rows)), _ZERO)

    def submatrix(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "Mat":
        rows = range(self.rows) if rows is None else rows
        cols = range(self.cols) if cols is None else list(cols)
        return Mat._raw(tuple(tuple(self.entries[i][j] for j in cols) for i in rows), len(cols))

    def rank(self) -> int:
        return len(_rref_rows([list(r) for r in self.entries], self.cols)[1])

    def det(self) -> Rat:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        m = [list(r) for r in self.entries]
        n = self.rows
        d = _ONE
        for c in range(n):
            p = next((i for i in range(c, n) if m[i][c]), None)
            if p is None:
                return _ZERO
            if p != c:
                m[c], m[p] = m[p], m[c]
                d = -d
            piv = m[c][c]
            d *= piv
            for i in range(c + 1, n):
                f = m[i][c]
                if f:
                    f /= piv
                    mi, mc = m[i], m[c]
                    for j in range(c, n):
                        if mc[j]:
                            mi[j] -= f * mc[j]
        return d

    def inverse(self) -> "Mat":
        n = self.rows
        if n != self.cols:
            raise ValueError("inverse of a non-square matrix")
        if n == 0:
            return self
        aug = [list(r) + [_ONE if i == j else _ZERO for j in range(n)] for i, r in enumerate(self.entries)]
        red, piv = _rref_rows(aug, 2 * n)
        if len(piv) < n or piv[n - 1] >= n:
            raise ZeroDivisionError("matrix is singular")
        return Mat._raw(tuple(tuple(r[n:]) for r in red[:n]), n)

    def to_json(self) -> list:
        return [[rat_to_str(x) for x in r] for r in self.entries]


def mat(rows, cols: int | None = None) -> Mat:
    return rows if isinstance(rows, Mat) else Mat(rows, cols)


def hstack(*ms: Mat) -> Mat:
    rows = ms[0].rows
    if any(m.rows != rows for m in ms):
        raise ValueError("hstack row mismatch")
    cols = sum(m.cols for m in ms)
    return Mat._raw(tuple(tuple(x for m in ms for x in m.entries[i]) for i in range(rows)), cols)


def vstack(*ms: Mat) -> Mat:
    cols = ms[0].cols
    if any(m.cols != cols for m in ms):
        raise ValueError("vstack column mismatch")
    return Mat._raw(tuple(r for m in ms for r in m.entries), cols)


def block_diag(*ms: Mat) -> Mat:
    cols = sum(m.cols for m in ms)
    out = []
    off = 0
    for m in ms:
        left = (_ZERO,) * off
        right = (_ZERO,) * (cols - off - m.cols)
        out.extend(left + r + right for r in m.entries)
        off += m.cols
    return Mat._raw(tuple(out), cols)


def _rref_rows(m: list[list[Rat]], ncols: int) -> tuple[list[list[Rat]], list[int]]:
    """In-place Gauss-Jordan; returns (nonzero rows, pivot columns)."""
    nrows = len(m)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pr = m[r]
        inv = 1 / pr[c]
        if inv != 1:
            for j in range(c, ncols):
                if pr[j]:
                    pr[j] *= inv
        nzj = [j for j in range(c, ncols) if pr[j]]
        for i in range(nrows):
            if i != r:
                mi = m[i]
                f = mi[c]
                if f:
                    for j in nzj:
                        mi[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rref_canonical(m: Mat) -> Mat:
    """Reduced row-echelon form with zero rows removed."""
    red, _ = _rref_rows([list(r) for r in m.entries], m.cols)
    return Mat._raw(tuple(tuple(r) for r in red), m.cols)


class Subspace:
    """A linear subspace of Q^n held in canonical (reduced row-echelon) form."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, rows: Iterable[Sequence] = ()):
        rows = [[rat(x) for x in r] for r in rows]
        for r in rows:
            if len(r) != ambient_dim:
                raise ValueError(f"vector of length {len(r)} in ambient dimension {ambient_dim}")
        red, piv = _rref_rows(rows, ambient_dim)
        self.ambient_dim = ambient_dim
        self.basis = Mat._raw(tuple(tuple(r) for r in red), ambient_dim)
        self.pivots = tuple(piv)

    @classmethod
    def _from_rref(cls, ambient_dim: int, red: list, piv: list) -> "Subspace":
        s = object.__new__(cls)
        s.ambient_dim = ambient_dim
        s.basis = Mat._raw(tuple(tuple(r) for r in red), ambient_dim)
        s.pivots = tuple(piv)
        return s

    @classmethod
    def span(cls, ambient_dim: int, rows: Iterable[Sequence]) -> "Subspace":
        return cls(ambient_dim, rows)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls._from_rref(n, [], [])

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls._from_rref(n, [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)], list(range(n)))

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        """Span of the standard basis vectors at ``indices``."""
        idx = sorted(set(indices))
        return cls._from_rref(n, [[_ONE if j == i else _ZERO for j in range(n)] for i in idx], idx)

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> tuple:
        return self.basis.entries

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(ambient={self.ambient_dim}, dim={self.dim}, basis={self.basis.to_json()})"

    def __add__(self, other: "Subspace") -> "Subspace":
        return sum_spaces(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def coords(self, v: Sequence) -> tuple:
        """Coordinates of ``v`` (assumed to lie in the subspace) in the stored basis."""
        return tuple(rat(v[p]) for p in self.pivots)

    def contains(self, v: Sequence) -> bool:
        v = [rat(x) for x in v]
        for row, p in zip(self.basis.entries, self.pivots):
            c = v[p]
            if c:
                for j in range(p, self.ambient_dim):
                    if row[j]:
                        v[j] -= c * row[j]
        return not any(v)

    def contains_space(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return all(self.contains(v) for v in other.basis.entries)

    def image(self, m: Mat) -> "Subspace":
        """Image of the subspace under ``v -> m v``."""
        if m.cols != self.ambient_dim:
            raise ValueError("matrix does not act on this ambient space")
        return Subspace(m.rows, (m.apply(v) for v in self.basis.entries))

    def is_zero(self) -> bool:
        return self.dim == 0


def kernel(m: Mat) -> Subspace:
    """Null space ``{v : m v = 0}``."""
    n = m.cols
    red, piv = _rref_rows([list(r) for r in m.entries], n)
    pivset = set(piv)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [_ZERO] * n
        v[f] = _ONE
        for row, p in zip(red, piv):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return Subspace(n, basis)


def annihilator(s: Subspace) -> Subspace:
    """Vectors orthogonal (dot product) to every vector of ``s``."""
    if s.dim == 0:
        return Subspace.full(s.ambient_dim)
    return kernel(s.basis)


def _check_same_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(f"ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_same_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    # x = alpha A = beta B  <=>  (alpha, beta) in ker [A^T | -B^T]
    stacked = hstack(a.basis.T, (-b.basis).T)
    ker = kernel(stacked)
    p = a.dim
    return Subspace(a.ambient_dim, (_combo(v[:p], a.basis.entries) for v in ker.basis.entries))


def _combo(coeffs: Sequence, rows: Sequence[Sequence]) -> list:
    n = len(rows[0]) if rows else 0
    out = [_ZERO] * n
    for c, r in zip(coeffs, rows):
        if c:
            for j, x in enumerate(r):
                if x:
                    out[j] += c * x
    return out


def sum_spaces(a: Subspace, b: Subspace) -> Subspace:
    _check_same_ambient(a, b)
    return Subspace(a.ambient_dim, a.basis.entries + b.basis.entries)


def complement_extend(inner: Subspace, outer: Subspace) -> Subspace:
    """Return W with ``inner (+) W = outer``.

    Coordinates of ``inner`` in the canonical basis of ``outer`` are reduced to
    echelon form; W is spanned by the basis vectors of ``outer`` sitting at the
    non-pivot positions.
    """
    _check_same_ambient(inner, outer)
    if not outer.contains_space(inner):
        raise ValueError("complement_extend: inner is not contained in outer")
    coords = [list(outer.coords(v)) for v in inner.basis.entries]
    _, piv = _rref_rows(coords, outer.dim)
    taken = set(piv)
    rows = [outer.basis.entries[i] for i in range(outer.dim) if i not in taken]
    return Subspace(outer.ambient_dim, rows)


def solve_left(a: Mat, b: Mat) -> Mat:
    """Solve ``x a = b`` for x when each row of b lies in the row space of a (a full row rank)."""
    # x a = b  <=>  a^T x^T = b^T
    n = a.rows
    aug = [list(r) + list(s) for r, s in zip(a.T.entries, b.T.entries)]
    red, piv = _rref_rows(aug, n + b.rows)
    if len(piv) < n or any(p >= n for p in piv):
        raise ValueError("solve_left: system inconsistent or a not of full row rank")
    return Mat._raw(tuple(tuple(r[n:]) for r in red[:n]), b.rows).T


def embed(s: Subspace, total: int, offset: int) -> Subspace:
    """Place ``s`` into coordinates ``offset..offset+ambient`` of Q^total."""
    pad_l = (_ZERO,) * offset
    pad_r = (_ZERO,) * (total - offset - s.ambient_dim)
    return Subspace._from_rref(
        total,
        [list(pad_l + r + pad_r) for r in s.basis.entries],
        [p + offset for p in s.pivots],
    )


def project(s: Subspace, indices: Sequence[int]) -> Subspace:
    """Image of ``s`` under the coordinate projection onto ``indices``."""
    return Subspace(len(indices), ([r[i] for i in indices] for r in s.basis.entries))


def direct_product(a: Subspace, b: Subspace) -> Subspace:
    """``a x b`` inside Q^(m+n)."""
    n = a.ambient_dim + b.ambient_dim
    rows = [list(r) + [_ZERO] * b.ambient_dim for r in a.basis.entries]
    rows += [[_ZERO] * a.ambient_dim + list(r) for r in b.basis.entries]
    return Subspace._from_rref(n, rows, list(a.pivots) + [p + a.ambient_dim for p in b.pivots])


def permutation_matrix(perm: Sequence[int]) -> Mat:
    """Matrix P with ``(P v)[i] = v[perm[i]]``."""
    n = len(perm)
    return Mat._raw(tuple(tuple(_ONE if j == perm[i] else _ZERO for j in range(n)) for i in range(n)), n)
