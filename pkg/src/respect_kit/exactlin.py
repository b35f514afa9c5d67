"""Exact rational linear algebra: row reduction and canonical subspaces.

Vectors are tuples of :class:`fractions.Fraction`; matrices are tuples of
row tuples.  A :class:`Subspace` is stored by its reduced row echelon basis,
so two subspaces are equal exactly when their bases are identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]
Matrix = tuple  # tuple[Vector, ...]


class DimensionError(ValueError):
    """Raised when vector or matrix shapes do not agree."""


def scalar(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(x)


def vector(xs: Iterable) -> Vector:
    return tuple(scalar(x) for x in xs)


def matrix(rows: Iterable[Iterable]) -> Matrix:
    m = tuple(vector(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionError("ragged matrix")
    return m


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(Fraction(1) if k == i else Fraction(0) for k in range(n))


def identity(n: int) -> Matrix:
    return tuple(unit_vector(n, i) for i in range(n))


def is_zero(v: Sequence) -> bool:
    return not any(v)


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> Vector:
    return tuple(c * a for a in v)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def combine(coeffs: Sequence, vectors: Sequence[Sequence], n: int) -> Vector:
    """Linear combination ``sum(c_i * v_i)`` in dimension ``n``."""
    out = [Fraction(0)] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for k, a in enumerate(v):
                if a:
                    out[k] += c * a
    return tuple(out)


def transpose(m: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    if not m:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*m))


def mat_vec(m: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in m)


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def _reduce(rows: list[list[Fraction]], ncols: int) -> list[int]:
    """In-place Gauss-Jordan elimination; returns the pivot columns."""
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        lead = pr[c]
        if lead != 1:
            inv = 1 / lead
            rows[r] = pr = [x * inv for x in pr]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return pivots


def rref(m: Sequence[Sequence], ncols: int | None = None) -> tuple[Matrix, int]:
    """Reduced row echelon form of ``m`` (same shape) and its rank."""
    rows = [[scalar(x) for x in r] for r in m]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots = _reduce(rows, ncols)
    return tuple(tuple(r) for r in rows), len(pivots)


def rank(m: Sequence[Sequence]) -> int:
    return rref(m)[1]


def inverse(m: Sequence[Sequence]) -> Matrix:
    n = len(m)
    aug = [[scalar(x) for x in row] + list(unit_vector(n, i)) for i, row in enumerate(m)]
    pivots = _reduce(aug, n)
    if len(pivots) != n:
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(row[n:]) for row in aug)


def determinant(m: Sequence[Sequence]) -> Fraction:
    rows = [[scalar(x) for x in r] for r in m]
    n = len(rows)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        det *= rows[c][c]
        for i in range(c + 1, n):
            f = rows[i][c] / rows[c][c]
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^n held by its canonical (RREF) basis."""

    ambient_dim: int
    basis: Matrix = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(row) if x != 0) for row in self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def coordinates(self, v: Sequence) -> Vector:
        """Coefficients of ``v`` on the canonical basis (``v`` must lie in the subspace)."""
        coeffs = tuple(scalar(v[p]) for p in self.pivots)
        if combine(coeffs, self.basis, self.ambient_dim) != tuple(scalar(x) for x in v):
            raise ValueError("vector is not in the subspace")
        return coeffs

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def __add__(self, other: "Subspace") -> "Subspace":
        return plus(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def __le__(self, other: "Subspace") -> bool:
        return contains(other, self)

    def __lt__(self, other: "Subspace") -> bool:
        return self.dim < other.dim and contains(other, self)


def span(vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
    """Canonical subspace spanned by ``vectors`` (zeros and repeats ignored)."""
    rows = []
    for v in vectors:
        if len(v) != ambient_dim:
            raise DimensionError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        rows.append([scalar(x) for x in v])
    pivots = _reduce(rows, ambient_dim)
    return Subspace(ambient_dim, tuple(tuple(r) for r in rows[: len(pivots)]))


def zero(n: int) -> Subspace:
    return Subspace(n, ())


def full(n: int) -> Subspace:
    return Subspace(n, identity(n))


def coordinate_subspace(indices: Iterable[int], n: int) -> Subspace:
    return span((unit_vector(n, i) for i in indices), n)


def _check_same(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError("subspaces live in different ambient spaces")


def plus(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    return span(a.basis + b.basis, a.ambient_dim)


def contains(a: Subspace, v) -> bool:
    """``v`` may be a vector or a Subspace."""
    if isinstance(v, Subspace):
        _check_same(a, v)
        return all(contains(a, row) for row in v.basis)
    if len(v) != a.ambient_dim:
        raise DimensionError("vector length does not match ambient dimension")
    residual = [scalar(x) for x in v]
    for row, p in zip(a.basis, a.pivots):
        f = residual[p]
        if f:
            residual = [x - f * y for x, y in zip(residual, row)]
    return not any(residual)


def kernel(m: Sequence[Sequence], ncols: int | None = None) -> Subspace:
    """Null space ``{x : m x = 0}`` as a subspace of Q^cols."""
    if ncols is None:
        if not m:
            raise DimensionError("ncols required for an empty matrix")
        ncols = len(m[0])
    rows = [[scalar(x) for x in r] for r in m]
    pivots = _reduce(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -rows[r][f]
        basis.append(v)
    return span(basis, ncols)


def annihilator(a: Subspace) -> Subspace:
    """Functionals vanishing on ``a``, in dual coordinates of the same size."""
    if a.is_zero():
        return full(a.ambient_dim)
    return kernel(a.basis, a.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    return annihilator(plus(annihilator(a), annihilator(b)))


def complement(a: Subspace, within: Subspace | None = None) -> Subspace:
    """Deterministic complement of ``a`` inside ``within``.

    Canonical basis vectors of ``within`` are taken greedily in order when
    they are independent of ``a`` and of the vectors already chosen.
    """
    if within is None:
        within = full(a.ambient_dim)
    _check_same(a, within)
    if not contains(within, a):
        raise ValueError("complement: subspace is not contained in `within`")
    chosen: list[Vector] = []
    acc = a
    for w in within.basis:
        if acc.dim == within.dim:
            break
        if not contains(acc, w):
            chosen.append(w)
            acc = span(acc.basis + (w,), a.ambient_dim)
    return span(chosen, a.ambient_dim)


def quotient_map(a: Subspace, ambient_dim: int | None = None) -> Matrix:
    """Surjection Q^n -> Q^(n - dim a) with kernel exactly ``a``.

    Row ``j`` reads off the ``j``-th non-pivot coordinate after subtracting
    the pivot components along the canonical basis of ``a``.
    """
    n = a.ambient_dim if ambient_dim is None else ambient_dim
    if n != a.ambient_dim:
        raise DimensionError("ambient dimension mismatch")
    pivots = a.pivots
    rows = []
    for q in (c for c in range(n) if c not in pivots):
        row = [Fraction(0)] * n
        row[q] = Fraction(1)
        for b, p in zip(a.basis, pivots):
            row[p] -= b[q]
        rows.append(tuple(row))
    return tuple(rows)


def solve(m: Sequence[Sequence], b: Sequence) -> Vector | None:
    """One solution ``x`` of ``m x = b``, or None when inconsistent."""
    ncols = len(m[0]) if m else 0
    aug = [[scalar(x) for x in row] + [scalar(bi)] for row, bi in zip(m, b)]
    pivots = _reduce(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, p in enumerate(pivots):
        x[p] = aug[r][ncols]
    return tuple(x)
