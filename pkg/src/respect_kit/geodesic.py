"""Inner products on Lie algebras, geodesic elements and totally geodesic subalgebras."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from . import exactlin as el
from . import liealg as la
from .exactlin import Subspace
from .liealg import LieAlgebra


class NotPositiveDefinite(ValueError):
    pass


@dataclass(frozen=True)
class MetricLieAlgebra:
    algebra: LieAlgebra
    gram: el.Matrix

    def __post_init__(self):
        n = self.algebra.dim
        gram = el.matrix(self.gram)
        object.__setattr__(self, "gram", gram)
        if len(gram) != n or any(len(r) != n for r in gram):
            raise el.DimensionError(f"Gram matrix must be {n}x{n}")
        if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(i)):
            raise NotPositiveDefinite("Gram matrix is not symmetric")
        # Sylvester: all leading principal minors positive
        for k in range(1, n + 1):
            if el.determinant([row[:k] for row in gram[:k]]) <= 0:
                raise NotPositiveDefinite(f"leading minor of order {k} is not positive")

    @classmethod
    def standard(cls, g: LieAlgebra) -> "MetricLieAlgebra":
        return cls(g, el.identity(g.dim))

    def inner(self, u: Sequence, v: Sequence):
        return el.dot(u, el.mat_vec(self.gram, v))

    def orthogonal_complement(self, s: Subspace) -> Subspace:
        rows = [el.mat_vec(self.gram, b) for b in s.basis]
        return el.kernel(rows, self.algebra.dim) if rows else el.full(self.algebra.dim)


def _nonzero(v: Sequence) -> el.Vector:
    v = el.vector(v)
    if el.is_zero(v):
        raise ValueError("the zero vector is excluded")
    return v


def is_geodesic(m: MetricLieAlgebra, v: Sequence) -> bool:
    """<[v, h], v> = 0 for every h orthogonal to v."""
    v = _nonzero(v)
    g = m.algebra
    perp = m.orthogonal_complement(el.span([v], g.dim))
    return all(m.inner(g.bracket(v, h), v) == 0 for h in perp.basis)


@lru_cache(maxsize=64)
def _derived(g: LieAlgebra) -> Subspace:
    return la.derived_algebra(g)


def geodesic_admissible(g: LieAlgebra, y: Sequence) -> bool:
    """Some inner product makes y geodesic iff no X has [X, y] = y."""
    y = _nonzero(y)
    # [g, y] lies in [g, g], so anything outside it is admissible
    if not el.contains(_derived(g), y):
        return True
    image = el.span((g.bracket(g.basis_vector(i), y) for i in range(g.dim)), g.dim)
    return not el.contains(image, y)


def is_totally_geodesic_subalgebra(m: MetricLieAlgebra, V: Subspace) -> bool:
    g = m.algebra
    if not la.is_subalgebra(g, V):
        raise ValueError("V is not a subalgebra")
    perp = m.orthogonal_complement(V)
    for h in perp.basis:
        for v1, v2 in itertools.combinations_with_replacement(V.basis, 2):
            if m.inner(g.bracket(h, v1), v2) + m.inner(v1, g.bracket(h, v2)) != 0:
                return False
    return True


def is_orthonormal_geodesic_basis(m: MetricLieAlgebra, basis: Sequence[Sequence]) -> bool:
    n = m.algebra.dim
    vecs = [el.vector(b) for b in basis]
    if len(vecs) != n or el.rank(vecs) != n:
        raise ValueError("vectors do not form a basis")
    for i, j in itertools.combinations_with_replacement(range(n), 2):
        if m.inner(vecs[i], vecs[j]) != (1 if i == j else 0):
            return False
    return all(is_geodesic(m, v) for v in vecs)


@dataclass(frozen=True)
class GeodesicSearch:
    vector: el.Vector | None
    tried: int
    exhaustive: bool = False


def search_geodesic(m: MetricLieAlgebra, height: int = 1) -> GeodesicSearch:
    """First geodesic vector among integer vectors of height <= ``height``.

    Experimental and non-exhaustive: a miss says nothing about existence.
    """
    n = m.algebra.dim
    tried = 0
    for h in range(1, height + 1):
        for c in itertools.product(range(-h, h + 1), repeat=n):
            if max(map(abs, c)) != h:
                continue
            tried += 1
            if is_geodesic(m, c):
                return GeodesicSearch(el.vector(c), tried)
    return GeodesicSearch(None, tried)
