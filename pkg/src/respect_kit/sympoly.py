"""Multivariate polynomials over Q, Pfaffians, and definiteness of quadratics.

Only what the pencil computations need: ring arithmetic, substitution,
evaluation, Pfaffians and determinants of small polynomial matrices, and
exact sign analysis of quadratic forms.
"""

from __future__ import annotations

import enum
import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from . import exactlin as el


class VariableMismatch(ValueError):
    pass


class Poly:
    """Immutable polynomial with a fixed ordered variable list."""

    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.variables = tuple(variables)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != len(self.variables):
                raise VariableMismatch("exponent vector does not match variable list")
            c = el.scalar(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self._terms = clean
        self._hash = None

    @classmethod
    def const(cls, variables: Sequence[str], c) -> "Poly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "Poly":
        variables = tuple(variables)
        exp = tuple(1 if v == name else 0 for v in variables)
        if sum(exp) != 1:
            raise VariableMismatch(f"unknown variable {name!r}")
        return cls(variables, {exp: 1})

    @classmethod
    def linear(cls, variables: Sequence[str], coeffs: Sequence) -> "Poly":
        n = len(variables)
        return cls(variables, {tuple(int(k == i) for k in range(n)): c for i, c in enumerate(coeffs)})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        """Terms in graded lexicographic order, highest first."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def constant_value(self) -> Fraction | None:
        if self.degree() <= 0:
            return self.coefficient((0,) * len(self.variables))
        return None

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.variables != self.variables:
                if other.degree() <= 0:
                    return Poly.const(self.variables, other.constant_value())
                if self.degree() <= 0 and not self.variables:
                    raise VariableMismatch("variable lists differ")
                raise VariableMismatch(f"variable lists differ: {self.variables} vs {other.variables}")
            return other
        return Poly.const(self.variables, other)

    def __add__(self, other) -> "Poly":
        other = self._lift(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Poly(self.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Poly":
        return self._lift(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._lift(other)
        terms: dict[tuple, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return Poly(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(self.variables, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            if other.variables != self.variables:
                return self.degree() <= 0 and other.degree() <= 0 and self.constant_value() == other.constant_value()
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.degree() <= 0 and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._terms.items())))
        return self._hash

    def evaluate(self, point: Mapping[str, object] | Sequence) -> Fraction:
        if isinstance(point, Mapping):
            missing = set(self.variables) - set(point)
            if missing:
                raise VariableMismatch(f"no value for {sorted(missing)}")
            values = [el.scalar(point[v]) for v in self.variables]
        else:
            if len(point) != len(self.variables):
                raise VariableMismatch("point has the wrong number of coordinates")
            values = [el.scalar(x) for x in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for x, k in zip(values, e):
                if k:
                    term *= x**k
            total += term
        return total

    def substitute(self, assignment: Mapping[str, object], variables: Sequence[str] | None = None) -> "Poly":
        """Replace variables by Polys or scalars.

        The result lives over ``variables`` (default: the current list).
        Replacement Polys must use that same variable list.
        """
        target = self.variables if variables is None else tuple(variables)
        for name in assignment:
            if name not in self.variables:
                raise VariableMismatch(f"unknown variable {name!r}")
        images = []
        for v in self.variables:
            if v in assignment:
                r = assignment[v]
                if isinstance(r, Poly):
                    if r.variables != target and r.degree() > 0:
                        raise VariableMismatch("replacement uses a different variable list")
                    if r.variables != target:
                        r = Poly.const(target, r.constant_value())
                else:
                    r = Poly.const(target, r)
            else:
                if v not in target:
                    raise VariableMismatch(f"variable {v!r} has no place in the target list")
                r = Poly.var(target, v)
            images.append(r)
        out = Poly(target)
        for e, c in self._terms.items():
            term = Poly.const(target, c)
            for img, k in zip(images, e):
                if k:
                    term = term * img**k
            out = out + term
        return out

    def linear_coefficients(self) -> tuple[Fraction, ...]:
        """Coefficient vector of a homogeneous linear form."""
        if not self.is_zero() and (self.degree() != 1 or not self.is_homogeneous()):
            raise ValueError("not a homogeneous linear form")
        n = len(self.variables)
        return tuple(self.coefficient(tuple(int(k == i) for k in range(n))) for i in range(n))

    def to_json(self) -> list:
        return [[list(e), str(c)] for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, variables: Sequence[str], data: Iterable) -> "Poly":
        return cls(variables, {tuple(e): Fraction(c) for e, c in data})

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Poly({self})"


class SymMatrix:
    """Square matrix of Polys over one variable list."""

    def __init__(self, entries: Sequence[Sequence[Poly]], antisymmetric: bool = False):
        rows = tuple(tuple(r) for r in entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix is not square")
        self.entries = rows
        self.antisymmetric = antisymmetric
        self.variables = rows[0][0].variables if n else ()
        if antisymmetric and not self.is_antisymmetric():
            raise ValueError("matrix flagged antisymmetric is not")

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_antisymmetric(self) -> bool:
        n = self.size
        return all(
            self.entries[i][j] == -self.entries[j][i] for i in range(n) for j in range(i, n)
        )

    def principal(self, index: Sequence[int]) -> "SymMatrix":
        return SymMatrix([[self.entries[i][j] for j in index] for i in index], self.antisymmetric)

    def evaluate(self, point) -> el.Matrix:
        return tuple(tuple(p.evaluate(point) for p in row) for row in self.entries)


def pfaffian(m: SymMatrix) -> Poly:
    """Pfaffian by recursive expansion along the first row.

    Pf(A) = sum_{j>0} (-1)^(j+1) a_{0j} Pf(A with rows/cols 0, j removed),
    so for 4x4 matrices Pf = a01 a23 - a02 a13 + a03 a12.
    """
    n = m.size
    if n % 2:
        raise ValueError("Pfaffian needs an even-size matrix")
    if not m.is_antisymmetric():
        raise ValueError("Pfaffian needs an antisymmetric matrix")
    variables = m.variables

    @lru_cache(maxsize=None)
    def pf(idx: tuple[int, ...]) -> Poly:
        if not idx:
            return Poly.const(variables, 1)
        first, rest = idx[0], idx[1:]
        total = Poly(variables)
        for pos, j in enumerate(rest):
            a = m.entries[first][j]
            if a.is_zero():
                continue
            sub = pf(rest[:pos] + rest[pos + 1 :])
            term = a * sub
            total = total + term if pos % 2 == 0 else total - term
        return total

    return pf(tuple(range(n)))


def determinant(m: SymMatrix) -> Poly:
    """Determinant by Laplace expansion along rows, memoised on column sets."""
    n = m.size
    variables = m.variables

    @lru_cache(maxsize=None)
    def det(row: int, cols: tuple[int, ...]) -> Poly:
        if row == n:
            return Poly.const(variables, 1)
        total = Poly(variables)
        for pos, c in enumerate(cols):
            a = m.entries[row][c]
            if a.is_zero():
                continue
            term = a * det(row + 1, cols[:pos] + cols[pos + 1 :])
            total = total + term if pos % 2 == 0 else total - term
        return total

    return det(0, tuple(range(n)))


class Definiteness(enum.Enum):
    POSITIVE_DEFINITE = "POSITIVE_DEFINITE"
    NEGATIVE_DEFINITE = "NEGATIVE_DEFINITE"
    INDEFINITE_OR_SEMI = "INDEFINITE_OR_SEMI"


def quadratic_form_matrix(q: Poly) -> el.Matrix:
    """Symmetric Gram matrix S with q(x) = x^T S x."""
    if q.is_zero():
        n = len(q.variables)
        return tuple((Fraction(0),) * n for _ in range(n))
    if q.degree() != 2 or not q.is_homogeneous():
        raise ValueError("expected a homogeneous quadratic")
    n = len(q.variables)
    s = [[Fraction(0)] * n for _ in range(n)]
    for e, c in q.terms.items():
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        i, j = idx
        if i == j:
            s[i][i] += c
        else:
            s[i][j] += c / 2
            s[j][i] += c / 2
    return tuple(tuple(r) for r in s)


def _leading_minors(s: el.Matrix) -> list[Fraction]:
    return [el.determinant([row[:k] for row in s[:k]]) for k in range(1, len(s) + 1)]


def quadratic_definiteness(q: Poly) -> Definiteness:
    """Sylvester's criterion on the leading principal minors."""
    s = quadratic_form_matrix(q)
    if not s:
        return Definiteness.INDEFINITE_OR_SEMI
    minors = _leading_minors(s)
    if all(d > 0 for d in minors):
        return Definiteness.POSITIVE_DEFINITE
    if all((d < 0) if k % 2 == 0 else (d > 0) for k, d in enumerate(minors)):
        return Definiteness.NEGATIVE_DEFINITE
    return Definiteness.INDEFINITE_OR_SEMI


def semidefinite_sign(q: Poly) -> int:
    """+1 if q is positive semidefinite, -1 if negative semidefinite, 0 otherwise.

    Decided on all principal minors, which is exact for semidefiniteness.
    The zero form counts as +1.
    """
    s = quadratic_form_matrix(q)
    n = len(s)
    for sign in (1, -1):
        ok = True
        for k in range(1, n + 1):
            for idx in itertools.combinations(range(n), k):
                d = el.determinant([[sign * s[i][j] for j in idx] for i in idx])
                if d < 0:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return sign
    return 0


def real_zero_subspace(q: Poly) -> el.Subspace | None:
    """Real zero set of a semidefinite quadratic, which is the kernel of its Gram matrix.

    Returns None for indefinite forms, whose zero set is not a subspace.
    """
    if semidefinite_sign(q) == 0:
        return None
    s = quadratic_form_matrix(q)
    return el.kernel(s, len(q.variables))
