"""Lie algebras given by structure constants over Q."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import exactlin as el
from .exactlin import Subspace


class JacobiViolation(ValueError):
    def __init__(self, triple: tuple[str, str, str], residual: el.Vector):
        self.triple = triple
        self.residual = residual
        super().__init__(f"Jacobi identity fails on {triple}: residual {[str(x) for x in residual]}")


class NotNilpotent(ValueError):
    pass


class LieAlgebra:
    """Structure constants ``[x_i, x_j] = sum_k c[i][j][k] x_k`` for i < j.

    Only the upper triangle is supplied; antisymmetry is built in.
    """

    def __init__(self, basis_names: Sequence[str], brackets: Mapping[tuple[int, int], Sequence] | None = None,
                 name: str = ""):
        self.name = name
        self.basis_names = tuple(basis_names)
        if len(set(self.basis_names)) != len(self.basis_names):
            raise ValueError("basis names must be distinct")
        n = self.dim
        consts: dict[tuple[int, int], el.Vector] = {}
        for (i, j), vec in (brackets or {}).items():
            if not (0 <= i < j < n):
                raise ValueError(f"bracket indices must satisfy i < j < dim, got {(i, j)}")
            v = el.vector(vec)
            if len(v) != n:
                raise el.DimensionError("bracket vector has the wrong length")
            if any(v):
                consts[(i, j)] = v
        self.constants = dict(sorted(consts.items()))
        zero = el.zero_vector(n)
        table = [[zero] * n for _ in range(n)]
        for (i, j), v in self.constants.items():
            table[i][j] = v
            table[j][i] = el.scale(-1, v)
        self.table = tuple(tuple(r) for r in table)
        # sparse (i, j, k, c) list for fast bracket evaluation
        self._sparse = tuple(
            (i, j, k, c) for (i, j), v in self.constants.items() for k, c in enumerate(v) if c
        )

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name or '?'}, dim={self.dim}, relations={len(self.constants)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.basis_names == other.basis_names and self.constants == other.constants

    def __hash__(self) -> int:
        return hash((self.basis_names, tuple(self.constants.items())))

    def index(self, name: str) -> int:
        try:
            return self.basis_names.index(name)
        except ValueError:
            raise KeyError(f"unknown basis element {name!r}") from None

    def basis_vector(self, i: int | str) -> el.Vector:
        if isinstance(i, str):
            i = self.index(i)
        return el.unit_vector(self.dim, i)

    def bracket(self, u: Sequence, v: Sequence) -> el.Vector:
        n = self.dim
        if len(u) != n or len(v) != n:
            raise el.DimensionError("vectors do not match the algebra dimension")
        out = [0] * n
        for i, j, k, c in self._sparse:
            a = u[i] * v[j] - u[j] * v[i]
            if a:
                out[k] += a * c
        return tuple(Fraction(x) for x in out)

    def is_abelian(self) -> bool:
        return not self.constants

    def format_vector(self, v: Sequence) -> str:
        parts = []
        for name, c in zip(self.basis_names, v):
            if not c:
                continue
            c = Fraction(c)
            if c == 1:
                parts.append(f"+{name}")
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{'+' if c > 0 else '-'}{abs(c)}*{name}")
        if not parts:
            return "0"
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


def jacobi_residual(g: LieAlgebra, u, v, w) -> el.Vector:
    b = g.bracket
    return el.add(el.add(b(u, b(v, w)), b(v, b(w, u))), b(w, b(u, v)))


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    triple: tuple[str, str, str] | None = None
    residual: el.Vector | None = None


def validate(g: LieAlgebra) -> ValidationReport:
    """Check Jacobi on every basis triple i < j < k; report the first failure."""
    n = g.dim
    e = [g.basis_vector(i) for i in range(n)]
    for i, j, k in itertools.combinations(range(n), 3):
        r = jacobi_residual(g, e[i], e[j], e[k])
        if any(r):
            names = g.basis_names
            return ValidationReport(False, (names[i], names[j], names[k]), r)
    return ValidationReport(True)


def ensure_valid(g: LieAlgebra) -> LieAlgebra:
    rep = validate(g)
    if not rep.ok:
        raise JacobiViolation(rep.triple, rep.residual)
    return g


def subspace_bracket(g: LieAlgebra, a: Subspace, b: Subspace) -> Subspace:
    return el.span((g.bracket(u, v) for u in a.basis for v in b.basis), g.dim)


def whole(g: LieAlgebra) -> Subspace:
    return el.full(g.dim)


def derived_algebra(g: LieAlgebra) -> Subspace:
    return el.span(g.constants.values(), g.dim)


def is_subalgebra(g: LieAlgebra, s: Subspace) -> bool:
    return all(
        el.contains(s, g.bracket(u, v)) for u, v in itertools.combinations(s.basis, 2)
    )


def is_ideal(g: LieAlgebra, s: Subspace) -> bool:
    return all(el.contains(s, g.bracket(e, v)) for e in whole(g).basis for v in s.basis)


def is_abelian_subspace(g: LieAlgebra, s: Subspace) -> bool:
    return all(not any(g.bracket(u, v)) for u, v in itertools.combinations(s.basis, 2))


def ad_matrix(g: LieAlgebra, v: Sequence) -> el.Matrix:
    """Matrix of x -> [v, x]; column j is [v, e_j]."""
    cols = [g.bracket(v, g.basis_vector(j)) for j in range(g.dim)]
    return el.transpose(cols)


def trace_ad(g: LieAlgebra, v: Sequence) -> Fraction:
    m = ad_matrix(g, v)
    return sum((m[i][i] for i in range(g.dim)), Fraction(0))


def ad_traces(g: LieAlgebra) -> tuple[Fraction, ...]:
    return tuple(trace_ad(g, g.basis_vector(i)) for i in range(g.dim))


def is_unimodular(g: LieAlgebra) -> bool:
    return not any(ad_traces(g))


def centralizer(g: LieAlgebra, s: Subspace) -> Subspace:
    """{x : [x, s] = 0}."""
    n = g.dim
    rows = []
    for v in s.basis:
        # x -> [x, v] is linear; its matrix rows give equations on x
        cols = [g.bracket(g.basis_vector(i), v) for i in range(n)]
        rows.extend(el.transpose(cols))
    if not rows:
        return el.full(n)
    return el.kernel(rows, n)


def center(g: LieAlgebra) -> Subspace:
    return centralizer(g, whole(g))


@dataclass(frozen=True)
class SeriesReport:
    derived_series: tuple[Subspace, ...]
    lower_central_series: tuple[Subspace, ...]
    center: Subspace
    nilpotency_class: int | None

    @property
    def is_nilpotent(self) -> bool:
        return self.nilpotency_class is not None


def series(g: LieAlgebra) -> SeriesReport:
    """Derived and lower central series (each ends at its stable term) and center."""
    full = whole(g)
    derived = [full]
    while True:
        nxt = subspace_bracket(g, derived[-1], derived[-1])
        if nxt == derived[-1]:
            break
        derived.append(nxt)
        if nxt.is_zero():
            break
    lower = [full]
    while True:
        nxt = subspace_bracket(g, full, lower[-1])
        if nxt == lower[-1]:
            break
        lower.append(nxt)
        if nxt.is_zero():
            break
    nil = len(lower) - 1 if lower[-1].is_zero() else None
    return SeriesReport(tuple(derived), tuple(lower), center(g), nil)


def is_nilpotent(g: LieAlgebra) -> bool:
    return series(g).is_nilpotent


def lower_central_term(g: LieAlgebra, k: int) -> Subspace:
    """k-th term: k=1 is g, k=2 is [g,g], k=3 is [g,[g,g]], ..."""
    term = whole(g)
    for _ in range(k - 1):
        term = subspace_bracket(g, whole(g), term)
    return term


def ad_power(g: LieAlgebra, x: Sequence, k: int) -> el.Matrix:
    m = el.identity(g.dim)
    a = ad_matrix(g, x)
    for _ in range(k):
        m = el.mat_mul(a, m)
    return m


def is_filiform(g: LieAlgebra) -> bool:
    """Nilpotent of maximal class: class == dim - 1."""
    rep = series(g)
    if not rep.is_nilpotent:
        raise NotNilpotent(f"{g.name or 'algebra'} is not nilpotent")
    return g.dim >= 2 and rep.nilpotency_class == g.dim - 1


def filiform_witness(g: LieAlgebra, height: int = 1) -> el.Vector | None:
    """Some X with ad(X)^(n-2) != 0, searching basis vectors first."""
    n = g.dim
    if n < 2:
        return None
    candidates = [g.basis_vector(i) for i in range(n)]
    rng = range(-height, height + 1)
    candidates += [el.vector(c) for c in itertools.product(rng, repeat=n) if any(c)]
    for x in candidates:
        if any(any(row) for row in ad_power(g, x, n - 2)):
            return x
    return None


def direct_sum(g1: LieAlgebra, g2: LieAlgebra, name: str = "") -> LieAlgebra:
    """Block-diagonal sum; clashing basis names get ``_1``/``_2`` suffixes."""
    n1, n2 = g1.dim, g2.dim
    names1, names2 = list(g1.basis_names), list(g2.basis_names)
    if set(names1) & set(names2):
        names1 = [f"{x}_1" for x in names1]
        names2 = [f"{x}_2" for x in names2]
    brackets = {}
    for (i, j), v in g1.constants.items():
        brackets[(i, j)] = tuple(v) + (0,) * n2
    for (i, j), v in g2.constants.items():
        brackets[(i + n1, j + n1)] = (0,) * n1 + tuple(v)
    return LieAlgebra(names1 + names2, brackets, name or f"{g1.name}+{g2.name}")


def from_relations(names: Sequence[str], relations: Iterable[tuple[str, str, Mapping[str, object]]],
                   name: str = "") -> LieAlgebra:
    """Build from ``(a, b, {c: coeff, ...})`` meaning [a, b] = sum coeff * c."""
    names = tuple(names)
    n = len(names)
    pos = {x: i for i, x in enumerate(names)}
    brackets: dict[tuple[int, int], list] = {}
    for a, b, rhs in relations:
        i, j = pos[a], pos[b]
        vec = [Fraction(0)] * n
        for c, coeff in rhs.items():
            vec[pos[c]] += el.scalar(coeff)
        if i > j:
            i, j = j, i
            vec = [-x for x in vec]
        if (i, j) in brackets:
            raise ValueError(f"bracket [{a},{b}] given twice")
        brackets[(i, j)] = vec
    return LieAlgebra(names, brackets, name)


def abelian(n: int, name: str = "") -> LieAlgebra:
    return LieAlgebra([f"x{i + 1}" for i in range(n)], {}, name or f"R{n}")


def heisenberg(n: int) -> LieAlgebra:
    """h_{2n+1}: basis x_i, y_i, z with [x_i, y_i] = z."""
    names = [f"{s}{i + 1}" for i in range(n) for s in ("x", "y")] + ["z"]
    if n == 1:
        names = ["x", "y", "z"]
    rel = [(names[2 * i], names[2 * i + 1], {"z": 1}) for i in range(n)]
    return from_relations(names, rel, f"h{2 * n + 1}")


def filiform_f4() -> LieAlgebra:
    return from_relations(
        ["x1", "x2", "x3", "x4"], [("x1", "x2", {"x3": 1}), ("x1", "x3", {"x4": 1})], "f4"
    )


def restrict(g: LieAlgebra, s: Subspace, prefix: str = "e") -> LieAlgebra:
    """The subalgebra ``s`` as a Lie algebra on its canonical basis."""
    if not is_subalgebra(g, s):
        raise ValueError("subspace is not a subalgebra")
    basis = s.basis
    brackets = {}
    for i, j in itertools.combinations(range(len(basis)), 2):
        brackets[(i, j)] = s.coordinates(g.bracket(basis[i], basis[j]))
    return LieAlgebra([f"{prefix}{k + 1}" for k in range(len(basis))], brackets)


def quotient(g: LieAlgebra, ideal: Subspace, prefix: str = "q") -> LieAlgebra:
    """g / ideal realised on a complement, bracket projected along the ideal."""
    if not is_ideal(g, ideal):
        raise ValueError("subspace is not an ideal")
    comp = el.complement(ideal)
    merged = el.inverse(ideal.basis + comp.basis)
    k = ideal.dim

    def coords(x):
        c = el.mat_vec(el.transpose(merged), x)
        return c[k:]

    brackets = {}
    for i, j in itertools.combinations(range(comp.dim), 2):
        brackets[(i, j)] = coords(g.bracket(comp.basis[i], comp.basis[j]))
    q = LieAlgebra([f"{prefix}{t + 1}" for t in range(comp.dim)], brackets)
    return ensure_valid(q)


def small_nilpotent_type(g: LieAlgebra) -> str | None:
    """Name of a nilpotent algebra of dimension <= 4 from exact invariants.

    Distinguishes R^n, h3, R+h3 and f4 by the dimensions of the derived
    algebra and the center; returns None outside that range.
    """
    rep = series(g)
    if not rep.is_nilpotent:
        return None
    n = g.dim
    d = derived_algebra(g).dim
    z = rep.center.dim
    if d == 0:
        return f"R^{n}"
    if n == 3 and d == 1:
        return "h3"
    if n == 4 and d == 1 and z == 2:
        return "R+h3"
    if n == 4 and d == 2 and z == 1:
        return "f4"
    return None
