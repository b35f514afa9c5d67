"""Plain-text algebra files.

Example::

    # comments start with '#'
    name L6_14
    dim 6
    basis x1 x2 x3 x4 x5 x6
    bracket x1 x2 = x3
    bracket x3 x4 = -1*x6

Brackets not listed are zero.  Coefficients are exact rationals ``p`` or
``p/q``.  :func:`dumps` writes the canonical form, which :func:`loads`
reads back to an identical string.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from . import exactlin as el
from .liealg import LieAlgebra, ensure_valid

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?([A-Za-z_][A-Za-z0-9_']*)?\s*"
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_combination(text: str, names: Sequence[str]) -> el.Vector:
    """Parse ``"x2 + x3"``, ``"-1/2*x6"``, ``"x5-x6"`` or ``"0"`` into a coordinate vector."""
    pos = {x: i for i, x in enumerate(names)}
    out = [Fraction(0)] * len(names)
    s = text.strip()
    if not s:
        raise ParseError("empty linear combination")
    if s == "0":
        return tuple(out)
    i = 0
    first = True
    while i < len(s):
        m = _TERM.match(s, i)
        sign, coeff, name = m.group(1), m.group(2), m.group(3)
        if m.end() == i or (sign is None and not first):
            raise ParseError(f"cannot parse {s[i:]!r}")
        if name is None:
            raise ParseError(f"term without a basis element in {text!r}")
        if name not in pos:
            raise ParseError(f"unknown basis element {name!r}")
        c = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        out[pos[name]] += c
        i = m.end()
        first = False
    return tuple(out)


def parse_vectors(text: str, names: Sequence[str]) -> list[el.Vector]:
    """Comma-separated combinations such as ``"x2+x3,x4"``."""
    return [parse_combination(part, names) for part in text.split(",") if part.strip()]


def format_combination(v: Sequence, names: Sequence[str]) -> str:
    """Canonical text: ``x1 - 2*x3``; a leading unit minus is written ``-1*x``."""
    out = ""
    for c, x in zip(v, names):
        c = Fraction(c)
        if not c:
            continue
        body = x if abs(c) == 1 else f"{abs(c)}*{x}"
        if not out:
            out = body if c > 0 else ("-1*" + x if c == -1 else "-" + body)
        else:
            out += (" + " if c > 0 else " - ") + body
    return out or "0"


def loads(text: str, validate: bool = True) -> LieAlgebra:
    name = ""
    dim = None
    names: list[str] | None = None
    pending: list[tuple[int, str, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "name":
            if not rest:
                raise ParseError("empty name", lineno)
            name = rest
        elif key == "dim":
            try:
                dim = int(rest)
            except ValueError:
                raise ParseError(f"bad dimension {rest!r}", lineno) from None
            if dim < 0:
                raise ParseError("negative dimension", lineno)
        elif key == "basis":
            names = rest.split()
            bad = [x for x in names if not _NAME.match(x)]
            if bad:
                raise ParseError(f"bad basis names {bad}", lineno)
            if len(set(names)) != len(names):
                raise ParseError("repeated basis name", lineno)
        elif key == "bracket":
            lhs, eq, rhs = rest.partition("=")
            parts = lhs.split()
            if not eq or len(parts) != 2:
                raise ParseError("expected 'bracket a b = combination'", lineno)
            pending.append((lineno, parts[0], parts[1], rhs))
        else:
            raise ParseError(f"unknown keyword {key!r}", lineno)
    if names is None:
        if dim is None:
            raise ParseError("missing 'basis' line")
        names = [f"x{i + 1}" for i in range(dim)]
    if dim is not None and dim != len(names):
        raise ParseError(f"dim {dim} disagrees with {len(names)} basis names")
    pos = {x: i for i, x in enumerate(names)}
    brackets = {}
    for lineno, a, b, rhs in pending:
        if a not in pos or b not in pos:
            raise ParseError(f"unknown basis element in [{a}, {b}]", lineno)
        i, j = pos[a], pos[b]
        if i >= j:
            raise ParseError(f"bracket [{a}, {b}] must list the earlier basis element first", lineno)
        if (i, j) in brackets:
            raise ParseError(f"bracket [{a}, {b}] given twice", lineno)
        try:
            brackets[(i, j)] = parse_combination(rhs, names)
        except ParseError as exc:
            raise ParseError(exc.message, lineno) from None
    g = LieAlgebra(names, brackets, name)
    if validate:
        ensure_valid(g)
    return g


def dumps(g: LieAlgebra) -> str:
    lines = []
    if g.name:
        lines.append(f"name {g.name}")
    lines.append(f"dim {g.dim}")
    lines.append("basis " + " ".join(g.basis_names))
    for (i, j), v in g.constants.items():
        lines.append(
            f"bracket {g.basis_names[i]} {g.basis_names[j]} = {format_combination(v, g.basis_names)}"
        )
    return "\n".join(lines) + "\n"


def load(path, validate: bool = True) -> LieAlgebra:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), validate=validate)


def dump(g: LieAlgebra, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(g))


def parse_gram(text: str) -> el.Matrix:
    """Whitespace-separated rational rows, '#' comments allowed."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append(tuple(Fraction(x) for x in line.split()))
        except ValueError:
            raise ParseError(f"bad rational in {line!r}", lineno) from None
    if any(len(r) != len(rows) for r in rows):
        raise ParseError("Gram matrix must be square")
    return tuple(rows)
