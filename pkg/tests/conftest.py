"""Shared helpers: random isomorphic copies of catalog algebras and the acceptance summary."""

from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from respect_kit import catalog as cat
from respect_kit import exactlin as el
from respect_kit.liealg import LieAlgebra

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {detail}")


def transport(g: LieAlgebra, P) -> LieAlgebra:
    """Isomorphic copy of g in the basis f_i = sum_k P[i][k] e_k."""
    n = g.dim
    P = el.matrix(P)
    Pinv = el.inverse(P)
    brackets = {}
    for i, j in itertools.combinations(range(n), 2):
        w = g.bracket(P[i], P[j])
        # coordinates c with sum_k c_k P[k] = w, i.e. c = w Pinv
        brackets[(i, j)] = tuple(sum(w[a] * Pinv[a][b] for a in range(n)) for b in range(n))
    return LieAlgebra([f"f{i + 1}" for i in range(n)], brackets, f"{g.name}'")


small_ints = st.integers(min_value=-2, max_value=2)


@st.composite
def invertible_matrices(draw, n: int):
    """Permuted products L*U of unitriangular integer matrices, so det = +-1 by construction."""
    L = [[draw(small_ints) if j < i else int(i == j) for j in range(n)] for i in range(n)]
    U = [[draw(small_ints) if j > i else int(i == j) for j in range(n)] for i in range(n)]
    perm = draw(st.permutations(range(n)))
    LU = el.mat_mul(L, U)
    return [LU[p] for p in perm]


@st.composite
def rational_vectors(draw, n: int, nonzero: bool = False):
    q = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    v = [Fraction(draw(q)) for _ in range(n)]
    if nonzero and not any(v):
        v[draw(st.integers(0, n - 1))] = Fraction(draw(st.sampled_from([1, -1, 2, Fraction(1, 2)])))
    return tuple(v)


def nilpotent_names(max_dim: int = 6) -> list[str]:
    from respect_kit import liealg as la

    return [n for n in cat.names() if cat.load(n).dim <= max_dim and la.is_nilpotent(cat.load(n))]


@pytest.fixture(scope="session")
def catalog_names():
    return cat.names()
