from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from respect_kit import exactlin as el

q = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    # sparse-ish entries so that rank drops happen often
    entry = st.one_of(st.just(Fraction(0)), q)
    return [[Fraction(draw(entry)) for _ in range(c)] for _ in range(r)]


@st.composite
def subspaces(draw, n):
    k = draw(st.integers(0, n))
    entry = st.one_of(st.just(Fraction(0)), st.integers(-2, 2).map(Fraction))
    return el.span([[draw(entry) for _ in range(n)] for _ in range(k)], n)


def sym(m):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in m])


@given(matrices())
def test_rref_matches_sympy(m):
    R, r = el.rref(m)
    S, piv = sym(m).rref()
    assert r == len(piv)
    assert [[Fraction(int(x.p), int(x.q)) for x in row] for row in S.tolist()] == [list(row) for row in R]


@given(matrices(max_rows=4, max_cols=4))
def test_kernel_dimension_and_membership(m):
    K = el.kernel(m)
    assert K.dim == len(m[0]) - el.rank(m)
    assert K.dim == len(sym(m).nullspace())
    for v in K.basis:
        assert el.is_zero(el.mat_vec(m, v))


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(q, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_determinant_and_inverse_match_sympy(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    d = el.determinant(m)
    assert d == Fraction(str(sym(m).det()))
    if d:
        inv = el.inverse(m)
        assert el.mat_mul(m, inv) == el.identity(len(m))
    else:
        with pytest.raises(ZeroDivisionError):
            el.inverse(m)


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(subspaces(n), subspaces(n))))
def test_grassmann_formula(ab):
    a, b = ab
    assert (a + b).dim + (a & b).dim == a.dim + b.dim
    assert a & b <= a and a & b <= b
    assert a <= a + b and b <= a + b


@given(st.integers(1, 6).flatmap(subspaces))
def test_annihilator_and_complement(a):
    n = a.ambient_dim
    ann = el.annihilator(a)
    assert ann.dim == n - a.dim
    assert el.annihilator(ann) == a
    for phi in ann.basis:
        assert all(el.dot(phi, v) == 0 for v in a.basis)
    c = el.complement(a)
    assert (a + c).is_full() and (a & c).is_zero()


@given(st.integers(1, 6).flatmap(subspaces))
def test_quotient_map_kernel(a):
    qm = el.quotient_map(a)
    assert len(qm) == a.ambient_dim - a.dim
    if qm:
        assert el.kernel(qm, a.ambient_dim) == a


@given(st.integers(1, 6).flatmap(subspaces), st.data())
def test_coordinates_roundtrip(a, data):
    coeffs = [Fraction(data.draw(st.integers(-3, 3))) for _ in range(a.dim)]
    v = el.combine(coeffs, a.basis, a.ambient_dim)
    assert el.contains(a, v)
    assert list(a.coordinates(v)) == coeffs


@given(matrices(max_rows=4, max_cols=4), st.data())
def test_solve_consistent_system(m, data):
    x0 = [Fraction(data.draw(st.integers(-3, 3))) for _ in range(len(m[0]))]
    b = el.mat_vec(m, x0)
    x = el.solve(m, b)
    assert x is not None and el.mat_vec(m, x) == b


def test_solve_inconsistent():
    assert el.solve([[1, 1], [2, 2]], [1, 3]) is None


def test_span_is_canonical():
    a = el.span([(2, 4, 0), (0, 0, 3)], 3)
    b = el.span([(1, 2, 3), (1, 2, -3), (5, 10, 0)], 3)
    assert a == b
    assert a.basis == ((1, 2, 0), (0, 0, 1))
    assert a.pivots == (0, 2)


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        el.scalar(0.5)
    assert el.scalar("3/4") == Fraction(3, 4)


def test_dimension_mismatch():
    with pytest.raises(el.DimensionError):
        el.span([(1, 2)], 3)
    with pytest.raises(el.DimensionError):
        el.zero(2) + el.zero(3)


def test_complement_within():
    within = el.span([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)], 4)
    a = el.span([(1, 1, 0, 0)], 4)
    c = el.complement(a, within)
    assert c.dim == 2 and c <= within and (a & c).is_zero()
    with pytest.raises(ValueError):
        el.complement(el.span([(0, 0, 0, 1)], 4), within)
