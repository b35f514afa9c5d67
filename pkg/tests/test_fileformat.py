from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from respect_kit import catalog as cat
from respect_kit import fileformat as ff
from respect_kit import liealg as la

NAMES = ("x1", "x2", "x3", "y", "z'")


@given(st.lists(st.fractions(min_value=-7, max_value=7, max_denominator=5), min_size=5, max_size=5))
def test_combination_roundtrip(coeffs):
    v = tuple(Fraction(c) for c in coeffs)
    text = ff.format_combination(v, NAMES)
    assert ff.parse_combination(text, NAMES) == v


@pytest.mark.parametrize("text, want", [
    ("x2 + x3", (0, 1, 1, 0, 0)),
    ("-1/2*x1", (Fraction(-1, 2), 0, 0, 0, 0)),
    ("x1-x2", (1, -1, 0, 0, 0)),
    ("3 y - 2/3*z'", (0, 0, 0, 3, Fraction(-2, 3))),
    ("x1 + x1", (2, 0, 0, 0, 0)),
    ("0", (0, 0, 0, 0, 0)),
])
def test_parse_combination(text, want):
    assert ff.parse_combination(text, NAMES) == tuple(Fraction(x) for x in want)


@pytest.mark.parametrize("text", ["", "x1 x2", "w", "2", "x1 + ", "1.5*x1", "x1 * * x2"])
def test_parse_combination_errors(text):
    with pytest.raises(ff.ParseError):
        ff.parse_combination(text, NAMES)


@pytest.mark.parametrize("name", cat.names())
def test_catalog_text_roundtrip_is_bit_exact(name):
    text = cat.entry(name).text()
    g = ff.loads(text)
    assert ff.dumps(g) == text
    assert ff.loads(ff.dumps(g)) == g


def test_comments_and_default_basis():
    g = ff.loads("# heisenberg\ndim 3   # three\nbracket x1 x2 = x3\n")
    assert g.basis_names == ("x1", "x2", "x3")
    assert g.bracket(g.basis_vector(0), g.basis_vector(1)) == (0, 0, 1)


@pytest.mark.parametrize("text, line", [
    ("basis a b\nfoo a\n", 2),
    ("basis a b c\nbracket b a = c\n", 2),
    ("basis a b c\nbracket a b = c\nbracket a b = c\n", 3),
    ("basis a b c\nbracket a b = d\n", 2),
    ("basis a b\ndim x\n", 2),
    ("basis a b c\nbracket a b c\n", 2),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ff.ParseError) as info:
        ff.loads(text)
    assert info.value.line == line


def test_dimension_disagreement():
    with pytest.raises(ff.ParseError):
        ff.loads("dim 4\nbasis a b c\n")
    with pytest.raises(ff.ParseError):
        ff.loads("name empty\n")


def test_jacobi_checked_on_load():
    text = "basis a b c\nbracket a b = c\nbracket b c = a\nbracket a c = a\n"
    with pytest.raises(la.JacobiViolation):
        ff.loads(text)
    assert not la.validate(ff.loads(text, validate=False)).ok


def test_parse_gram():
    assert ff.parse_gram("2 1  # row one\n1 1/2\n") == ((2, 1), (1, Fraction(1, 2)))
    with pytest.raises(ff.ParseError):
        ff.parse_gram("1 0\n0\n")
    with pytest.raises(ff.ParseError):
        ff.parse_gram("1 a\n0 1\n")


def test_file_io(tmp_path):
    g = cat.load("L6_14")
    p = tmp_path / "g.alg"
    ff.dump(g, p)
    assert ff.load(p) == g
    assert "bracket x3 x4 = -1*x6" in p.read_text()
