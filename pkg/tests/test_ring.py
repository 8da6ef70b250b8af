from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from birackforge import LaurentPoly, ModMatrix, RingMatrix, parse_poly, render_poly
from birackforge.errors import NotAUnit, NotInvertibleOverRing, ParseError, VariableMismatch

from oracles import matrix_to_sympy, to_sympy

V = ("a", "b")

polys = st.dictionaries(
    st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
    st.integers(-4, 4),
    max_size=4,
).map(lambda t: LaurentPoly(t, V))


@settings(max_examples=150, deadline=None)
@given(polys, polys)
def test_arithmetic_matches_sympy(p, q):
    for got, want in (
        (p + q, to_sympy(p) + to_sympy(q)),
        (p - q, to_sympy(p) - to_sympy(q)),
        (p * q, to_sympy(p) * to_sympy(q)),
    ):
        assert sp.expand(to_sympy(got) - want) == 0


@settings(max_examples=100, deadline=None)
@given(polys)
def test_render_parse_roundtrip(p):
    assert parse_poly(render_poly(p), V) == p
    assert parse_poly(render_poly(p, compact=True), V) == p


def test_canonical_rendering():
    p = parse_poly("-A^-2 - A^2", ("A",))
    assert render_poly(p) == "-A^2 - A^-2"
    assert render_poly(LaurentPoly.constant(0, ("A",))) == "0"
    assert render_poly(parse_poly("2*y^2", ("y",))) == render_poly(parse_poly("2y^2", ("y",)))


def test_units_and_inverse():
    a = LaurentPoly.var("a", V)
    u = -(a ** -3) * Fraction(2, 3)
    assert u.is_unit()
    assert u * u.inverse() == 1
    with pytest.raises(NotAUnit):
        (a + 1).inverse()
    with pytest.raises(NotAUnit):
        LaurentPoly.constant(0, V).inverse()


def test_powers():
    a = LaurentPoly.var("a", V)
    assert a ** 0 == 1
    assert (a ** -2) * (a ** 2) == 1
    with pytest.raises(NotAUnit):
        (a + 1) ** -1


def test_variable_lists_must_agree():
    with pytest.raises(VariableMismatch):
        LaurentPoly.var("a", ("a",)) + LaurentPoly.var("b", ("b",))


def test_parse_errors():
    for bad in ("a^", "a + * b", "a^x", "(a"):
        with pytest.raises(ParseError):
            parse_poly(bad, V)


def test_matrix_inverse_over_laurent_ring():
    m = RingMatrix.from_rows([["A", 0, 0, 0], [0, 0, "A^-1", 0], [0, "A^-1", "A - A^-3", 0], [0, 0, 0, "A"]], ("A",))
    inv = m.inverse()
    assert m @ inv == m.eye(4)
    assert sp.simplify(matrix_to_sympy(inv) - matrix_to_sympy(m).inv()) == sp.zeros(4, 4)


def test_non_unit_determinant_refused():
    m = RingMatrix.from_rows([["a", 1], [1, "b"]], V)
    with pytest.raises(NotInvertibleOverRing):
        m.inverse()


def test_kron_matches_sympy():
    x = RingMatrix.from_rows([[1, "a"], [0, "b^-1"]], V)
    y = RingMatrix.from_rows([[0, 1], ["a", 2]], V)
    want = sp.kronecker_product(matrix_to_sympy(x), matrix_to_sympy(y))
    assert sp.expand(matrix_to_sympy(x.kron(y)) - want) == sp.zeros(4, 4)


def test_trace_and_shapes():
    m = RingMatrix.from_rows([["a", 1], [2, "b"]], V)
    assert m.trace() == parse_poly("a + b", V)
    with pytest.raises(Exception):
        m @ RingMatrix.from_rows([[1, 2, 3]], V)


def test_mod_matrix_inverse():
    m = ModMatrix.from_rows([[2, 1], [1, 1]], 5)
    assert m @ m.inverse() == ModMatrix.identity(2, 5)
    with pytest.raises(NotInvertibleOverRing):
        ModMatrix.from_rows([[1, 2], [2, 4]], 5).inverse()


def test_json_roundtrip():
    m = RingMatrix.from_rows([["-a^2 + b", 0], [1, "a^-1"]], V)
    assert RingMatrix.from_rows(m.to_json(), V) == m
