from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from qrv import exactla as la
from qrv.polynomial import (Polynomial, VariableId, format_polynomial, linear_combination,
                            parse_polynomial)

VARS = [VariableId(a, i, j) for a in ("a", "b") for i in (1, 2) for j in (1, 2)]


def to_sympy(p: Polynomial):
    return sympy.sympify(format_polynomial(p, pow_op="**")) if not p.is_zero() else sympy.Integer(0)


@st.composite
def polys(draw, max_terms=4, max_deg=3):
    p = Polynomial()
    for _ in range(draw(st.integers(0, max_terms))):
        c = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 3)))
        m = Polynomial.const(c)
        for _ in range(draw(st.integers(0, max_deg))):
            m = m * Polynomial.var(draw(st.sampled_from(VARS)))
        p = p + m
    return p


def test_variable_names():
    assert VariableId("c", 1, 2).name == "x_c_1_2"
    assert parse_polynomial("x_A1_2_1") == Polynomial.var(VariableId("A1", 2, 1))


def test_format_examples():
    a, d = (Polynomial.var(VariableId("c", i, i)) for i in (1, 2))
    assert format_polynomial(a + d) == "x_c_1_1 + x_c_2_2"
    assert format_polynomial(a * a - d * Fraction(1, 2)) == "x_c_1_1^2 - 1/2*x_c_2_2"
    assert format_polynomial(Polynomial()) == "0"


def test_zero_coefficients_are_dropped():
    a = Polynomial.var(VARS[0])
    assert (a - a).is_zero() and (a - a).terms == {}


@settings(max_examples=100, deadline=None)
@given(polys(), polys())
def test_arithmetic_matches_sympy(p, q):
    assert sympy.expand(to_sympy(p + q) - (to_sympy(p) + to_sympy(q))) == 0
    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0


@settings(max_examples=100, deadline=None)
@given(polys())
def test_parse_roundtrip(p):
    assert parse_polynomial(format_polynomial(p)) == p
    assert parse_polynomial(format_polynomial(p, pow_op="**")) == p


@settings(max_examples=60, deadline=None)
@given(polys(), st.sampled_from(VARS))
def test_derivative_matches_sympy(p, v):
    want = sympy.diff(to_sympy(p), sympy.Symbol(v.name))
    assert sympy.expand(to_sympy(p.derivative(v)) - want) == 0


@settings(max_examples=60, deadline=None)
@given(polys(), st.lists(st.integers(-9, 9), min_size=len(VARS), max_size=len(VARS)))
def test_evaluate_matches_sympy(p, xs):
    values = dict(zip(VARS, xs))
    want = to_sympy(p).subs({sympy.Symbol(v.name): x for v, x in values.items()})
    assert p.evaluate(values, la.QQ) == Fraction(str(want))


def test_degree_and_homogeneity():
    a, b = Polynomial.var(VARS[0]), Polynomial.var(VARS[1])
    assert (a * b + a * a).is_homogeneous() and (a * b + a * a).degree() == 2
    assert not (a + a * b).is_homogeneous()
    assert Polynomial.const(3).degree() == 0


def test_parse_errors():
    for bad in ("x_c_1", "1 +", "(x_c_1_1", "x_c_1_1^-1", "y_1"):
        with pytest.raises(ValueError):
            parse_polynomial(bad)


def test_parse_expressions():
    p = parse_polynomial("(x_c_1_1 + x_c_2_2)^2 - 2*x_c_1_1*x_c_2_2")
    assert format_polynomial(p) == "x_c_1_1^2 + x_c_2_2^2"


def test_linear_combination():
    a, b = Polynomial.var(VARS[0]), Polynomial.var(VARS[1])
    assert linear_combination([a, b], [2, -1]) == a * 2 - b
