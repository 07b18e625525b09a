#!/usr/bin/env python3
"""
Tests for exact rational, polynomial and rational-function arithmetic
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

# Add package root to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from hypeval.errors import DivisionByZero, InvalidShape, ParseError, PoleAtPoint
from hypeval.exact import (
    LinearForm,
    MultiPoly,
    RatFunc,
    format_rational,
    la,
    lb,
    parse_linear_form,
    parse_point,
    parse_rational,
    ratfunc_arith,
    ratfunc_equal,
    ratfunc_eval,
    ratfunc_limit_infinity,
    ratfunc_substitute,
)

pytestmark = pytest.mark.exact

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def rf(text: str) -> RatFunc:
    return RatFunc.coerce(text)


class TestRationals:
    """Rational literal parsing and printing"""

    @pytest.mark.parametrize("text,expected", [
        ("3/4", Fraction(3, 4)),
        ("-1/2", Fraction(-1, 2)),
        ("+5", Fraction(5)),
        ("0.25", Fraction(1, 4)),
        (" 7 ", Fraction(7)),
    ])
    def test_parse_rational(self, text, expected):
        """Test p/q and decimal literals parse exactly"""
        assert parse_rational(text) == expected

    @pytest.mark.parametrize("text", ["x", "1/0", "", "1//2"])
    def test_parse_rational_rejects(self, text):
        """Test malformed literals raise ParseError"""
        with pytest.raises(ParseError) as exc_info:
            parse_rational(text)
        assert exc_info.value.exit_code == 2

    def test_format_rational(self):
        """Test integers print without denominator"""
        assert format_rational(Fraction(4)) == "4"
        assert format_rational(Fraction(-3, 4)) == "-3/4"


class TestLinearForm:
    """Linear forms q0 + qa*a + qb*b + qc*c"""

    def test_parse_mixed_form(self):
        """Test symbols with rational coefficients and a constant"""
        form = parse_linear_form("a/2-b+1/4")
        assert form == LinearForm(Fraction(1, 4), Fraction(1, 2), Fraction(-1), Fraction(0))

    def test_parse_integer_coefficients(self):
        """Test 2a-3 and 3*c forms"""
        assert parse_linear_form("2a-3") == la * 2 - 3
        assert parse_linear_form("3*c") == LinearForm(0, 0, 0, 3)

    def test_string_form(self):
        """Test printing matches the parse syntax"""
        assert str(parse_linear_form("a/2-b+1/4")) == "a/2-b+1/4"
        assert str(LinearForm()) == "0"

    @pytest.mark.parametrize("text", ["", "a+", "d", "a**2", "1/0*a"])
    def test_parse_rejects(self, text):
        """Test malformed forms raise ParseError"""
        with pytest.raises(ParseError):
            parse_linear_form(text)

    def test_nonpositive_integer(self):
        """Test detection of constant non-positive integers"""
        assert LinearForm(-3).nonpositive_integer() == 3
        assert LinearForm(0).nonpositive_integer() == 0
        assert LinearForm(Fraction(-1, 2)).nonpositive_integer() is None
        assert (la - 3).nonpositive_integer() is None

    def test_substitute(self):
        """Test exact composition with other linear forms"""
        form = la / 2 - lb
        assert form.substitute({"a": la - 4, "b": lb - 2}) == la / 2 - lb

    def test_constant_value_of_symbolic_form(self):
        """Test constant_value rejects symbolic forms"""
        with pytest.raises(InvalidShape):
            (la + 1).constant_value()


class TestRatFunc:
    """Rational-function arithmetic and equality"""

    def test_add(self):
        """Test add(a, b) is a+b"""
        assert ratfunc_arith("add", "a", "b").equals(rf("a+b"))

    def test_field_inverse(self):
        """Test f * (1/f) is 1"""
        f = rf("a-b") / rf("2a")
        assert ratfunc_equal(ratfunc_arith("mul", f, ratfunc_arith("div", 1, f)), 1)

    def test_difference_of_squares(self):
        """Test (a^2-b^2)/(a-b) - (a+b) is 0"""
        square = rf("a") * rf("a") - rf("b") * rf("b")
        assert ratfunc_arith("sub", square / rf("a-b"), rf("a+b")).equals(0)

    def test_equal_up_to_common_factor(self):
        """Test (a^2-ab)/(2a^2) equals (a-b)/(2a)"""
        left = (rf("a") * rf("a") - rf("a") * rf("b")) / (rf("a") * rf("a") * 2)
        assert ratfunc_equal(left, rf("a-b") / rf("2a"))
        assert not ratfunc_equal(left, rf("a+b") / rf("2a"))

    def test_neg(self):
        """Test unary negation"""
        assert ratfunc_arith("neg", "a-b").equals(rf("b-a"))

    def test_unknown_operation(self):
        """Test dispatch rejects unknown names"""
        with pytest.raises(ValueError):
            ratfunc_arith("pow", "a", "b")

    def test_division_by_zero(self):
        """Test division by the zero function"""
        with pytest.raises(DivisionByZero):
            RatFunc.one() / RatFunc.zero()
        with pytest.raises(ZeroDivisionError):
            RatFunc.one() / 0

    @pytest.mark.parametrize("num,den,point,expected", [
        ("a-b", "2a", {"a": Fraction(3), "b": Fraction(1)}, Fraction(1, 3)),
        ("a-2", "b-1", {"a": Fraction(2), "b": Fraction(5)}, Fraction(0)),
    ])
    def test_eval(self, num, den, point, expected):
        """Test evaluation at rational points"""
        value = rf(num) / rf(den)
        assert ratfunc_eval(value, point) == expected

    def test_eval_pole(self):
        """Test a vanishing denominator raises PoleAtPoint"""
        with pytest.raises(PoleAtPoint):
            ratfunc_eval(RatFunc.one() / rf("b-1"), {"a": Fraction(0), "b": Fraction(1)})

    def test_substitute(self):
        """Test symbol replacement by linear forms"""
        f = rf("a-2") / rf("b-1")
        assert ratfunc_substitute(f, {"b": "a-1"}).equals(1)

    def test_substitute_annihilating_denominator(self):
        """Test substitution that zeroes the denominator"""
        with pytest.raises(DivisionByZero):
            ratfunc_substitute(RatFunc.one() / rf("b-1"), {"b": 1})

    def test_limit_infinity(self):
        """Test limits in c for equal and lower degrees"""
        f = (rf("a") * rf("c") + 1) / rf("2c+b")
        assert ratfunc_limit_infinity(f, "c").equals(rf("a/2"))
        assert ratfunc_limit_infinity(RatFunc.one() / rf("c"), "c").is_zero()
        with pytest.raises(InvalidShape):
            ratfunc_limit_infinity(rf("c") * rf("c") / rf("c+1"), "c")

    def test_constant_value(self):
        """Test constants and symbolic functions"""
        assert (rf("a") / rf("a")).constant_value() == 1
        with pytest.raises(InvalidShape):
            rf("a").constant_value()

    def test_polynomial_printing(self):
        """Test expanded printing in graded order"""
        a, b = MultiPoly.symbol("a"), MultiPoly.symbol("b")
        poly = a * a - b.scale(2) + MultiPoly.constant(1)
        assert str(poly) == "a^2 - 2*b + 1"
        assert str(RatFunc.zero()) == "0"


class TestPoint:
    """Evaluation point parsing"""

    def test_parse_point(self):
        """Test name=value lists"""
        assert parse_point("a=3,b=1/4") == {"a": Fraction(3), "b": Fraction(1, 4)}
        assert parse_point("") == {}

    @pytest.mark.parametrize("text", ["x=1", "a3", "a=q"])
    def test_parse_point_rejects(self, text):
        """Test unknown symbols and malformed items"""
        with pytest.raises(ParseError):
            parse_point(text)


class TestEvaluationHomomorphism:
    """Evaluation commutes with exact arithmetic"""

    @hyp_settings(max_examples=50, deadline=None)
    @given(a=rationals, b=rationals, c=rationals)
    def test_product_then_evaluate(self, a, b, c):
        """Test eval(f*g + h) = eval(f)*eval(g) + eval(h) for polynomials"""
        point = {"a": a, "b": b, "c": c}
        f, g, h = rf("2a-b+1/3"), rf("c-a/5"), rf("b+7")
        combined = f * g + h
        assert combined.evaluate(point) == f.evaluate(point) * g.evaluate(point) + h.evaluate(point)

    @hyp_settings(max_examples=50, deadline=None)
    @given(a=rationals, b=rationals)
    def test_linear_form_evaluation(self, a, b):
        """Test linear forms evaluate like their polynomial image"""
        form = parse_linear_form("a/2-b+1/4")
        point = {"a": a, "b": b}
        assert form.evaluate(point) == form.to_ratfunc().evaluate(point)
