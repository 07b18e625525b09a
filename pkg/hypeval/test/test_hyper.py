#!/usr/bin/env python3
"""
Tests for the hypergeometric series engine and Gamma products
"""

import sys
from fractions import Fraction
from pathlib import Path

import mpmath
import pytest

# Add package root to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from hypeval.errors import (
    IllDefined,
    InvalidLowerParameter,
    NoConvergence,
    NonTerminating,
    ParseError,
    PoleAtPoint,
)
from hypeval.exact import LinearForm, RatFunc, la, lb
from hypeval.hyper import (
    GammaProduct,
    SeriesSpec,
    convergence_margin,
    eval_2f1_neg1,
    eval_gamma_product,
    eval_series_numeric,
    extrapolated_sum,
    log_gamma_signed,
    parse_gamma_product,
    pochhammer,
    relative_residual,
    series_term,
    sum_terminating,
)
from hypeval.kummer import KUMMER_RHS

HALF = Fraction(1, 2)


@pytest.mark.exact
class TestPochhammer:
    """Rising factorials as exact polynomials"""

    def test_empty_product(self):
        """Test (a)_0 = 1"""
        assert pochhammer(la, 0).equals(1)

    def test_factorial(self):
        """Test (1)_4 = 4!"""
        assert pochhammer(LinearForm(1), 4).equals(24)

    def test_symbolic(self):
        """Test (a/2-b)_2 = (a/2-b)(a/2-b+1)"""
        x = la / 2 - lb
        assert pochhammer(x, 2).equals(x.to_ratfunc() * (x + 1).to_ratfunc())

    def test_negative_length(self):
        """Test negative lengths are rejected"""
        with pytest.raises(ValueError):
            pochhammer(la, -1)


@pytest.mark.exact
class TestSeriesSpec:
    """SeriesSpec construction and validation"""

    def test_termination_index(self):
        """Test K is the least m over upper parameters equal to -m"""
        spec = SeriesSpec.of([-3, la, -1], [lb])
        assert spec.termination_index() == 1
        assert SeriesSpec.of([HALF, la], [lb]).termination_index() is None

    def test_convergence_margin(self):
        """Test margin is sum(lower) - sum(upper)"""
        spec = SeriesSpec.of([la, lb, 1], [la - lb, 2])
        assert convergence_margin(spec) == LinearForm(1, 0, -2, 0)

    def test_at_point(self):
        """Test evaluating parameters at a point"""
        spec = SeriesSpec.of([la + 1, lb], [la - lb], -1)
        concrete = spec.at({"a": Fraction(2), "b": HALF})
        assert concrete.is_constant()
        assert concrete.upper[0] == LinearForm(3)
        assert str(concrete) == "2F1(3, 1/2; 3/2; -1)"

    def test_series_term(self):
        """Test the k-th term of 2F1(1, -1; 3; -1)"""
        spec = SeriesSpec.of([1, -1], [3], -1)
        assert series_term(spec, 0).equals(1)
        assert series_term(spec, 1).equals(Fraction(1, 3))


@pytest.mark.exact
class TestSumTerminating:
    """Exact summation of terminating series"""

    def test_single_term(self):
        """Test an upper parameter 0 gives exactly 1"""
        assert sum_terminating(SeriesSpec.of([0, la], [lb])).equals(1)

    def test_p1_thm2_form(self):
        """Test 3F2(-1/2, -1, b; -1, a/2; 1) = 1 - b/a"""
        spec = SeriesSpec.of([-HALF, -1, lb], [-1, la / 2])
        expected = RatFunc.one() - lb.to_ratfunc() / la.to_ratfunc()
        assert sum_terminating(spec).equals(expected)

    def test_p2_thm2_form(self):
        """Test 3F2(-1, -3/2, b; -2, a/2; 1) = 1 - 3b/(2a)"""
        spec = SeriesSpec.of([-1, Fraction(-3, 2), lb], [-2, la / 2])
        expected = RatFunc.one() - lb.to_ratfunc() * 3 / (la.to_ratfunc() * 2)
        assert sum_terminating(spec).equals(expected)

    def test_prefactor(self):
        """Test the prefactor multiplies the sum"""
        spec = SeriesSpec.of([-HALF, -1, lb], [-1, la / 2])
        expected = (la - lb).to_ratfunc() / (la * 2).to_ratfunc()
        assert sum_terminating(spec, HALF).equals(expected)

    def test_zero_prefactor_skips_summation(self):
        """Test a zero prefactor returns zero for any series"""
        assert sum_terminating(SeriesSpec.of([HALF], [la]), 0).is_zero()

    def test_non_terminating(self):
        """Test series without a terminating upper parameter"""
        with pytest.raises(NonTerminating):
            sum_terminating(SeriesSpec.of([HALF, HALF], [1]))

    def test_ill_defined(self):
        """Test a lower -m with m below the termination index"""
        with pytest.raises(IllDefined):
            sum_terminating(SeriesSpec.of([-2, 1, 1], [-1, 1]))

    def test_lower_at_termination_index(self):
        """Test a lower -m with m equal to the termination index is allowed"""
        spec = SeriesSpec.of([-1, 1], [-1], 1)
        assert sum_terminating(spec).equals(2)


@pytest.mark.numeric
class TestNumericSeries:
    """Numeric pFq"""

    def test_terminating_kummer_case(self):
        """Test 2F1(1, -1; 3; -1) = 4/3"""
        value = eval_series_numeric(SeriesSpec.of([1, -1], [3], -1))
        assert value.path == "exact"
        assert float(value) == pytest.approx(4 / 3, rel=1e-15)

    def test_exponential(self):
        """Test 0F0(;;1) = e"""
        value = eval_series_numeric(SeriesSpec.of([], [], 1))
        assert float(value) == pytest.approx(float(mpmath.e), rel=1e-14)

    def test_geometric(self):
        """Test 1F0(1;;1/2) = 2"""
        value = eval_series_numeric(SeriesSpec.of([1], [], HALF))
        assert float(value) == pytest.approx(2.0, rel=1e-14)

    def test_gauss_sum(self):
        """Test 2F1(1/2, 1/2; 2; 1) = Gamma(2)Gamma(1)/Gamma(3/2)^2"""
        value = eval_series_numeric(SeriesSpec.of([HALF, HALF], [2], 1))
        expected = 1 / mpmath.gamma(1.5) ** 2
        assert float(value) == pytest.approx(float(expected), rel=1e-12)

    def test_symbolic_without_point(self):
        """Test symbolic parameters need a point"""
        with pytest.raises(ParseError):
            eval_series_numeric(SeriesSpec.of([la], [lb], HALF))

    def test_point_substitution(self):
        """Test evaluating at a point"""
        value = eval_series_numeric(SeriesSpec.of([la], [], HALF), {"a": Fraction(2)})
        assert float(value) == pytest.approx(4.0, rel=1e-14)

    def test_unit_circle_at_minus_one(self):
        """Test 2F1(1, 1; 3; -1) through extrapolation"""
        value = eval_series_numeric(SeriesSpec.of([1, 1], [3], -1))
        assert value.path == "nsum"
        assert float(value) == pytest.approx(float(mpmath.hyp2f1(1, 1, 3, -1)), rel=1e-10)

    def test_extrapolated_sum(self):
        """Test the alternating harmonic series sums to log 2 with an error estimate"""
        def make_term():
            return lambda k: mpmath.mpf(-1) ** int(k) / (int(k) + 1)

        value, error = extrapolated_sum(make_term, 1000)
        assert float(value) == pytest.approx(float(mpmath.log(2)), rel=1e-10)
        assert error < 1e-8

    def test_non_positive_margin(self):
        """Test 2F1(1, 1; 2; 1) is rejected"""
        with pytest.raises(NoConvergence) as exc_info:
            eval_series_numeric(SeriesSpec.of([1, 1], [2], 1))
        assert exc_info.value.margin == 0

    def test_outside_unit_disk(self):
        """Test |z| > 1 diverges"""
        with pytest.raises(NoConvergence):
            eval_series_numeric(SeriesSpec.of([HALF, HALF], [2], 2))

    def test_non_positive_lower(self):
        """Test a non-positive integer lower parameter in a non-terminating series"""
        with pytest.raises(InvalidLowerParameter):
            eval_series_numeric(SeriesSpec.of([HALF], [-2], HALF))


@pytest.mark.numeric
class TestGammaProduct:
    """Gamma products and log-Gamma sign tracking"""

    def test_root_pi(self):
        """Test Gamma(1/2) = sqrt(pi)"""
        value = eval_gamma_product(GammaProduct.ratio([HALF], []))
        assert float(value) == pytest.approx(1.7724538509055159, rel=1e-14)

    def test_kummer_rhs_terminating_point(self):
        """Test the Kummer right-hand side at a=1, b=-1 is 4/3"""
        value = eval_gamma_product(KUMMER_RHS, {"a": Fraction(1), "b": Fraction(-1)})
        assert float(value) == pytest.approx(4 / 3, rel=1e-14)

    def test_pole_in_numerator(self):
        """Test Gamma(0) in the numerator"""
        with pytest.raises(PoleAtPoint):
            eval_gamma_product(GammaProduct.ratio([0], []))

    def test_pole_in_denominator_vanishes(self):
        """Test 1/Gamma at a pole is zero"""
        assert float(eval_gamma_product(GammaProduct.ratio([], [-2]))) == 0.0

    def test_pole_after_vanishing_factor(self):
        """Test a numerator pole listed after a 1/Gamma zero still raises"""
        g = GammaProduct(RatFunc.one(), ((-1, -1), (0, 1)))
        with pytest.raises(PoleAtPoint):
            eval_gamma_product(g)

    def test_pole_with_zero_prefactor(self):
        """Test a zero prefactor does not hide a numerator pole"""
        with pytest.raises(PoleAtPoint):
            eval_gamma_product(GammaProduct.ratio([-2], [], prefactor=0))

    def test_zero_prefactor(self):
        """Test a zero prefactor with regular factors is zero"""
        assert float(eval_gamma_product(GammaProduct.ratio([HALF], [], prefactor=0))) == 0.0

    def test_negative_argument_sign(self):
        """Test Gamma(-1/2) = -2 sqrt(pi) and Gamma(-3/2) > 0"""
        logabs, sign = log_gamma_signed(Fraction(-1, 2))
        assert sign == -1
        assert float(mpmath.exp(logabs)) == pytest.approx(2 * 1.7724538509055159, rel=1e-13)
        assert log_gamma_signed(Fraction(-3, 2))[1] == 1

    def test_reduced(self):
        """Test integer-shifted pairs fold into the prefactor"""
        g = GammaProduct.ratio([la + 2], [la])
        assert g.exact_value().equals(la.to_ratfunc() * (la + 1).to_ratfunc())

    def test_parse(self):
        """Test the G(...) product syntax"""
        g = parse_gamma_product("3/4*G(c)*G(3-c/2)/G(5-c)/G(3c/2-2)")
        assert len(g.factors) == 4
        value = eval_gamma_product(g, {"c": Fraction(5, 2)})
        assert float(value) == pytest.approx(0.75, rel=1e-14)

    @pytest.mark.parametrize("text", ["3/4", "G(a", "G(a)G(b)"])
    def test_parse_rejects(self, text):
        """Test malformed products"""
        with pytest.raises(ParseError):
            parse_gamma_product(text)


@pytest.mark.numeric
class TestTwoFOneAtMinusOne:
    """2F1(A, B; C; -1) with continuation"""

    def test_terminating(self):
        """Test (1, -1; 3) gives 4/3"""
        assert float(eval_2f1_neg1(1, -1, 3)) == pytest.approx(4 / 3, rel=1e-15)

    def test_pfaff_path(self):
        """Test 2F1(1/2, 2; 5/2; -1) = 3/4 through z = 1/2"""
        value = eval_2f1_neg1(HALF, 2, Fraction(5, 2), path="pfaff")
        assert value.path == "pfaff"
        assert float(value) == pytest.approx(0.75, rel=1e-12)

    def test_auto_path(self):
        """Test 2F1(1/2, 2; 5/2; -1) = 3/4 on the default path"""
        assert float(eval_2f1_neg1(HALF, 2, Fraction(5, 2))) == pytest.approx(0.75, rel=1e-9)

    def test_direct_path_non_integer(self):
        """Test the extrapolated z = -1 sum with no terminating parameter"""
        value = eval_2f1_neg1(Fraction(1, 3), Fraction(1, 5), Fraction(2, 15))
        assert value.path == "nsum"
        expected = mpmath.hyp2f1(mpmath.mpf(1) / 3, mpmath.mpf(1) / 5, mpmath.mpf(2) / 15, -1)
        assert float(value) == pytest.approx(float(expected), rel=1e-9)
        assert value.error_estimate < 1e-9

    def test_direct_and_pfaff_agree(self):
        """Test both paths give the same value where both apply"""
        direct = eval_2f1_neg1(Fraction(7, 3), Fraction(1, 4), Fraction(5, 2), path="direct")
        pfaff = eval_2f1_neg1(Fraction(7, 3), Fraction(1, 4), Fraction(5, 2), path="pfaff")
        assert float(direct) == pytest.approx(float(pfaff), rel=1e-9)

    def test_continuation_beyond_direct_domain(self):
        """Test a margin below -1 still evaluates through Pfaff"""
        value = eval_2f1_neg1(Fraction(13, 2), Fraction(1, 4), Fraction(17, 4))
        assert value.path == "pfaff"
        assert mpmath.isfinite(value.value)

    def test_direct_path_divergent(self):
        """Test the direct path refuses margin <= -1"""
        with pytest.raises(NoConvergence):
            eval_2f1_neg1(Fraction(13, 2), Fraction(1, 4), Fraction(17, 4), path="direct")

    def test_invalid_lower(self):
        """Test C a non-positive integer"""
        with pytest.raises(InvalidLowerParameter):
            eval_2f1_neg1(HALF, HALF, 0)

    def test_relative_residual(self):
        """Test |l - r| / max(1, |r|)"""
        assert relative_residual(3.0, 2.0) == pytest.approx(0.5)
        assert relative_residual(0.25, 0.5) == pytest.approx(0.25)
