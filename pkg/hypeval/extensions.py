"""
Generalizations of Gosper's 2F1(1/4) and Dixon's 3F2(1) evaluations, and
the single-Gamma-term evaluations obtained by making P(n) or Q(n) vanish.
"""

import logging
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Tuple

import mpmath

from .errors import InvalidShape, ParseError, VariantOutOfRange
from .exact import (
    Point,
    RatFunc,
    la,
    lb,
    lc,
    parse_rational,
    ratfunc_limit_infinity,
)
from .hyper import (
    GammaProduct,
    NumericValue,
    SeriesSpec,
    eval_2f1_neg1,
    eval_gamma_product,
    eval_series_numeric,
    pochhammer,
    relative_residual,
    series_term,
    sum_terminating,
    to_mpf,
)
from .kummer import CoeffVariant, coeff
from .recurrence import Family, build_recurrence, check_recurrence, numeric_recurrence_residual
from .settings import get_settings
from .transforms import TwoTermKind, eval_transformed, two_term_2f1

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
_GOSPER_ARGUMENT = Fraction(1, 4)


def _factorial(n: int) -> int:
    out = 1
    for j in range(2, n + 1):
        out *= j
    return out


def _ceil_div(n: int, d: int) -> int:
    return -(-n // d)


def _which(which: str, allowed: Tuple[str, str]) -> str:
    which = str(which).upper().replace("~", "").replace("TILDE", "")
    if which not in allowed:
        raise ParseError(f"Coefficient must be one of {allowed}, got {which!r}")
    return which


# Gosper family: 2F1(-a, 1/2; 2a+3/2+n; 1/4)

@lru_cache(maxsize=256)
def gosper_coeff(which: str, n: int) -> RatFunc:
    """K(n) or L(n) from the displayed finite sums"""
    which = _which(which, ("K", "L"))
    if n in (0, 1):
        return RatFunc.coerce(int((which == "K") == (n == 0)))
    if which == "K" and n > 1:
        total = RatFunc.zero()
        for k in range(_ceil_div(n, 3), n // 2 + 1):
            scale = (Fraction(27 ** k, 4 ** k) * n * _factorial(k - 1)
                     / (_factorial(n - 2 * k) * _factorial(3 * k - n)))
            total = total + pochhammer(la + HALF, k) / pochhammer(la + 1, k) * scale
        return total * (-1) ** n
    if which == "L" and n > 1:
        return sum_terminating(_gosper_4f3("L", n))
    m = -n
    if which == "K":
        total = RatFunc.zero()
        for k in range(0, m // 3 + 1):
            scale = (Fraction((-4) ** k, 27 ** k) * m * _factorial(m - 2 * k - 1)
                     / (_factorial(m - 3 * k) * _factorial(k)))
            total = total + pochhammer(-la, k) / pochhammer(HALF - la, k) * scale
        return total
    total = RatFunc.zero()
    for k in range(_ceil_div(m + 1, 3), (m + 1) // 2 + 1):
        scale = (Fraction(27 ** k, 4 ** k) * (m + 1) * _factorial(k - 1)
                 / (_factorial(m - 2 * k + 1) * _factorial(3 * k - m - 1)))
        total = total + pochhammer(-la - HALF, k) / pochhammer(-la, k) * scale
    return total * (-1) ** m


def _gosper_4f3(which: str, n: int) -> SeriesSpec:
    if which == "L" and n > 1:
        return SeriesSpec.of(
            [Fraction(-(n - 1), 3), Fraction(-(n - 2), 3), Fraction(-(n - 3), 3), la + 1],
            [Fraction(-(n - 2), 2), Fraction(-(n - 3), 2), la + Fraction(3, 2)],
        )
    if which == "K" and n < 0:
        m = -n
        return SeriesSpec.of(
            [Fraction(-m, 3), Fraction(-(m - 1), 3), Fraction(-(m - 2), 3), -la],
            [Fraction(-(m - 1), 2), Fraction(-(m - 2), 2), HALF - la],
        )
    raise VariantOutOfRange(f"No 4F3 form of {which}({n})", "4F3", n)


def gosper_coeff_4f3(which: str, n: int) -> RatFunc:
    """The 4F3 form, displayed for L(n), n > 1, and K(n), n < 0"""
    return sum_terminating(_gosper_4f3(_which(which, ("K", "L")), n))


def gosper_weight(which: str, n: int) -> Fraction:
    """Normalization the displayed K, L carry inside the identity"""
    if n in (0, 1):
        return Fraction(1)
    if _which(which, ("K", "L")) == "L" and n < 0:
        return Fraction(-1, 3)
    return Fraction(1, 3)


def gosper_term_ratio(which: str, n: int) -> RatFunc:
    """Ratio of consecutive Gamma terms, G(n+1)/G(n)"""
    if _which(which, ("K", "L")) == "K":
        num = la + Fraction(3, 4) + Fraction(n, 2)
        den = la + HALF + Fraction(n, 3)
        return num.to_ratfunc() / den.to_ratfunc() * Fraction(2, 3)
    num = la + Fraction(3, 4) + Fraction(n, 2)
    den = la + HALF + Fraction(n, 2)
    return num.to_ratfunc() / den.to_ratfunc() * -3


def gosper_gamma(which: str, n: int) -> GammaProduct:
    """Gamma term multiplying K(n) or L(n), without its factor sqrt(2)"""
    shared = [la + Fraction(5, 4) + Fraction(n, 2), la + Fraction(3, 4) + Fraction(n, 2)]
    if _which(which, ("K", "L")) == "K":
        # 2^(n+3/2) / 3^(n+1)
        return GammaProduct.ratio(
            shared + [la + HALF],
            [la + Fraction(7, 6) + Fraction(n, 3), la + Fraction(5, 6) + Fraction(n, 3),
             la + HALF + Fraction(n, 3)],
            Fraction(2) ** (n + 1) / Fraction(3) ** (n + 1),
        )
    # -(-3)^(n-2) 2^(3/2), with (-3)^(n-2) = (-1)^n 3^(n-2)
    return GammaProduct.ratio(
        shared + [la + 1],
        [la + Fraction(3, 2), la + HALF + Fraction(n, 2), la + 1 + Fraction(n, 2)],
        (1 if n % 2 else -1) * Fraction(3) ** (n - 2) * 2,
    )


def check_gosper_recurrence(which: str, n: int) -> RatFunc:
    """Gosper recurrence on G(n) w(n) X(n), divided through by G(n)"""
    rec = build_recurrence(Family.GOSPER)
    c_plus, c_zero, c_minus = rec.coefficients(n)
    upper = gosper_term_ratio(which, n) * gosper_weight(which, n + 1) * gosper_coeff(which, n + 1)
    middle = gosper_coeff(which, n) * gosper_weight(which, n)
    lower = gosper_weight(which, n - 1) * gosper_coeff(which, n - 1) / gosper_term_ratio(which, n - 1)
    return c_plus * upper + c_zero * middle + c_minus * lower


def gosper_lhs(n: int, point: Point, via_pfaff: bool = False) -> NumericValue:
    a = point["a"]
    upper, lower = [-a, HALF], 2 * a + Fraction(3, 2) + n
    if via_pfaff:
        # (3/4)^a 2F1(-a, C-1/2; C; -1/3)
        return eval_transformed(two_term_2f1(TwoTermKind.PFAFF_A, upper + [lower], _GOSPER_ARGUMENT))
    return eval_series_numeric(SeriesSpec.of(upper, [lower], _GOSPER_ARGUMENT))


def gosper_rhs(n: int, point: Point) -> NumericValue:
    settings = get_settings()
    total = mpmath.mpf(0)
    error = mpmath.mpf(0)
    with mpmath.workprec(settings.working_bits):
        for which in ("K", "L"):
            c = gosper_coeff(which, n).evaluate(point) * gosper_weight(which, n)
            if c == 0:
                continue
            g = eval_gamma_product(gosper_gamma(which, n), point)
            total += to_mpf(c) * g.value
            error += abs(to_mpf(c)) * g.error_estimate
        root = mpmath.sqrt(2)
        return NumericValue(total * root, error * root, 0, "gamma")


def gengosper_residual(n: int, point: Point, via_pfaff: bool = False) -> float:
    """Relative residual of the generalized Gosper evaluation"""
    lhs = gosper_lhs(n, point, via_pfaff)
    rhs = gosper_rhs(n, point)
    residual = relative_residual(lhs, rhs)
    logger.debug("gengosper n=%d at %s: lhs=%s rhs=%s residual=%.3e",
                 n, dict(point), lhs.value, rhs.value, residual)
    return residual


def gosper_numeric_recurrence(n: int, point: Point) -> float:
    return numeric_recurrence_residual(build_recurrence(Family.GOSPER), n, point,
                                       lambda m: gosper_lhs(m, point))


# Dixon family: 3F2(a+n, b, c; a-b, a-c; 1)

DIXON_GAMMA_P = GammaProduct.ratio(
    [(la + 1) / 2, la - lb, la - lc, (la + 1) / 2 - lb - lc],
    [la, (la + 1) / 2 - lb, (la + 1) / 2 - lc, la - lb - lc],
)
DIXON_GAMMA_Q = GammaProduct.ratio(
    [la / 2, la - lb, la - lc, la / 2 - lb - lc],
    [la, la / 2 - lb, la / 2 - lc, la - lb - lc],
)


def _dixon_spec(which: str, n: int) -> SeriesSpec:
    if which == "P":
        return SeriesSpec.of([Fraction(-n, 2), Fraction(-(n + 1), 2), lb, lc],
                             [-n, la / 2, (1 - la) / 2 + lb + lc])
    return SeriesSpec.of([Fraction(-(n - 1), 2), Fraction(-n, 2), lb, lc],
                         [-n, (1 + la) / 2, 1 - la / 2 + lb + lc])


@lru_cache(maxsize=256)
def dixon_coeff(which: str, n: int) -> RatFunc:
    """P~(n) or Q~(n); P~(-1) = 2 so the factor 1/2 gives Dixon's sum at n = -1"""
    which = _which(which, ("P", "Q"))
    if n >= 0:
        return sum_terminating(_dixon_spec(which, n))
    if n == -1:
        return RatFunc.coerce(2 if which == "P" else 0)
    m = -n - 1
    denominator = pochhammer(1 - lb, m) * pochhammer(1 - lc, m)
    if which == "P":
        prefactor = (pochhammer(1 - la / 2, m) * pochhammer((1 + la) / 2 - lb - lc, m)
                     / denominator * 4 ** m)
        spec = SeriesSpec.of([Fraction(-m, 2), Fraction(-(m - 1), 2), lb - m, lc - m],
                             [1 - m, la / 2 - m, (1 - la) / 2 + lb + lc - m])
    else:
        prefactor = (pochhammer((1 - la) / 2, m) * pochhammer(la / 2 - lb - lc, m)
                     / denominator * -(4 ** m))
        spec = SeriesSpec.of([Fraction(-(m - 1), 2), Fraction(-(m - 2), 2), lb - m, lc - m],
                             [1 - m, (1 + la) / 2 - m, 1 - la / 2 + lb + lc - m])
    return sum_terminating(spec, prefactor)


def check_dixon_recurrence(which: str, n: int) -> RatFunc:
    values = tuple(dixon_coeff(which, m) for m in (n + 1, n, n - 1))
    return check_recurrence(build_recurrence(Family.DIXON), values, n)


def dixon_lhs(n: int, point: Point) -> NumericValue:
    a, b, c = point["a"], point["b"], point["c"]
    return eval_series_numeric(SeriesSpec.of([a + n, b, c], [a - b, a - c]))


def dixon_rhs(n: int, point: Point) -> NumericValue:
    total = mpmath.mpf(0)
    error = mpmath.mpf(0)
    with mpmath.workprec(get_settings().working_bits):
        for which, gamma_term in (("P", DIXON_GAMMA_P), ("Q", DIXON_GAMMA_Q)):
            c = dixon_coeff(which, n).evaluate(point) / 2
            if c == 0:
                continue
            g = eval_gamma_product(gamma_term, point)
            total += to_mpf(c) * g.value
            error += abs(to_mpf(c)) * g.error_estimate
    return NumericValue(total, error, 0, "gamma")


def gendixon_residual(n: int, point: Point) -> float:
    """Relative residual of the generalized Dixon evaluation"""
    lhs = dixon_lhs(n, point)
    rhs = dixon_rhs(n, point)
    residual = relative_residual(lhs, rhs)
    logger.debug("gendixon n=%d at %s: residual=%.3e", n, dict(point), residual)
    return residual


def dixon_numeric_recurrence(n: int, point: Point) -> float:
    return numeric_recurrence_residual(build_recurrence(Family.DIXON), n, point,
                                       lambda m: dixon_lhs(m, point))


def dixon_kummer_limit(which: str, n: int, max_k: int = 2) -> bool:
    """
    As c grows, P~(n) tends to 2 P(n) and Q~(n) to 2 Q(n) (THM2 forms).
    Checked term by term for k <= max_k and for the whole sum.
    """
    which = _which(which, ("P", "Q"))
    if n < 0:
        raise VariantOutOfRange("The limit is compared with THM2, defined for n >= 0", "THM2", n)
    dixon = _dixon_spec(which, n)
    kummer = SeriesSpec(dixon.upper[:3], dixon.lower[:2])
    for k in range(0, min(max_k, dixon.termination_index()) + 1):
        if not ratfunc_limit_infinity(series_term(dixon, k), "c").equals(series_term(kummer, k)):
            logger.warning("Term %d of %s~(%d) does not reduce to THM2", k, which, n)
            return False
    whole = ratfunc_limit_infinity(dixon_coeff(which, n), "c")
    return whole.equals(coeff(which, n, CoeffVariant.THM2) * 2)


# Single-Gamma-term evaluations

class SpecialKind(str, Enum):
    Q4_ZERO = "Q4_ZERO"
    SPECFO1 = "SPECFO1"
    SPECFO2 = "SPECFO2"
    CONTIG_SPECFO1 = "CONTIG_SPECFO1"
    P5_ZERO = "P5_ZERO"


# Q(-4) in factored form; the constant -2 is what the recurrence gives from Q(-2), Q(-3)
Q4_FACTORED = (
    (la - 1).to_ratfunc() * (la - 3).to_ratfunc() * (2 * la - lb - 7).to_ratfunc() * -2
    / ((lb - 1).to_ratfunc() * (lb - 2).to_ratfunc() * (lb - 3).to_ratfunc())
)

# 3/4 Gamma(c) Gamma(3-c/2) / (Gamma(5-c) Gamma(3c/2-2))
SPECFO1_RHS = GammaProduct.ratio([lc, 3 - lc / 2], [5 - lc, 3 * lc / 2 - 2], Fraction(3, 4))


def specfo2_parameters(t) -> Tuple[Fraction, Fraction, Fraction]:
    """(A, B, C) of the t-parametrized 2F1(A, B; C; -1)"""
    t = parse_rational(t)
    d = t * t - 2
    if d == 0:
        raise InvalidShape("t^2 = 2 is excluded")
    return (-(2 * t * t - 7 * t + 6) / d, (t * t + 4 * t - 8) / d, (2 * t * t + 3 * t - 8) / d)


def specfo2_rhs(t) -> GammaProduct:
    t = parse_rational(t)
    d = t * t - 2
    if t in (0, 1):
        raise InvalidShape(f"t={t} makes the prefactor singular")
    prefactor = (t * t + 3 * t - 6) / (t * (t - 1))
    return GammaProduct.ratio(
        [(3 * t - 4) / d, (t * t + 7 * t - 12) / (2 * d)],
        [(7 * t - 10) / d, t * (t - 1) / (2 * d)],
        prefactor,
    )


def p5_curve_point(t) -> Point:
    """(a, b) on 2a^2 - 4ab + b^2 - 12a + 17b + 12 = 0"""
    A, B, _ = specfo2_parameters(t)
    return {"a": A + 5, "b": B}


def p5_curve(point: Point) -> Fraction:
    a, b = point["a"], point["b"]
    return 2 * a * a - 4 * a * b + b * b - 12 * a + 17 * b + 12


def _q4_zero(param) -> float:
    q4 = coeff("Q", -4, CoeffVariant.NEG)
    if not q4.equals(Q4_FACTORED):
        logger.warning("Q(-4) differs from its factored form: %s", q4)
        return 1.0
    restricted = q4.substitute({"b": 2 * la - 7})
    if not restricted.is_zero():
        logger.warning("Q(-4) does not vanish on b = 2a-7: %s", restricted)
        return 1.0
    return 0.0


def _specfo1(param) -> float:
    c = parse_rational(param)
    lhs = eval_2f1_neg1(3 - c, 7 - 2 * c, c)
    return relative_residual(lhs, eval_gamma_product(SPECFO1_RHS, {"c": c}))


def _contig_specfo1(param) -> float:
    c = parse_rational(param)
    lhs = eval_2f1_neg1(3 - c, 7 - 2 * c, c)
    rhs = eval_2f1_neg1(4 - c, 5 - 2 * c, c).scaled(Fraction(3, 4))
    return relative_residual(lhs, rhs)


def _specfo2(param) -> float:
    A, B, C = specfo2_parameters(param)
    return relative_residual(eval_2f1_neg1(A, B, C), eval_gamma_product(specfo2_rhs(param)))


def _p5_zero(param) -> float:
    point = p5_curve_point(param)
    if p5_curve(point) != 0:
        logger.warning("Point %s is off the curve", point)
        return 1.0
    value = coeff("P", -5, CoeffVariant.NEG).evaluate(point)
    if value != 0:
        logger.warning("P(-5) = %s on the curve at t=%s", value, param)
        return 1.0
    return 0.0


_SPECIAL: dict = {
    SpecialKind.Q4_ZERO: _q4_zero,
    SpecialKind.SPECFO1: _specfo1,
    SpecialKind.SPECFO2: _specfo2,
    SpecialKind.CONTIG_SPECFO1: _contig_specfo1,
    SpecialKind.P5_ZERO: _p5_zero,
}

# Parameter used when a check is run without one
SPECIAL_DEFAULTS = {
    SpecialKind.Q4_ZERO: None,
    SpecialKind.SPECFO1: Fraction(5, 2),
    SpecialKind.SPECFO2: Fraction(3),
    SpecialKind.CONTIG_SPECFO1: Fraction(11, 4),
    SpecialKind.P5_ZERO: Fraction(3),
}


def parse_special_kind(text: str) -> SpecialKind:
    try:
        return SpecialKind(str(text).upper().replace("-", "_"))
    except ValueError:
        raise ParseError(f"Unknown special evaluation: {text!r}") from None


def special_evaluations(kind, param=None) -> float:
    """
    Residual of one single-Gamma-term evaluation.

    Q4_ZERO and P5_ZERO are exact and return 0.0 exactly when the vanishing
    holds; the others return a numeric relative residual.
    """
    kind = kind if isinstance(kind, SpecialKind) else parse_special_kind(kind)
    if param is None:
        param = SPECIAL_DEFAULTS[kind]
    return _SPECIAL[kind](param)
