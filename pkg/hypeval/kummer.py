"""
Coefficients P(n), Q(n) of the generalized Kummer evaluation

    2F1(a+n, b; a-b; -1) = P(n) * G_P(a, b) + Q(n) * G_Q(a, b)

with the Gamma terms G_P, G_Q below, plus the expansion checks that
evaluate the same left-hand side by independent series.
"""

import logging
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

import mpmath

from .errors import InvalidShape, NoConvergence, ParseError, PoleAtPoint, VariantOutOfRange
from .exact import Point, RatFunc, la, lb, parse_rational
from .hyper import (
    GammaProduct,
    NumericValue,
    SeriesSpec,
    eval_2f1_neg1,
    eval_gamma_product,
    eval_series_numeric,
    extrapolated_sum,
    pochhammer,
    relative_residual,
    sum_terminating,
    to_mpf,
)
from .settings import get_settings

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


class CoeffVariant(str, Enum):
    THM1 = "THM1"
    THM2 = "THM2"
    NEG = "NEG"
    ALT_A = "ALT_A"
    ALT_B = "ALT_B"
    ALT_C = "ALT_C"
    ALT_D = "ALT_D"
    REFLECT = "REFLECT"


# (least n, greatest n, which) for each variant; None means unbounded
VALIDITY: Dict[CoeffVariant, Tuple[Optional[int], Optional[int], str]] = {
    CoeffVariant.THM1: (-1, None, "PQ"),
    CoeffVariant.THM2: (0, None, "PQ"),
    CoeffVariant.ALT_A: (0, None, "P"),
    CoeffVariant.ALT_B: (0, None, "P"),
    CoeffVariant.ALT_C: (0, None, "Q"),
    CoeffVariant.ALT_D: (0, None, "Q"),
    CoeffVariant.NEG: (None, -1, "PQ"),
    CoeffVariant.REFLECT: (None, -1, "PQ"),
}

# Gamma(a-b) Gamma((a+1)/2) / (Gamma(a) Gamma((a+1)/2 - b))
GAMMA_P = GammaProduct.ratio([la - lb, (la + 1) / 2], [la, (la + 1) / 2 - lb])
# Gamma(a-b) Gamma(a/2) / (Gamma(a) Gamma(a/2 - b))
GAMMA_Q = GammaProduct.ratio([la - lb, la / 2], [la, la / 2 - lb])
# Right-hand side of Kummer's identity for 2F1(a, b; 1+a-b; -1)
KUMMER_RHS = GammaProduct.ratio([la - lb + 1, la / 2 + 1], [la + 1, la / 2 - lb + 1])


def _floor_ceil(n: int) -> Tuple[int, int]:
    return n // 2, -(-n // 2)


def _factorial(n: int) -> Fraction:
    out = Fraction(1)
    for j in range(2, n + 1):
        out *= j
    return out


def parse_variant(text: str) -> CoeffVariant:
    try:
        return CoeffVariant(str(text).upper().replace("-", "_"))
    except ValueError:
        raise ParseError(f"Unknown coefficient variant: {text!r}") from None


def default_variant(n: int) -> CoeffVariant:
    return CoeffVariant.THM1 if n >= -1 else CoeffVariant.NEG


def check_range(which: str, n: int, variant: CoeffVariant) -> None:
    low, high, families = VALIDITY[variant]
    if which not in families:
        raise VariantOutOfRange(f"Variant {variant.value} gives no {which}(n)", variant.value, n)
    if (low is not None and n < low) or (high is not None and n > high):
        raise VariantOutOfRange(
            f"Variant {variant.value} is valid for n in [{low}, {high}], got n={n}",
            variant.value, n,
        )


def _thm1(which: str, n: int) -> RatFunc:
    scale = Fraction(1, 2 ** (n + 1))
    if which == "P":
        spec = SeriesSpec.of([Fraction(-n, 2), Fraction(-(n + 1), 2), la / 2 - lb],
                             [HALF, la / 2])
        return sum_terminating(spec, scale)
    spec = SeriesSpec.of([Fraction(-(n - 1), 2), Fraction(-n, 2), (la + 1) / 2 - lb],
                         [Fraction(3, 2), (la + 1) / 2])
    return sum_terminating(spec, scale * (n + 1))


def _thm2(which: str, n: int) -> RatFunc:
    if which == "P":
        spec = SeriesSpec.of([Fraction(-n, 2), Fraction(-(n + 1), 2), lb], [-n, la / 2])
    else:
        spec = SeriesSpec.of([Fraction(-(n - 1), 2), Fraction(-n, 2), lb], [-n, (la + 1) / 2])
    return sum_terminating(spec, HALF)


def _neg(which: str, n: int) -> RatFunc:
    m = -n - 1
    if which == "P":
        prefactor = pochhammer(1 - la / 2, m) / pochhammer(1 - lb, m) * 2 ** m
        spec = SeriesSpec.of([Fraction(-m, 2), Fraction(-(m - 1), 2), la / 2 - lb],
                             [HALF, la / 2 - m])
    else:
        prefactor = pochhammer((1 - la) / 2, m) / pochhammer(1 - lb, m) * (-m * 2 ** m)
        spec = SeriesSpec.of([Fraction(-(m - 1), 2), Fraction(-(m - 2), 2), (la + 1) / 2 - lb],
                             [Fraction(3, 2), (la + 1) / 2 - m])
    return sum_terminating(spec, prefactor)


def _alt(variant: CoeffVariant, n: int) -> RatFunc:
    fl, ce = _floor_ceil(n)
    if variant is CoeffVariant.ALT_A:
        prefactor = pochhammer((1 - la) / 2 + lb, ce) * (_factorial(fl) / (2 * _factorial(n)))
        spec = SeriesSpec.of([-ce, (la + 1) / 2 + fl, la / 2 - lb],
                             [la / 2, (la + 1) / 2 - ce - lb])
    elif variant is CoeffVariant.ALT_B:
        prefactor = pochhammer(lb, ce) / pochhammer(la / 2, ce) * Fraction(1, 2 ** (n + 1))
        spec = SeriesSpec.of([-ce, 1 + fl, la / 2 - lb], [HALF, 1 - lb - ce])
    elif variant is CoeffVariant.ALT_C:
        prefactor = pochhammer(1 - la / 2 + lb, fl) * (_factorial(ce) / (2 * _factorial(n)))
        spec = SeriesSpec.of([-fl, la / 2 + ce, (la + 1) / 2 - lb],
                             [(la + 1) / 2, la / 2 - fl - lb])
    else:
        prefactor = (pochhammer(lb, fl) / pochhammer((la + 1) / 2, fl)
                     * Fraction(n + 1, 2 ** (n + 1)))
        spec = SeriesSpec.of([-fl, 1 + ce, (la + 1) / 2 - lb], [Fraction(3, 2), 1 - lb - fl])
    return sum_terminating(spec, prefactor)


def reflect_thm3(which: str, n: int) -> RatFunc:
    """P(-n-1, a, b) or Q(-n-1, a, b) from the THM1 value at n-1 with a -> a-2n, b -> b-n"""
    which = which.upper()
    if n < 0:
        raise VariantOutOfRange("Reflection needs n >= 0", CoeffVariant.REFLECT.value, n)
    shifted = coeff(which, n - 1, CoeffVariant.THM1).substitute({"a": la - 2 * n, "b": lb - n})
    if which == "P":
        prefactor = pochhammer(1 - la / 2, n) / pochhammer(1 - lb, n) * 4 ** n
    else:
        prefactor = pochhammer((1 - la) / 2, n) / pochhammer(1 - lb, n) * -(4 ** n)
    return prefactor * shifted


@lru_cache(maxsize=1024)
def _coeff_cached(which: str, n: int, variant: CoeffVariant) -> RatFunc:
    if variant is CoeffVariant.THM1:
        return _thm1(which, n)
    if variant is CoeffVariant.THM2:
        return _thm2(which, n)
    if variant is CoeffVariant.NEG:
        return _neg(which, n)
    if variant is CoeffVariant.REFLECT:
        return reflect_thm3(which, -n - 1)
    return _alt(variant, n)


def coeff(which: str, n: int, variant: Optional[CoeffVariant] = None) -> RatFunc:
    """Exact P(n) or Q(n) as a rational function of a, b"""
    which = which.upper()
    if which not in ("P", "Q"):
        raise ParseError(f"Coefficient must be P or Q, got {which!r}")
    variant = default_variant(n) if variant is None else CoeffVariant(variant)
    check_range(which, n, variant)
    return _coeff_cached(which, n, variant)


def variants_for(which: str, n: int) -> List[CoeffVariant]:
    """Every variant that defines which(n)"""
    out = []
    for variant in CoeffVariant:
        try:
            check_range(which.upper(), n, variant)
        except VariantOutOfRange:
            continue
        out.append(variant)
    return out


def coeff_table(n_values: Iterable[int],
                variant: Optional[CoeffVariant] = None) -> List[Tuple[int, RatFunc, RatFunc]]:
    """Rows (n, P(n), Q(n))"""
    rows = []
    for n in n_values:
        rows.append((n, coeff("P", n, variant), coeff("Q", n, variant)))
    return rows


def genkum_rhs(n: int, point: Point, variant: Optional[CoeffVariant] = None) -> NumericValue:
    """P(n) G_P + Q(n) G_Q at a rational point"""
    p = coeff("P", n, variant).evaluate(point)
    q = coeff("Q", n, variant).evaluate(point)
    total = mpmath.mpf(0)
    error = mpmath.mpf(0)
    with mpmath.workprec(get_settings().working_bits):
        for c, gamma_term in ((p, GAMMA_P), (q, GAMMA_Q)):
            if c == 0:
                continue
            g = eval_gamma_product(gamma_term, point)
            total += to_mpf(c) * g.value
            error += abs(to_mpf(c)) * g.error_estimate
    return NumericValue(total, error, 0, "gamma")


def genkum_lhs(n: int, point: Point) -> NumericValue:
    a, b = point["a"], point["b"]
    return eval_2f1_neg1(a + n, b, a - b)


def genkum_residual(n: int, point: Point, variant: Optional[CoeffVariant] = None) -> float:
    """Relative residual of the generalized Kummer evaluation"""
    lhs = genkum_lhs(n, point)
    rhs = genkum_rhs(n, point, variant)
    residual = relative_residual(lhs, rhs)
    logger.debug("genkum n=%d at %s: lhs=%s rhs=%s residual=%.3e",
                 n, dict(point), lhs.value, rhs.value, residual)
    return residual


def kummer_rhs(point: Point) -> NumericValue:
    return eval_gamma_product(KUMMER_RHS, point)


def kummer_residual(point: Point) -> float:
    """Residual of Kummer's identity for 2F1(a, b; 1+a-b; -1)"""
    a, b = point["a"], point["b"]
    return relative_residual(eval_2f1_neg1(a, b, 1 + a - b), kummer_rhs(point))


def _whipple_terms(A: Fraction, B: Fraction, C: Fraction, variant: str):
    """Prefactor and k-th term of the Gamma-ratio expansions"""
    Af, Bf, Cf = to_mpf(A), to_mpf(B), to_mpf(C)
    if variant == "W841":
        shift = Cf - Af + Bf - 1
        prefactor = mpmath.gamma(Cf) / (2 * mpmath.gamma(Af))

        def term(k):
            k = int(k)
            return ((-1) ** k * mpmath.rf(shift, k) / mpmath.factorial(k)
                    * mpmath.gammaprod([Af / 2 + mpmath.mpf(k) / 2],
                                       [Cf - Af / 2 + mpmath.mpf(k) / 2]))

        return prefactor, term, C - A + B - 1
    if variant == "W841A":
        shift = Af - Bf - Cf + 1
        prefactor = (mpmath.gamma(Cf) * mpmath.gamma(1 - Bf)
                     / (2 * mpmath.gamma(Af) * mpmath.gamma(Cf - Af)))

        def term(k):
            k = int(k)
            return (mpmath.rf(shift, k) / mpmath.factorial(k)
                    * mpmath.gammaprod([Af / 2 + mpmath.mpf(k) / 2],
                                       [Af / 2 + mpmath.mpf(k) / 2 + 1 - Bf]))

        return prefactor, term, A - B - C + 1
    raise ValueError(variant)


def whipple_expansion(A, B, C, variant: str = "W841", terms: Optional[int] = None) -> NumericValue:
    """2F1(A, B; C; -1) through a Gamma-ratio expansion in k"""
    A, B, C = parse_rational(A), parse_rational(B), parse_rational(C)
    variant = variant.upper()
    if variant not in ("W841", "W841A"):
        raise ParseError(f"Unknown expansion variant {variant!r}")
    if A.denominator == 1 and A <= 0:
        raise InvalidShape("Expansion needs A off the non-positive integers", {"A": A})
    max_terms = terms or get_settings().max_terms
    with mpmath.workprec(get_settings().working_bits):
        try:
            prefactor, term, shift = _whipple_terms(A, B, C, variant)
        except ValueError as e:
            raise PoleAtPoint(f"Expansion prefactor is singular: {e}") from e
        if shift.denominator == 1 and shift <= 0:
            # (shift)_k vanishes beyond k = -shift
            total = mpmath.fsum(term(k) for k in range(int(-shift) + 1))
            value = prefactor * total
            return NumericValue(value, mpmath.eps * abs(value) * 8, int(-shift) + 1, variant)
        if variant == "W841A" and C - A <= 0:
            raise NoConvergence("Expansion diverges unless C > A", margin=C - A)
        total, err = extrapolated_sum(lambda: term, max_terms)
        value = prefactor * total
        return NumericValue(value, abs(prefactor * err) + mpmath.eps * abs(value), 0, variant)


# Gamma prefactors of Whipple's two single-term forms with a free nu
def _whipple_nu_specs(nu: Fraction) -> List[Tuple[GammaProduct, SeriesSpec]]:
    return [
        (GAMMA_Q, SeriesSpec.of([-(nu - 1) / 2, -nu / 2, lb], [-nu, (la + 1) / 2])),
        (GAMMA_P, SeriesSpec.of([-nu / 2, -(nu + 1) / 2, lb], [-nu, la / 2])),
    ]


def whipple_nu(nu, point: Point) -> Tuple[float, float]:
    """Residuals of both single-term forms against 2F1(a+nu, b; a-b; -1)"""
    nu = parse_rational(nu)
    if nu.denominator == 1 and nu >= 0:
        raise InvalidShape("nu must not be a non-negative integer", {"nu": nu})
    a, b = point["a"], point["b"]
    lhs = eval_2f1_neg1(a + nu, b, a - b)
    residuals = []
    for gamma_term, spec in _whipple_nu_specs(nu):
        series = eval_series_numeric(spec, point)
        g = eval_gamma_product(gamma_term, point)
        rhs = g.value * series.value
        residuals.append(relative_residual(lhs, rhs))
    return residuals[0], residuals[1]
