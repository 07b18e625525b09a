"""
Hypergeometric series engine
Exact terminating sums over RatFunc, numeric pFq and Gamma products via mpmath
"""

import logging
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import mpmath

from .errors import (
    HypevalError,
    IllDefined,
    InvalidShape,
    InvalidLowerParameter,
    NoConvergence,
    NonTerminating,
    ParseError,
    PoleAtPoint,
)
from .exact import (
    LinearForm,
    LinearLike,
    Point,
    RatFunc,
    RatFuncLike,
    as_linear,
    format_rational,
    parse_linear_form,
    parse_rational,
)
from .settings import get_settings

logger = logging.getLogger(__name__)

# Term ratio below which the geometric tail bound is trusted
GEOMETRIC_RATIO = 0.9


@dataclass(frozen=True)
class SeriesSpec:
    """pFq(upper; lower; argument)"""
    upper: Tuple[LinearForm, ...]
    lower: Tuple[LinearForm, ...]
    argument: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(as_linear(u) for u in self.upper))
        object.__setattr__(self, "lower", tuple(as_linear(l) for l in self.lower))
        object.__setattr__(self, "argument", parse_rational(self.argument))

    @classmethod
    def of(cls, upper: Iterable[LinearLike], lower: Iterable[LinearLike],
           argument: Union[str, int, Fraction] = 1) -> "SeriesSpec":
        return cls(tuple(upper), tuple(lower), parse_rational(argument))

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    def is_constant(self) -> bool:
        return all(x.is_constant() for x in self.upper + self.lower)

    def at(self, point: Point) -> "SeriesSpec":
        """Same series with every parameter evaluated at point"""
        return SeriesSpec(
            tuple(LinearForm(u.evaluate(point)) for u in self.upper),
            tuple(LinearForm(l.evaluate(point)) for l in self.lower),
            self.argument,
        )

    def substitute(self, mapping: Mapping[str, LinearLike]) -> "SeriesSpec":
        return SeriesSpec(
            tuple(u.substitute(mapping) for u in self.upper),
            tuple(l.substitute(mapping) for l in self.lower),
            self.argument,
        )

    def termination_index(self) -> Optional[int]:
        """K: the least m with some upper parameter equal to the constant -m"""
        lengths = [m for m in (u.nonpositive_integer() for u in self.upper) if m is not None]
        return min(lengths) if lengths else None

    def is_terminating(self) -> bool:
        return self.termination_index() is not None

    def __str__(self) -> str:
        upper = ", ".join(str(u) for u in self.upper)
        lower = ", ".join(str(l) for l in self.lower)
        return f"{self.p}F{self.q}({upper}; {lower}; {format_rational(self.argument)})"


def convergence_margin(spec: SeriesSpec) -> LinearForm:
    """Sum of lower minus sum of upper parameters"""
    margin = LinearForm()
    for l in spec.lower:
        margin = margin + l
    for u in spec.upper:
        margin = margin - u
    return margin


@dataclass(frozen=True)
class NumericValue:
    value: mpmath.mpf
    error_estimate: mpmath.mpf = mpmath.mpf(0)
    terms: int = 0
    path: str = ""

    def __float__(self) -> float:
        return float(self.value)

    def scaled(self, factor) -> "NumericValue":
        factor = mpmath.mpf(factor)
        return NumericValue(self.value * factor, self.error_estimate * abs(factor),
                            self.terms, self.path)


def relative_residual(lhs, rhs) -> float:
    """|lhs - rhs| / max(1, |rhs|)"""
    lhs = lhs.value if isinstance(lhs, NumericValue) else lhs
    rhs = rhs.value if isinstance(rhs, NumericValue) else rhs
    return float(abs(mpmath.mpf(lhs) - mpmath.mpf(rhs)) / max(1, abs(mpmath.mpf(rhs))))


def to_mpf(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


@lru_cache(maxsize=4096)
def pochhammer(x: LinearForm, k: int) -> RatFunc:
    """(x)_k as an exact polynomial"""
    if k < 0:
        raise ValueError("Pochhammer length must be non-negative")
    if k == 0:
        return RatFunc.one()
    return pochhammer(x, k - 1) * (x + (k - 1)).to_ratfunc()


def pochhammer_value(x: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for j in range(k):
        out *= x + j
    return out


def _term_ratio(spec: SeriesSpec, k: int) -> RatFunc:
    """t_k / t_{k-1}"""
    num = RatFunc.coerce(spec.argument / k)
    for u in spec.upper:
        num = num * (u + (k - 1))
    den = RatFunc.one()
    for l in spec.lower:
        den = den * (l + (k - 1))
    return num / den


def series_term(spec: SeriesSpec, k: int) -> RatFunc:
    """k-th term of the series as a rational function"""
    term = RatFunc.one()
    for j in range(1, k + 1):
        term = term * _term_ratio(spec, j)
    return term


def sum_terminating(spec: SeriesSpec, prefactor: RatFuncLike = 1) -> RatFunc:
    """
    Exact value of a terminating series.

    The sum runs k = 0..K with K the least m such that -m is an upper
    parameter; a lower parameter -m with m < K makes the series ill-defined.
    """
    prefactor = RatFunc.coerce(prefactor)
    if prefactor.is_zero():
        return prefactor
    length = spec.termination_index()
    if length is None:
        raise NonTerminating(f"No constant non-positive integer upper parameter in {spec}")
    for l in spec.lower:
        m = l.nonpositive_integer()
        if m is not None and m < length:
            raise IllDefined(
                f"Lower parameter {l} vanishes at term {m + 1} before {spec} terminates at {length}",
                {"lower": l, "terms": length},
            )

    # Horner form: 1 + r(1)(1 + r(2)(1 + ... r(K)))
    acc = RatFunc.one()
    for k in range(length, 0, -1):
        acc = RatFunc.one() + _term_ratio(spec, k) * acc
    return prefactor * acc


def _constant_parameters(spec: SeriesSpec, point: Optional[Point]) -> SeriesSpec:
    concrete = spec.at(point) if point is not None else spec
    if not concrete.is_constant():
        raise ParseError(f"Series {spec} has symbolic parameters and no evaluation point")
    return concrete


def _check_lower(spec: SeriesSpec) -> None:
    if spec.is_terminating():
        return
    for l in spec.lower:
        if l.nonpositive_integer() is not None:
            raise InvalidLowerParameter(f"Lower parameter {l} is a non-positive integer in {spec}")


def _sum_geometric(upper: Sequence[mpmath.mpf], lower: Sequence[mpmath.mpf], z: mpmath.mpf,
                   max_terms: int, tol: float) -> NumericValue:
    """Partial sums stopped by the geometric tail bound"""
    eps = +mpmath.eps
    term = mpmath.mpf(1)
    total = mpmath.mpf(1)
    bound_engaged = False
    tail = mpmath.inf
    # the ratio is only monotone once every shifted parameter is positive
    settle = int(mpmath.ceil(max([-x for x in list(upper) + list(lower)] + [0]))) + 1
    for k in range(max_terms):
        ratio = z / (k + 1)
        for u in upper:
            ratio *= u + k
        for l in lower:
            ratio /= l + k
        term *= ratio
        total += term
        rho = abs(ratio)
        if k >= settle and rho < GEOMETRIC_RATIO:
            bound_engaged = True
            tail = abs(term) * rho / (1 - rho)
            if tail <= eps * max(abs(total), eps):
                return NumericValue(total, tail + eps * abs(total), k + 2, "series")
        else:
            bound_engaged = False
    if bound_engaged and tail <= tol * max(1, abs(total)):
        return NumericValue(total, tail, max_terms, "series")
    raise NoConvergence(f"Series did not reach its tail bound within {max_terms} terms",
                        terms=max_terms)


def _hyper_unit(upper: Sequence[mpmath.mpf], lower: Sequence[mpmath.mpf],
                max_terms: int) -> NumericValue:
    """pFq(1) with positive margin, error from two working precisions"""
    try:
        coarse = mpmath.hyper(upper, lower, 1, maxterms=max_terms)
        with mpmath.extraprec(get_settings().guard_bits):
            fine = mpmath.hyper(upper, lower, 1, maxterms=max_terms)
    except mpmath.libmp.NoConvergence as e:
        raise NoConvergence(f"mpmath could not sum the unit-argument series: {e}",
                            terms=max_terms) from e
    return NumericValue(+fine, abs(fine - coarse) + mpmath.eps * abs(fine), 0, "hyper")


def eval_series_numeric(spec: SeriesSpec, point: Optional[Point] = None,
                        max_terms: Optional[int] = None,
                        tol: Optional[float] = None) -> NumericValue:
    """
    Numeric value of pFq at an optional point.

    Terminating series are summed exactly and rounded. Otherwise the series
    must have |z| < 1, or |z| = 1 with a positive convergence margin.
    """
    settings = get_settings()
    max_terms = max_terms or settings.max_terms
    tol = settings.tol if tol is None else tol
    concrete = _constant_parameters(spec, point)
    _check_lower(concrete)

    with mpmath.workprec(settings.working_bits):
        if concrete.is_terminating():
            exact = sum_terminating(concrete).constant_value()
            value = to_mpf(exact)
            return NumericValue(value, mpmath.eps * abs(value),
                                concrete.termination_index() + 1, "exact")

        z = concrete.argument
        upper = [to_mpf(u.q0) for u in concrete.upper]
        lower = [to_mpf(l.q0) for l in concrete.lower]
        if concrete.p > concrete.q + 1:
            raise NoConvergence(f"{concrete} diverges for every z != 0")
        if concrete.p <= concrete.q or abs(z) < 1:
            result = _sum_geometric(upper, lower, to_mpf(z), max_terms, tol)
        elif abs(z) == 1:
            margin = convergence_margin(concrete).constant_value()
            if margin <= 0:
                raise NoConvergence(f"{concrete} has non-positive convergence margin {margin}",
                                    margin=margin)
            if z == 1:
                result = _hyper_unit(upper, lower, max_terms)
            else:
                result = _nsum_terms(upper, lower, to_mpf(z), max_terms)
        else:
            raise NoConvergence(f"{concrete} diverges at |z| > 1")
        logger.debug("%s -> %s (err %s, path %s)", concrete, result.value,
                     result.error_estimate, result.path)
        return result


def extrapolated_sum(make_term: Callable[[], Callable[[int], mpmath.mpf]],
                     max_terms: int) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """
    Sum of term(0), term(1), ... by nsum's Richardson/Shanks extrapolation.

    The sum is taken at working precision and again with the guard bits
    added; their gap is the error estimate. make_term is called once per
    pass so cached terms never leak between precisions.
    """
    try:
        coarse = mpmath.nsum(make_term(), [0, mpmath.inf], method="r+s", maxterms=max_terms)
        with mpmath.extraprec(get_settings().guard_bits):
            fine = mpmath.nsum(make_term(), [0, mpmath.inf], method="r+s",
                               maxterms=max_terms)
    except mpmath.libmp.NoConvergence as e:
        raise NoConvergence(f"Extrapolation failed: {e}", terms=max_terms) from e
    if not (mpmath.isfinite(coarse) and mpmath.isfinite(fine)):
        raise NoConvergence("Extrapolated sum is not finite", terms=max_terms)
    return +fine, abs(fine - coarse)


def _nsum_terms(upper: Sequence[mpmath.mpf], lower: Sequence[mpmath.mpf],
                z: mpmath.mpf, max_terms: int) -> NumericValue:
    """Extrapolated sum of a slowly converging series, terms from the ratio recurrence"""
    counted = [0]

    def make_term():
        terms: List[mpmath.mpf] = [mpmath.mpf(1)]

        def term(k):
            k = int(k)
            while len(terms) <= k:
                j = len(terms) - 1
                ratio = z / (j + 1)
                for u in upper:
                    ratio *= u + j
                for l in lower:
                    ratio /= l + j
                terms.append(terms[-1] * ratio)
            counted[0] = max(counted[0], len(terms))
            return terms[k]

        return term

    value, err = extrapolated_sum(make_term, max_terms)
    return NumericValue(value, err + mpmath.eps * abs(value), counted[0], "nsum")


def hyp_numeric(upper: Sequence, lower: Sequence, z, **kwargs) -> NumericValue:
    """Convenience wrapper taking rational literals"""
    return eval_series_numeric(SeriesSpec.of(upper, lower, z), **kwargs)


def log_gamma_signed(x: Fraction) -> Tuple[mpmath.mpf, int]:
    """(log|Gamma(x)|, sign Gamma(x)) for x not a pole"""
    if x.denominator == 1 and x <= 0:
        raise PoleAtPoint(f"Gamma has a pole at {format_rational(x)}", argument=x)
    xf = to_mpf(x)
    if x >= Fraction(1, 2):
        return mpmath.loggamma(xf).real, 1
    # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    logabs = (mpmath.log(mpmath.pi) - mpmath.log(abs(mpmath.sinpi(xf)))
              - mpmath.loggamma(1 - xf).real)
    sign = 1 if x > 0 else (-1) ** math.ceil(-x)
    return logabs, sign


@dataclass(frozen=True, eq=False)
class GammaProduct:
    """prefactor * prod Gamma(argument)^exponent"""
    prefactor: RatFunc = field(default_factory=RatFunc.one)
    factors: Tuple[Tuple[LinearForm, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "prefactor", RatFunc.coerce(self.prefactor))
        cleaned = []
        for arg, exponent in self.factors:
            if exponent == 0:
                raise ValueError("Gamma factor exponents must be nonzero")
            cleaned.append((as_linear(arg), int(exponent)))
        object.__setattr__(self, "factors", tuple(cleaned))

    @classmethod
    def ratio(cls, numerator: Iterable[LinearLike], denominator: Iterable[LinearLike],
              prefactor: RatFuncLike = 1) -> "GammaProduct":
        factors = [(as_linear(x), 1) for x in numerator]
        factors += [(as_linear(x), -1) for x in denominator]
        return cls(RatFunc.coerce(prefactor), tuple(factors))

    def __mul__(self, other: Union["GammaProduct", RatFuncLike]) -> "GammaProduct":
        if isinstance(other, GammaProduct):
            return GammaProduct(self.prefactor * other.prefactor, self.factors + other.factors)
        return GammaProduct(self.prefactor * RatFunc.coerce(other), self.factors)

    __rmul__ = __mul__

    def substitute(self, mapping: Mapping[str, LinearLike]) -> "GammaProduct":
        return GammaProduct(
            self.prefactor.substitute(mapping),
            tuple((arg.substitute(mapping), e) for arg, e in self.factors),
        )

    def reduced(self) -> "GammaProduct":
        """Fold Gamma(x)/Gamma(y) with x - y an integer into the prefactor"""
        prefactor = self.prefactor
        numerators = [arg for arg, e in self.factors for _ in range(e) if e > 0]
        denominators = [arg for arg, e in self.factors for _ in range(-e) if e < 0]
        remaining_den = []
        for y in denominators:
            for i, x in enumerate(numerators):
                gap = x - y
                if gap.is_constant() and gap.q0.denominator == 1:
                    d = int(gap.q0)
                    if d >= 0:
                        prefactor = prefactor * pochhammer(y, d)
                    else:
                        prefactor = prefactor / pochhammer(x, -d)
                    del numerators[i]
                    break
            else:
                remaining_den.append(y)
        factors = [(x, 1) for x in numerators] + [(y, -1) for y in remaining_den]
        return GammaProduct(prefactor, tuple(factors))

    def exact_value(self) -> RatFunc:
        """Prefactor after reduction; InvalidShape if Gamma factors remain"""
        reduced = self.reduced()
        if reduced.factors:
            raise InvalidShape(f"Gamma product {self} does not reduce to a rational function")
        return reduced.prefactor

    def __str__(self) -> str:
        parts = [] if self.prefactor.equals(1) else [f"({self.prefactor})"]
        for arg, exponent in self.factors:
            parts.append(f"G({arg})" + ("" if exponent == 1 else f"^{exponent}"))
        return " * ".join(parts) or "1"


def eval_gamma_product(g: GammaProduct, point: Optional[Point] = None) -> NumericValue:
    """Numeric value through log-Gamma with explicit sign bookkeeping"""
    point = point or {}
    settings = get_settings()
    arguments = [(arg, arg.evaluate(point), exponent) for arg, exponent in g.factors]
    # numerator poles first: 0 * infinity is not a value
    for arg, x, exponent in arguments:
        if exponent > 0 and x.denominator == 1 and x <= 0:
            raise PoleAtPoint(f"Gamma({arg}) is singular at {dict(point)}", argument=x)
    prefactor = g.prefactor.evaluate(point)
    vanishing = any(x.denominator == 1 and x <= 0 for _, x, _ in arguments)
    if prefactor == 0 or vanishing:
        return NumericValue(mpmath.mpf(0), mpmath.mpf(0), 0, "gamma")

    with mpmath.workprec(settings.working_bits):
        logabs = mpmath.mpf(0)
        sign = 1 if prefactor > 0 else -1
        for _, x, exponent in arguments:
            term, term_sign = log_gamma_signed(x)
            logabs += exponent * term
            if term_sign < 0 and exponent % 2:
                sign = -sign
        value = sign * abs(to_mpf(prefactor)) * mpmath.exp(logabs)
        error = abs(value) * mpmath.eps * (4 * len(g.factors) + 1) * max(1, abs(logabs))
        return NumericValue(value, error, 0, "gamma")


_GAMMA_FACTOR = re.compile(r"([*/])?\s*G\(([^()]*)\)(?:\^(-?\d+))?")


def parse_gamma_product(text: str) -> GammaProduct:
    """Parse "3/4*G(c)*G(3-c/2)/G(5-c)" style expressions"""
    source = str(text).strip()
    first = source.find("G(")
    if first < 0:
        raise ParseError(f"No Gamma factor in {text!r}")
    head = source[:first].strip().rstrip("*").strip()
    prefactor = parse_rational(head) if head else Fraction(1)

    factors: List[Tuple[LinearForm, int]] = []
    position = first
    while position < len(source):
        match = _GAMMA_FACTOR.match(source, position)
        if not match or (match.start() > first and not match.group(1)):
            raise ParseError(f"Invalid Gamma product {text!r} near position {position}")
        exponent = int(match.group(3) or 1)
        if match.group(1) == "/":
            exponent = -exponent
        factors.append((parse_linear_form(match.group(2)), exponent))
        position = match.end()
        while position < len(source) and source[position].isspace():
            position += 1
    return GammaProduct(RatFunc.coerce(prefactor), tuple(factors))


def eval_2f1_neg1(A: Union[str, Fraction], B: Union[str, Fraction], C: Union[str, Fraction],
                  path: str = "auto") -> NumericValue:
    """
    2F1(A, B; C; -1) including its analytic continuation.

    With margin C-A-B > -1/2 the z=-1 series is summed directly with
    extrapolation. Otherwise Pfaff's transform maps it to
    2^-A 2F1(A, C-B; C; 1/2).
    """
    A, B, C = parse_rational(A), parse_rational(B), parse_rational(C)
    if C.denominator == 1 and C <= 0:
        raise InvalidLowerParameter(f"Lower parameter C={format_rational(C)} is a non-positive integer")
    spec = SeriesSpec.of([A, B], [C], -1)
    if spec.is_terminating():
        return eval_series_numeric(spec)

    margin = C - A - B
    if path == "auto":
        path = "direct" if margin > Fraction(-1, 2) else "pfaff"
    logger.debug("2F1(%s, %s; %s; -1) via %s path (margin %s)", A, B, C, path, margin)

    settings = get_settings()
    with mpmath.workprec(settings.working_bits):
        if path == "direct":
            if margin <= -1:
                raise NoConvergence(f"2F1 at -1 diverges with margin {margin}", margin=margin)
            return _nsum_terms([to_mpf(A), to_mpf(B)], [to_mpf(C)], mpmath.mpf(-1),
                               settings.max_terms)
        if path == "pfaff":
            inner = eval_series_numeric(SeriesSpec.of([A, C - B], [C], Fraction(1, 2)))
            scale = mpmath.power(2, -to_mpf(A))
            value = inner.scaled(scale)
            return NumericValue(value.value, value.error_estimate, inner.terms, "pfaff")
    raise ValueError(f"Unknown path {path!r}")


def safe_call(fn: Callable, *args, **kwargs):
    """Run fn, returning (result, None) or (None, error)"""
    try:
        return fn(*args, **kwargs), None
    except HypevalError as e:
        return None, e
