"""
Transformations of hypergeometric series

Terminating 3F2(1) orbit under the 72-element group, the terminating
two-term transform, Thomae's relation for convergent 3F2(1), and the
classical 2F1 transforms (Pfaff, Euler).
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath

from .errors import (
    InvalidShape,
    LabelConstraintError,
    NoConvergence,
    SingularOrbit,
)
from .exact import LinearForm, LinearLike, Point, RatFunc, as_linear, format_rational, parse_rational
from .hyper import (
    GammaProduct,
    NumericValue,
    SeriesSpec,
    eval_2f1_neg1,
    eval_gamma_product,
    eval_series_numeric,
    pochhammer,
    sum_terminating,
    to_mpf,
)
from .settings import get_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TransformedSeries:
    """prefactor * base^exponent * series"""
    prefactor: GammaProduct
    spec: SeriesSpec
    power: Optional[Tuple[Fraction, LinearForm]] = None
    label: str = ""

    def exact_value(self) -> RatFunc:
        """Exact value when the series terminates and the prefactor is rational"""
        if self.power is not None:
            raise InvalidShape(f"Power annotation {self.power} has no exact value")
        return sum_terminating(self.spec, self.prefactor.exact_value())

    def __str__(self) -> str:
        parts = [str(self.prefactor)]
        if self.power is not None:
            base, exponent = self.power
            parts.append(f"{format_rational(base)}^({exponent})")
        parts.append(str(self.spec))
        return " * ".join(p for p in parts if p != "1")


def _power_value(power: Optional[Tuple[Fraction, LinearForm]], point: Point):
    if power is None:
        return mpmath.mpf(1)
    base, exponent = power
    return mpmath.power(to_mpf(base), to_mpf(exponent.evaluate(point)))


def eval_series_value(spec: SeriesSpec, point: Optional[Point] = None) -> NumericValue:
    """Numeric series value, continuing 2F1 at -1 when needed"""
    concrete = spec.at(point or {})
    if concrete.p == 2 and concrete.q == 1 and concrete.argument == -1:
        return eval_2f1_neg1(concrete.upper[0].q0, concrete.upper[1].q0, concrete.lower[0].q0)
    return eval_series_numeric(concrete)


def eval_transformed(ts: TransformedSeries, point: Optional[Point] = None) -> NumericValue:
    point = point or {}
    with mpmath.workprec(get_settings().working_bits):
        prefactor = eval_gamma_product(ts.prefactor, point)
        if prefactor.value == 0:
            return prefactor
        series = eval_series_value(ts.spec, point)
        power = _power_value(ts.power, point)
        value = prefactor.value * power * series.value
        error = (abs(prefactor.value * power) * series.error_estimate
                 + abs(series.value * power) * prefactor.error_estimate)
        return NumericValue(value, error, series.terms, series.path)


# Terminating 3F2(1) orbit

@dataclass(frozen=True)
class OrbitLabel:
    """y0..y5 with y0+y1+y2 = y3+y4+y5 = 1-m"""
    y: Tuple[LinearForm, ...]
    m: int

    def __post_init__(self):
        y = tuple(as_linear(v) for v in self.y)
        object.__setattr__(self, "y", y)
        if len(y) != 6:
            raise LabelConstraintError(f"Orbit label needs six values, got {len(y)}")
        if self.m < 0:
            raise LabelConstraintError(f"Orbit length m must be non-negative, got {self.m}")
        target = LinearForm(1 - self.m)
        if y[0] + y[1] + y[2] != target or y[3] + y[4] + y[5] != target:
            raise LabelConstraintError(
                f"Label violates y0+y1+y2 = y3+y4+y5 = {1 - self.m}",
                {"first": y[0] + y[1] + y[2], "second": y[3] + y[4] + y[5]},
            )

    @classmethod
    def from_series(cls, m: int, A: LinearLike, B: LinearLike, E: LinearLike,
                    F: LinearLike) -> "OrbitLabel":
        """Label whose displayed form is 3F2(-m, A, B; E, F; 1)"""
        A, B, E, F = (as_linear(x) for x in (A, B, E, F))
        y0 = (2 * E + 2 * F - A - B + (m - 1)) / 3
        y3 = (1 - m) - E - F + 2 * y0
        return cls((y0, A - y0 + y3, B - y0 + y3, y3, E - y0, F - y0), m)


def orbit_series(y: Sequence[LinearForm], m: int, sign: int = 1,
                 label: str = "") -> TransformedSeries:
    """(y0+y4)_m (y0+y5)_m 3F2(-m, y0+y1-y3, y0+y2-y3; y0+y4, y0+y5; 1)"""
    y0, y1, y2, y3, y4, y5 = y
    prefactor = pochhammer(y0 + y4, m) * pochhammer(y0 + y5, m) * sign
    spec = SeriesSpec.of([-m, y0 + y1 - y3, y0 + y2 - y3], [y0 + y4, y0 + y5])
    return TransformedSeries(GammaProduct(prefactor), spec, label=label)


def _is_singular(spec: SeriesSpec, m: int) -> bool:
    for lower in spec.lower:
        j = lower.nonpositive_integer()
        if j is not None and j < m:
            return True
    return False


def orbit_terminating(label: OrbitLabel) -> List[TransformedSeries]:
    """
    The 18 representatives of the orbit, in a fixed order.

    Representatives are indexed by (swap, i, j): swap exchanges the two
    y-sets at the cost of (-1)^m, i picks the element of the first set
    placed at y0 and j the element of the second set placed at y3.
    """
    first, second = label.y[:3], label.y[3:]
    out = []
    for swap in (False, True):
        set_a, set_b = (second, first) if swap else (first, second)
        sign = (-1) ** label.m if swap else 1
        for i, j in itertools.product(range(3), range(3)):
            rest_a = [v for k, v in enumerate(set_a) if k != i]
            rest_b = [v for k, v in enumerate(set_b) if k != j]
            y = (set_a[i], rest_a[0], rest_a[1], set_b[j], rest_b[0], rest_b[1])
            tag = f"{'swap' if swap else 'id'}:{i}{j}"
            ts = orbit_series(y, label.m, sign, tag)
            if _is_singular(ts.spec, label.m):
                raise SingularOrbit(f"Representative {tag} has a vanishing lower Pochhammer",
                                    {"series": ts.spec})
            out.append(ts)
    logger.debug("Built %d orbit representatives for m=%d", len(out), label.m)
    return out


def orbit_values(label: OrbitLabel) -> List[RatFunc]:
    return [ts.exact_value() for ts in orbit_terminating(label)]


def orbit_consistent(label: OrbitLabel) -> bool:
    values = orbit_values(label)
    return all(v.equals(values[0]) for v in values[1:])


# Two-term transforms

def _split_terminating_3f2(spec: SeriesSpec, m: Optional[int]):
    if spec.p != 3 or spec.q != 2 or spec.argument != 1:
        raise InvalidShape(f"Expected a 3F2 at argument 1, got {spec}")
    for index, upper in enumerate(spec.upper):
        length = upper.nonpositive_integer()
        if length is not None and (m is None or length == m):
            rest = [u for k, u in enumerate(spec.upper) if k != index]
            return length, rest[0], rest[1]
    raise InvalidShape(f"No upper parameter -{'m' if m is None else m} in {spec}")


def transform_terminating(spec: SeriesSpec, m: Optional[int] = None) -> TransformedSeries:
    """3F2(-m, A, B; E, F; 1) = (E-A)_m/(E)_m 3F2(-m, A, F-B; 1+A-E-m, F; 1)"""
    m, A, B = _split_terminating_3f2(spec, m)
    E, F = spec.lower
    j = E.nonpositive_integer()
    if j is not None and j < m:
        raise InvalidShape(f"(E)_m vanishes for E={E}, m={m}")
    prefactor = pochhammer(E - A, m) / pochhammer(E, m)
    image = SeriesSpec.of([-m, A, F - B], [1 + A - E - m, F])
    return TransformedSeries(GammaProduct(prefactor), image, label="terminating")


def _check_margin(margin: LinearForm, point: Optional[Point], what: str) -> None:
    if margin.is_constant():
        value = margin.q0
    elif point is not None:
        value = margin.evaluate(point)
    else:
        return
    if value <= 0:
        raise NoConvergence(f"{what} has convergence margin {format_rational(value)} <= 0",
                            margin=value)


def thomae_transform(spec: SeriesSpec, point: Optional[Point] = None) -> TransformedSeries:
    """
    3F2(A, B, C; E, F; 1) =
        G(F) G(s) / (G(F-C) G(E+F-A-B)) 3F2(E-A, E-B, C; E, E+F-A-B; 1)
    with s = E+F-A-B-C. Divergent sides are rejected.
    """
    if spec.p != 3 or spec.q != 2 or spec.argument != 1:
        raise InvalidShape(f"Expected a 3F2 at argument 1, got {spec}")
    A, B, C = spec.upper
    E, F = spec.lower
    s = E + F - A - B - C
    image = SeriesSpec.of([E - A, E - B, C], [E, E + F - A - B])
    if not spec.is_terminating():
        _check_margin(s, point, f"Series {spec}")
    if not image.is_terminating():
        _check_margin(F - C, point, f"Transformed series {image}")
    prefactor = GammaProduct.ratio([F, s], [F - C, E + F - A - B])
    return TransformedSeries(prefactor, image, label="thomae")


class TwoTermKind(str, Enum):
    PFAFF_A = "PFAFF_A"
    PFAFF_B = "PFAFF_B"
    EULER = "EULER"
    BATEMAN_292 = "BATEMAN_292"


def _power(base: Fraction, exponent: LinearForm) -> Tuple[RatFunc, Optional[Tuple[Fraction, LinearForm]]]:
    """Integer powers fold into the rational prefactor"""
    if exponent.is_constant() and exponent.q0.denominator == 1:
        return RatFunc.coerce(base ** int(exponent.q0)), None
    return RatFunc.one(), (base, exponent)


def two_term_2f1(kind: TwoTermKind, params: Sequence[LinearLike], z) -> TransformedSeries:
    """Value-preserving image of 2F1(A, B; C; z)"""
    kind = TwoTermKind(kind)
    A, B, C = (as_linear(p) for p in params)
    z = parse_rational(z)
    if z >= 1:
        raise InvalidShape(f"z={format_rational(z)} lies on the branch cut [1, oo)")
    base = 1 - z

    if kind is TwoTermKind.BATEMAN_292:
        gap = A - B - C
        if z != -1 or not (gap.is_constant() and gap.q0.denominator == 1):
            raise InvalidShape(
                f"BATEMAN_292 needs 2F1(a+n, b; a-b; -1) with A-B-C an integer, got A-B-C={gap}"
            )
        kind = TwoTermKind.EULER

    if kind is TwoTermKind.PFAFF_A:
        exponent, image = -A, SeriesSpec.of([A, C - B], [C], z / (z - 1))
    elif kind is TwoTermKind.PFAFF_B:
        exponent, image = -B, SeriesSpec.of([C - A, B], [C], z / (z - 1))
    else:
        exponent, image = C - A - B, SeriesSpec.of([C - A, C - B], [C], z)

    prefactor, power = _power(base, exponent)
    return TransformedSeries(GammaProduct(prefactor), image, power, label=kind.value)
