"""
Three-term recurrences, telescoping certificates and initial-value checks
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple

import mpmath

from .exact import LinearForm, Point, RatFunc, la, lb, lc
from .hyper import NumericValue, eval_2f1_neg1, pochhammer, to_mpf
from .kummer import CoeffVariant, coeff, genkum_residual, kummer_rhs
from .settings import get_settings

logger = logging.getLogger(__name__)


class Family(str, Enum):
    KUMMER = "KUMMER"
    GOSPER = "GOSPER"
    DIXON = "DIXON"


def _lin(form: LinearForm) -> RatFunc:
    return form.to_ratfunc()


@dataclass(frozen=True)
class Recurrence2:
    """c_plus(n) S(n+1) + c_zero(n) S(n) + c_minus(n) S(n-1) = 0"""
    family: Family
    c_plus: Callable[[int], RatFunc]
    c_zero: Callable[[int], RatFunc]
    c_minus: Callable[[int], RatFunc]

    def coefficients(self, n: int) -> Tuple[RatFunc, RatFunc, RatFunc]:
        return self.c_plus(n), self.c_zero(n), self.c_minus(n)


def _kummer() -> Recurrence2:
    return Recurrence2(
        Family.KUMMER,
        lambda n: _lin(2 * (la + n)),
        lambda n: _lin(-(2 * la + 3 * n)),
        lambda n: _lin(lb + n),
    )


def _gosper() -> Recurrence2:
    return Recurrence2(
        Family.GOSPER,
        lambda n: _lin(2 * (2 * la + n + 1)) * _lin(6 * la + 2 * n + 3),
        lambda n: _lin(4 * la + 2 * n + 3) * _lin(6 * la + 4 * n + 1),
        lambda n: _lin(4 * la + 2 * n + 1) * _lin(4 * la + 2 * n + 3) * -3,
    )


def _dixon_zero(n: int) -> RatFunc:
    # -(2n^2 + 3bn + 3cn + n - a^2 + 2ab + 2ac + a)
    a, b, c = _lin(la), _lin(lb), _lin(lc)
    inner = (b * (3 * n) + c * (3 * n) + (2 * n * n + n)
             - a * a + a * b * 2 + a * c * 2 + a)
    return -inner


def _dixon() -> Recurrence2:
    return Recurrence2(
        Family.DIXON,
        lambda n: _lin(la + n) * _lin(2 * lb + 2 * lc - la + n + 1),
        _dixon_zero,
        lambda n: _lin(lb + n) * _lin(lc + n),
    )


_BUILDERS = {Family.KUMMER: _kummer, Family.GOSPER: _gosper, Family.DIXON: _dixon}


def build_recurrence(family: Family) -> Recurrence2:
    return _BUILDERS[Family(family)]()


def check_recurrence(rec: Recurrence2, values: Tuple[RatFunc, RatFunc, RatFunc], n: int) -> RatFunc:
    """c_plus v(n+1) + c_zero v(n) + c_minus v(n-1), exactly"""
    v_plus, v_zero, v_minus = (RatFunc.coerce(v) for v in values)
    c_plus, c_zero, c_minus = rec.coefficients(n)
    return c_plus * v_plus + c_zero * v_zero + c_minus * v_minus


def check_kummer_sequence(which: str, n: int, variant: Optional[CoeffVariant] = None) -> RatFunc:
    """Recurrence residual on (X(n+1), X(n), X(n-1)) with each value from its own default variant"""
    values = tuple(coeff(which, m, variant) for m in (n + 1, n, n - 1))
    return check_recurrence(build_recurrence(Family.KUMMER), values, n)


def numeric_recurrence_residual(rec: Recurrence2, n: int, point: Point,
                                sequence: Callable[[int], NumericValue]) -> float:
    """Relative residual of the recurrence on a numeric sequence"""
    terms = []
    with mpmath.workprec(get_settings().working_bits):
        for c, shift in zip(rec.coefficients(n), (1, 0, -1)):
            terms.append(to_mpf(c.evaluate(point)) * sequence(n + shift).value)
        scale = max(abs(t) for t in terms)
        return float(abs(mpmath.fsum(terms)) / max(scale, 1))


def kummer_sequence(point: Point) -> Callable[[int], NumericValue]:
    """n -> 2F1(a+n, b; a-b; -1)"""
    a, b = point["a"], point["b"]
    return lambda n: eval_2f1_neg1(a + n, b, a - b)


def leading_coefficient_vanishes(rec: Recurrence2, n: int, point: Point) -> bool:
    return rec.c_plus(n).evaluate(point) == 0


# Telescoping certificates

class CertificateFamily(str, Enum):
    P_CERT = "P_CERT"
    Q_CERT = "Q_CERT"


def _factorial(n: int) -> int:
    out = 1
    for j in range(2, n + 1):
        out *= j
    return out


def _inverse_factorial(n: int) -> Fraction:
    """1/n!, zero for negative n"""
    return Fraction(0) if n < 0 else Fraction(1, _factorial(n))


def _binomial(n: int, k: int) -> int:
    if k < 0 or n < k:
        return 0
    return _factorial(n) // (_factorial(k) * _factorial(n - k))


def p_summand(n: int, k: int) -> RatFunc:
    """k-th summand of P(n) in its THM2 form"""
    if k < 0 or n - k < 0:
        return RatFunc.zero()
    scale = (Fraction((-1) ** k, 2 * 4 ** k) * (n + 1) * _factorial(n - k)
             * _inverse_factorial(n - 2 * k + 1) / _factorial(k))
    if scale == 0:
        return RatFunc.zero()
    return pochhammer(lb, k) / pochhammer(la / 2, k) * scale


def q_summand(n: int, k: int) -> RatFunc:
    """k-th summand of Q(n) in its THM2 form"""
    if k < 0:
        return RatFunc.zero()
    scale = Fraction((-1) ** k, 2 * 4 ** k) * _binomial(n - k, k)
    if scale == 0:
        return RatFunc.zero()
    return pochhammer(lb, k) / pochhammer((la + 1) / 2, k) * scale


def p_telescoper(n: int, k: int) -> RatFunc:
    """R(n, k) for P: the certificate r1(n-1, k) times p(n-1, k), in factorial form"""
    if k <= 0 or n - k < 0:
        return RatFunc.zero()
    scale = (Fraction((-1) ** (k + 1) * k * n, 4 ** k) * _factorial(n - k)
             * _inverse_factorial(n - 2 * k + 2) / _factorial(k))
    if scale == 0:
        return RatFunc.zero()
    return _lin(la + (2 * k - 2)) * pochhammer(lb, k) / pochhammer(la / 2, k) * scale


def q_telescoper(n: int, k: int) -> RatFunc:
    """R(n, k) for Q: minus R2(n-1, k), in factorial form"""
    if k <= 0 or n - k < 0:
        return RatFunc.zero()
    scale = (Fraction((-1) ** (k + 1) * k, 4 ** k) * _factorial(n - k)
             * _inverse_factorial(n - 2 * k + 1) / _factorial(k))
    if scale == 0:
        return RatFunc.zero()
    return _lin(la + (2 * k - 1)) * pochhammer(lb, k) / pochhammer((la + 1) / 2, k) * scale


def certificate_r1(n: int, k: int) -> RatFunc:
    """-2k(n-k+1)(a+2k-2) / ((n-2k+2)(n-2k+3))"""
    den = (n - 2 * k + 2) * (n - 2 * k + 3)
    return _lin(la + (2 * k - 2)) * Fraction(-2 * k * (n - k + 1), den)


def certificate_r2_product(n: int, k: int) -> RatFunc:
    """R2(n, k): the Q summand times its certificate, as displayed"""
    den = (n - 2 * k + 1) * (n - 2 * k + 2)
    return _lin(la + (2 * k - 1)) * q_summand(n, k) * Fraction(2 * k * (n - k + 1), den)


def displayed_p_telescoper(n: int, k: int) -> Optional[RatFunc]:
    """r1(n-1, k) p(n-1, k); None where r1's denominator vanishes"""
    if (n - 2 * k + 1) * (n - 2 * k + 2) == 0:
        return None
    return certificate_r1(n - 1, k) * p_summand(n - 1, k)


def displayed_q_telescoper(n: int, k: int) -> Optional[RatFunc]:
    """-R2(n-1, k); None where R2's denominator vanishes"""
    if (n - 2 * k) * (n - 2 * k + 1) == 0:
        return None
    return -certificate_r2_product(n - 1, k)


@dataclass(frozen=True)
class Certificate:
    family: CertificateFamily
    summand: Callable[[int, int], RatFunc]
    telescoper: Callable[[int, int], RatFunc]
    displayed: Callable[[int, int], Optional[RatFunc]]
    last_k: Callable[[int], int]          # last k with a nonzero left-hand side
    boundary_sum_end: Callable[[int], int]
    boundary_point: Callable[[int], int]

    def total(self, n: int) -> RatFunc:
        return sum((self.summand(n, k) for k in range(0, n // 2 + 2)), RatFunc.zero())


def _ceil_half(n: int) -> int:
    return -(-n // 2)


CERTIFICATES: Dict[CertificateFamily, Certificate] = {
    CertificateFamily.P_CERT: Certificate(
        CertificateFamily.P_CERT, p_summand, p_telescoper, displayed_p_telescoper,
        last_k=lambda n: _ceil_half(n + 1),
        boundary_sum_end=lambda n: n // 2,
        boundary_point=lambda n: _ceil_half(n + 1),
    ),
    CertificateFamily.Q_CERT: Certificate(
        CertificateFamily.Q_CERT, q_summand, q_telescoper, displayed_q_telescoper,
        last_k=lambda n: _ceil_half(n),
        boundary_sum_end=lambda n: (n - 1) // 2,
        boundary_point=lambda n: _ceil_half(n),
    ),
}


def verify_certificate(cert, n: int) -> bool:
    """
    Replay the telescoping proof for one n >= 1.

    Checks that the factorial-form telescoper agrees with the displayed
    certificate wherever the latter is defined, the per-k identity
        2(n+a) s(n+1,k) - (3n+2a) s(n,k) + (n+b) s(n-1,k) = R(n,k+1) - R(n,k),
    the boundary form of the telescoped sum, and that the summed left-hand
    side equals the recurrence applied to the THM2 coefficients.
    """
    if not isinstance(cert, Certificate):
        cert = CERTIFICATES[CertificateFamily(cert)]
    if n < 1:
        raise ValueError("Certificates are replayed for n >= 1")
    for k in range(0, cert.last_k(n) + 2):
        displayed = cert.displayed(n, k)
        if displayed is not None and not displayed.equals(cert.telescoper(n, k)):
            logger.warning("%s telescoper disagrees with the displayed certificate at n=%d, k=%d",
                           cert.family.value, n, k)
            return False

    rec = build_recurrence(Family.KUMMER)
    c_plus, c_zero, c_minus = rec.coefficients(n)

    total = RatFunc.zero()
    for k in range(0, cert.last_k(n) + 1):
        lhs = (c_plus * cert.summand(n + 1, k) + c_zero * cert.summand(n, k)
               + c_minus * cert.summand(n - 1, k))
        rhs = cert.telescoper(n, k + 1) - cert.telescoper(n, k)
        if not lhs.equals(rhs):
            logger.warning("%s fails at n=%d, k=%d", cert.family.value, n, k)
            return False
        total = total + lhs

    boundary = sum(
        (cert.telescoper(n, k + 1) - cert.telescoper(n, k)
         for k in range(0, cert.boundary_sum_end(n) + 1)),
        RatFunc.zero(),
    ) - cert.telescoper(n, cert.boundary_point(n))
    if not boundary.is_zero():
        logger.warning("%s boundary sum is %s at n=%d", cert.family.value, boundary, n)
        return False

    which = "P" if cert.family is CertificateFamily.P_CERT else "Q"
    applied = check_recurrence(
        rec, tuple(coeff(which, m, CoeffVariant.THM2) for m in (n + 1, n, n - 1)), n
    )
    if not applied.equals(total):
        logger.warning("%s telescoped total disagrees with the recurrence at n=%d",
                       cert.family.value, n)
        return False
    return total.is_zero()


# Initial values

def contiguity_initial_checks(point: Point) -> Dict[str, float]:
    """
    Residuals of the contiguity relation fixing S(0), S(-1), and of the
    generalized evaluation at n = 0 with P(0) = Q(0) = 1/2.
    """
    a, b = point["a"], point["b"]
    with mpmath.workprec(get_settings().working_bits):
        kummer = kummer_rhs(point).value
        s0 = eval_2f1_neg1(a, b, a - b).value
        s_minus = eval_2f1_neg1(a - 1, b, a - b).value
        terms = [to_mpf(a - 2 * b) * kummer, -2 * to_mpf(a - b) * s0, to_mpf(a - b) * s_minus]
        scale = max(max(abs(t) for t in terms), 1)
        contiguity = float(abs(mpmath.fsum(terms)) / scale)
    initial = genkum_residual(0, point, CoeffVariant.THM2)
    logger.debug("Initial checks at %s: contiguity=%.3e initial=%.3e",
                 dict(point), contiguity, initial)
    return {"contiguity": contiguity, "initial_values": initial}
