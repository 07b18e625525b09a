"""
Exact algebra over the symbols a, b, c

Rationals are fractions.Fraction. Polynomials are sparse dicts keyed by
exponent triples, rational functions are numerator/denominator pairs
compared by cross-multiplication.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from .errors import DivisionByZero, InvalidShape, ParseError, PoleAtPoint

SYMBOLS = ("a", "b", "c")

Monomial = Tuple[int, int, int]
Point = Mapping[str, Fraction]
Scalar = Union[int, Fraction]

_ONE: Monomial = (0, 0, 0)


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse "p/q" (optional sign) or a decimal string exactly"""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"Invalid rational literal: {text!r}", {"reason": e}) from e


def format_rational(q: Fraction) -> str:
    """Serialize as "p/q", or "p" for integers"""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _order_key(m: Monomial) -> Tuple[int, int, int, int]:
    # graded lex with a < b < c
    return (sum(m), m[2], m[1], m[0])


def _symbol_index(name: str) -> int:
    try:
        return SYMBOLS.index(name)
    except ValueError:
        raise ParseError(f"Unknown symbol: {name!r}") from None


class MultiPoly:
    """Sparse polynomial in a, b, c with rational coefficients"""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None):
        cleaned: Dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff != 0:
                    cleaned[tuple(mono)] = coeff
        self._terms = cleaned

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "MultiPoly":
        poly = cls.__new__(cls)
        poly._terms = terms
        return poly

    @classmethod
    def constant(cls, value: Scalar) -> "MultiPoly":
        return cls({_ONE: value})

    @classmethod
    def symbol(cls, name: str) -> "MultiPoly":
        exps = [0, 0, 0]
        exps[_symbol_index(name)] = 1
        return cls({tuple(exps): 1})

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterable[Tuple[Monomial, Fraction]]:
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == _ONE for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise InvalidShape(f"Polynomial is not constant: {self}")
        return self._terms.get(_ONE, Fraction(0))

    def leading(self) -> Tuple[Monomial, Fraction]:
        if not self._terms:
            raise InvalidShape("Zero polynomial has no leading term")
        mono = max(self._terms, key=_order_key)
        return mono, self._terms[mono]

    def degree_in(self, index: int) -> int:
        if not self._terms:
            return -1
        return max(m[index] for m in self._terms)

    def coefficient_in(self, index: int, degree: int) -> "MultiPoly":
        """Coefficient of symbol**degree, as a polynomial in the other symbols"""
        out: Dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            if mono[index] == degree:
                stripped = list(mono)
                stripped[index] = 0
                out[tuple(stripped)] = coeff
        return MultiPoly._raw(out)

    def content_monomial(self) -> Monomial:
        if not self._terms:
            return _ONE
        return tuple(min(m[i] for m in self._terms) for i in range(3))

    def shift_down(self, mono: Monomial) -> "MultiPoly":
        return MultiPoly._raw({
            tuple(m[i] - mono[i] for i in range(3)): c for m, c in self._terms.items()
        })

    def scale(self, factor: Scalar) -> "MultiPoly":
        factor = Fraction(factor)
        if factor == 0:
            return MultiPoly()
        return MultiPoly._raw({m: c * factor for m, c in self._terms.items()})

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            total = out.get(mono, 0) + coeff
            if total:
                out[mono] = total
            else:
                out.pop(mono, None)
        return MultiPoly._raw(out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                total = out.get(mono, 0) + c1 * c2
                if total:
                    out[mono] = total
                else:
                    out.pop(mono, None)
        return MultiPoly._raw(out)

    def __pow__(self, exponent: int) -> "MultiPoly":
        if exponent < 0:
            raise ValueError("Negative powers are not polynomials")
        result = MultiPoly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def evaluate(self, point: Point) -> Fraction:
        values = [Fraction(point.get(s, 0)) for s in SYMBOLS]
        total = Fraction(0)
        for mono, coeff in self._terms.items():
            term = coeff
            for value, power in zip(values, mono):
                if power:
                    term *= value ** power
            total += term
        return total

    def substitute(self, mapping: Mapping[int, "MultiPoly"]) -> "MultiPoly":
        """Replace symbols (by index) with polynomials"""
        powers: Dict[Tuple[int, int], MultiPoly] = {}

        def power_of(index: int, exponent: int) -> MultiPoly:
            key = (index, exponent)
            if key not in powers:
                powers[key] = mapping[index] ** exponent
            return powers[key]

        result = MultiPoly()
        for mono, coeff in self._terms.items():
            kept = [0, 0, 0]
            term = MultiPoly.constant(coeff)
            for index, exponent in enumerate(mono):
                if exponent and index in mapping:
                    term = term * power_of(index, exponent)
                else:
                    kept[index] = exponent
            if kept != [0, 0, 0]:
                term = term * MultiPoly({tuple(kept): 1})
            result = result + term
        return result

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono in sorted(self._terms, key=_order_key, reverse=True):
            coeff = self._terms[mono]
            factors = []
            for name, power in zip(SYMBOLS, mono):
                if power == 1:
                    factors.append(name)
                elif power > 1:
                    factors.append(f"{name}^{power}")
            sign = "-" if coeff < 0 else "+"
            mag = abs(coeff)
            if factors:
                body = "*".join(factors)
                if mag != 1:
                    body = f"{format_rational(mag)}*{body}"
            else:
                body = format_rational(mag)
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


class RatFunc:
    """Rational function numerator/denominator over MultiPoly"""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: Optional[MultiPoly] = None):
        den = den if den is not None else MultiPoly.constant(1)
        if den.is_zero():
            raise DivisionByZero("Rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = MultiPoly(), MultiPoly.constant(1)
            return
        # cancel monomial content, then make the denominator monic
        shared = tuple(
            min(x, y) for x, y in zip(num.content_monomial(), den.content_monomial())
        )
        if shared != _ONE:
            num, den = num.shift_down(shared), den.shift_down(shared)
        _, lead = den.leading()
        if lead != 1:
            num, den = num.scale(1 / lead), den.scale(1 / lead)
        self.num, self.den = num, den

    @classmethod
    def coerce(cls, value: "RatFuncLike") -> "RatFunc":
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, LinearForm):
            return cls(value.to_poly())
        if isinstance(value, MultiPoly):
            return cls(value)
        if isinstance(value, (int, Fraction)):
            return cls(MultiPoly.constant(value))
        if isinstance(value, str):
            return cls(parse_linear_form(value).to_poly())
        raise TypeError(f"Cannot convert {type(value).__name__} to RatFunc")

    @classmethod
    def zero(cls) -> "RatFunc":
        return cls(MultiPoly())

    @classmethod
    def one(cls) -> "RatFunc":
        return cls(MultiPoly.constant(1))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise InvalidShape(f"Rational function is not constant: {self}")
        return self.num.constant_value() / self.den.constant_value()

    def __add__(self, other: "RatFuncLike") -> "RatFunc":
        other = RatFunc.coerce(other)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other: "RatFuncLike") -> "RatFunc":
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other: "RatFuncLike") -> "RatFunc":
        return RatFunc.coerce(other) - self

    def __mul__(self, other: "RatFuncLike") -> "RatFunc":
        other = RatFunc.coerce(other)
        if other.is_constant() and other.den.is_constant():
            return RatFunc(self.num.scale(other.constant_value()), self.den)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: "RatFuncLike") -> "RatFunc":
        other = RatFunc.coerce(other)
        if other.is_zero():
            raise DivisionByZero("Division by the zero rational function", {"numerator": self})
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other: "RatFuncLike") -> "RatFunc":
        return RatFunc.coerce(other) / self

    def __pow__(self, exponent: int) -> "RatFunc":
        if exponent >= 0:
            return RatFunc(self.num ** exponent, self.den ** exponent)
        if self.is_zero():
            raise DivisionByZero("Negative power of the zero rational function")
        return RatFunc(self.den ** -exponent, self.num ** -exponent)

    def equals(self, other: "RatFuncLike") -> bool:
        other = RatFunc.coerce(other)
        if self.den == other.den:
            return self.num == other.num
        return self.num * other.den == other.num * self.den

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (RatFunc, LinearForm, MultiPoly, int, Fraction)):
            return NotImplemented
        return self.equals(other)

    __hash__ = None  # equality is not structural

    def evaluate(self, point: Point) -> Fraction:
        den = self.den.evaluate(point)
        if den == 0:
            raise PoleAtPoint(f"Denominator of {self} vanishes at {dict(point)}")
        return self.num.evaluate(point) / den

    def substitute(self, mapping: Mapping[str, "LinearLike"]) -> "RatFunc":
        """Exact composition with symbol -> LinearForm replacements"""
        polys = {_symbol_index(k): as_linear(v).to_poly() for k, v in mapping.items()}
        den = self.den.substitute(polys)
        if den.is_zero():
            raise DivisionByZero(f"Substitution {dict(mapping)} annihilates the denominator of {self}")
        return RatFunc(self.num.substitute(polys), den)

    def degree_in(self, symbol: str) -> Tuple[int, int]:
        index = _symbol_index(symbol)
        return self.num.degree_in(index), self.den.degree_in(index)

    def __str__(self) -> str:
        num = str(self.num)
        if self.den == MultiPoly.constant(1):
            return num
        if len(self.num.terms) > 1:
            num = f"({num})"
        den = str(self.den)
        if len(self.den.terms) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RatFunc({self})"


def ratfunc_equal(f: "RatFuncLike", g: "RatFuncLike") -> bool:
    return RatFunc.coerce(f).equals(g)


def ratfunc_eval(f: "RatFuncLike", point: Point) -> Fraction:
    return RatFunc.coerce(f).evaluate(point)


def ratfunc_substitute(f: "RatFuncLike", mapping: Mapping[str, "LinearLike"]) -> RatFunc:
    return RatFunc.coerce(f).substitute(mapping)


def ratfunc_limit_infinity(f: "RatFuncLike", symbol: str) -> RatFunc:
    """Limit as one symbol grows without bound, for equal or lower numerator degree"""
    f = RatFunc.coerce(f)
    if f.is_zero():
        return f
    index = _symbol_index(symbol)
    dn, dd = f.num.degree_in(index), f.den.degree_in(index)
    if dn < dd:
        return RatFunc.zero()
    if dn > dd:
        raise InvalidShape(f"{f} grows without bound as {symbol} -> oo", {"degrees": (dn, dd)})
    return RatFunc(f.num.coefficient_in(index, dn), f.den.coefficient_in(index, dd))


def ratfunc_arith(op: str, f: "RatFuncLike", g: Optional["RatFuncLike"] = None) -> RatFunc:
    """Dispatch by name: add, sub, mul, div, neg"""
    f = RatFunc.coerce(f)
    if op == "neg":
        return -f
    if g is None:
        raise ValueError(f"Operation {op!r} needs two operands")
    ops = {
        "add": lambda x, y: x + y,
        "sub": lambda x, y: x - y,
        "mul": lambda x, y: x * y,
        "div": lambda x, y: x / y,
    }
    if op not in ops:
        raise ValueError(f"Unknown operation: {op!r}")
    return ops[op](f, RatFunc.coerce(g))


@dataclass(frozen=True)
class LinearForm:
    """q0 + qa*a + qb*b + qc*c"""
    q0: Fraction = Fraction(0)
    qa: Fraction = Fraction(0)
    qb: Fraction = Fraction(0)
    qc: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("q0", "qa", "qb", "qc"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @property
    def coefficients(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (self.qa, self.qb, self.qc)

    def is_constant(self) -> bool:
        return self.qa == 0 and self.qb == 0 and self.qc == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise InvalidShape(f"Linear form is not constant: {self}")
        return self.q0

    def nonpositive_integer(self) -> Optional[int]:
        """m when the form is the constant -m with m >= 0, else None"""
        if self.is_constant() and self.q0.denominator == 1 and self.q0 <= 0:
            return int(-self.q0)
        return None

    def evaluate(self, point: Point) -> Fraction:
        return (self.q0
                + self.qa * Fraction(point.get("a", 0))
                + self.qb * Fraction(point.get("b", 0))
                + self.qc * Fraction(point.get("c", 0)))

    def to_poly(self) -> MultiPoly:
        return MultiPoly({
            _ONE: self.q0,
            (1, 0, 0): self.qa,
            (0, 1, 0): self.qb,
            (0, 0, 1): self.qc,
        })

    def to_ratfunc(self) -> RatFunc:
        return RatFunc(self.to_poly())

    def substitute(self, mapping: Mapping[str, "LinearLike"]) -> "LinearForm":
        out = LinearForm(self.q0)
        for name, coeff in zip(SYMBOLS, self.coefficients):
            if coeff == 0:
                continue
            repl = as_linear(mapping[name]) if name in mapping else LinearForm.symbol(name)
            out = out + repl * coeff
        return out

    @classmethod
    def symbol(cls, name: str) -> "LinearForm":
        coeffs = [Fraction(0)] * 3
        coeffs[_symbol_index(name)] = Fraction(1)
        return cls(Fraction(0), *coeffs)

    def __add__(self, other: "LinearLike") -> "LinearForm":
        other = as_linear(other)
        return LinearForm(self.q0 + other.q0, self.qa + other.qa,
                          self.qb + other.qb, self.qc + other.qc)

    __radd__ = __add__

    def __neg__(self) -> "LinearForm":
        return LinearForm(-self.q0, -self.qa, -self.qb, -self.qc)

    def __sub__(self, other: "LinearLike") -> "LinearForm":
        return self + (-as_linear(other))

    def __rsub__(self, other: "LinearLike") -> "LinearForm":
        return as_linear(other) - self

    def __mul__(self, k: Scalar) -> "LinearForm":
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        k = Fraction(k)
        return LinearForm(self.q0 * k, self.qa * k, self.qb * k, self.qc * k)

    __rmul__ = __mul__

    def __truediv__(self, k: Scalar) -> "LinearForm":
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        return self * (1 / Fraction(k))

    def __str__(self) -> str:
        parts = []
        for name, coeff in zip(SYMBOLS, self.coefficients):
            if coeff == 0:
                continue
            mag = abs(coeff)
            if mag == 1:
                body = name
            elif mag.numerator == 1:
                body = f"{name}/{mag.denominator}"
            else:
                body = f"{format_rational(mag)}*{name}"
            parts.append(("-" if coeff < 0 else "+", body))
        if self.q0 != 0 or not parts:
            parts.append(("-" if self.q0 < 0 else "+", format_rational(abs(self.q0))))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f"{sign}{body}"
        return text


_TERM = re.compile(
    r"^(?P<coef>\d+(?:\.\d+)?(?:/\d+)?)?\*?(?P<sym>[abc])?(?:/(?P<den>\d+))?$"
)


def parse_linear_form(text: str) -> LinearForm:
    """Parse strings like "a/2-b+1/4", "2a-3", "-1/2" """
    source = str(text).replace(" ", "")
    if not source:
        raise ParseError("Empty linear form")
    if source[0] not in "+-":
        source = "+" + source
    pieces = re.findall(r"[+-][^+-]+", source)
    if "".join(pieces) != source:
        raise ParseError(f"Invalid linear form: {text!r}")
    result = LinearForm()
    for piece in pieces:
        sign = -1 if piece[0] == "-" else 1
        match = _TERM.match(piece[1:])
        if not match or not (match.group("coef") or match.group("sym")):
            raise ParseError(f"Invalid term {piece!r} in linear form {text!r}")
        coef = parse_rational(match.group("coef")) if match.group("coef") else Fraction(1)
        if match.group("den"):
            den = int(match.group("den"))
            if den == 0:
                raise ParseError(f"Zero denominator in {text!r}")
            coef /= den
        if match.group("sym"):
            result = result + LinearForm.symbol(match.group("sym")) * (sign * coef)
        else:
            result = result + LinearForm(sign * coef)
    return result


LinearLike = Union[LinearForm, int, Fraction, str]
RatFuncLike = Union[RatFunc, LinearForm, MultiPoly, int, Fraction, str]


def as_linear(value: LinearLike) -> LinearForm:
    if isinstance(value, LinearForm):
        return value
    if isinstance(value, (int, Fraction)):
        return LinearForm(Fraction(value))
    if isinstance(value, str):
        return parse_linear_form(value)
    raise TypeError(f"Cannot convert {type(value).__name__} to LinearForm")


def parse_point(text: str) -> Dict[str, Fraction]:
    """Parse "a=3,b=1/4" into a point"""
    point: Dict[str, Fraction] = {}
    for item in filter(None, (s.strip() for s in str(text).split(","))):
        if "=" not in item:
            raise ParseError(f"Expected name=value in {item!r}")
        name, value = (s.strip() for s in item.split("=", 1))
        _symbol_index(name)
        point[name] = parse_rational(value)
    return point


la = LinearForm.symbol("a")
lb = LinearForm.symbol("b")
lc = LinearForm.symbol("c")
