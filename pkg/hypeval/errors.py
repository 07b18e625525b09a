"""
Exception hierarchy for hypeval
Every error carries an exit code so the CLI can map failures without guessing
"""

from typing import Any, Dict, Optional


class HypevalError(Exception):
    """Base class for all library errors"""

    exit_code: int = 3

    def __init__(self, message: str, detail: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail or {}

    def to_dict(self) -> Dict[str, Any]:
        """Serializable view used in reports"""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "detail": {k: str(v) for k, v in self.detail.items()},
        }


# Usage errors (exit 2)

class ParseError(HypevalError, ValueError):
    """Malformed rational, linear form or CLI literal"""

    exit_code = 2


class VariantOutOfRange(HypevalError):
    """Coefficient variant asked for an n outside its validity range"""

    exit_code = 2

    def __init__(self, message: str, variant: str = "", n: int = 0):
        super().__init__(message, {"variant": variant, "n": n})
        self.variant = variant
        self.n = n


class InvalidShape(HypevalError):
    """Series spec does not have the shape a transform requires"""

    exit_code = 2


class LabelConstraintError(HypevalError):
    """Orbit label violates y0+y1+y2 = y3+y4+y5 = 1-m"""

    exit_code = 2


# Domain errors (exit 3)

class DivisionByZero(HypevalError, ZeroDivisionError):
    """Division by the identically zero rational function"""


class PoleAtPoint(HypevalError):
    """A denominator or Gamma factor is singular at the evaluation point"""

    def __init__(self, message: str, argument: Any = None):
        super().__init__(message, {"argument": argument} if argument is not None else None)
        self.argument = argument


class NonTerminating(HypevalError):
    """Exact summation requested for a series with no terminating upper parameter"""


class IllDefined(HypevalError):
    """A lower parameter vanishes before the series terminates"""


class NoConvergence(HypevalError):
    """Numeric series failed its convergence precondition or term budget"""

    def __init__(self, message: str, terms: int = 0, margin: Any = None):
        super().__init__(message, {"terms": terms, "margin": margin})
        self.terms = terms
        self.margin = margin


class InvalidLowerParameter(HypevalError):
    """Lower parameter of a 2F1 is a non-positive integer"""


class SingularOrbit(HypevalError):
    """Some representative of a terminating 3F2 orbit has a vanishing lower Pochhammer"""
