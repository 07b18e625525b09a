"""
hypeval: exact and numeric verification of contiguous hypergeometric evaluations

Generalized Kummer 2F1(-1), Gosper 2F1(1/4) and Dixon 3F2(1) identities,
their recurrences and certificates, and the series transformations used to
derive them.
"""

from .errors import (
    DivisionByZero,
    HypevalError,
    IllDefined,
    InvalidLowerParameter,
    InvalidShape,
    LabelConstraintError,
    NoConvergence,
    NonTerminating,
    ParseError,
    PoleAtPoint,
    SingularOrbit,
    VariantOutOfRange,
)
from .exact import (
    LinearForm,
    MultiPoly,
    RatFunc,
    parse_linear_form,
    parse_rational,
    ratfunc_equal,
    ratfunc_eval,
    ratfunc_limit_infinity,
    ratfunc_substitute,
)
from .extensions import (
    SpecialKind,
    dixon_coeff,
    gendixon_residual,
    gengosper_residual,
    gosper_coeff,
    special_evaluations,
)
from .hyper import (
    GammaProduct,
    NumericValue,
    SeriesSpec,
    eval_2f1_neg1,
    eval_gamma_product,
    eval_series_numeric,
    sum_terminating,
)
from .kummer import CoeffVariant, coeff, genkum_residual, kummer_residual
from .recurrence import (
    CertificateFamily,
    Family,
    build_recurrence,
    check_recurrence,
    contiguity_initial_checks,
    verify_certificate,
)
from .settings import Settings, configure, get_settings
from .transforms import (
    OrbitLabel,
    TwoTermKind,
    eval_transformed,
    orbit_terminating,
    thomae_transform,
    transform_terminating,
    two_term_2f1,
)

__version__ = "1.0.0"
__all__ = [
    "CertificateFamily",
    "CoeffVariant",
    "DivisionByZero",
    "Family",
    "GammaProduct",
    "HypevalError",
    "IllDefined",
    "InvalidLowerParameter",
    "InvalidShape",
    "LabelConstraintError",
    "LinearForm",
    "MultiPoly",
    "NoConvergence",
    "NonTerminating",
    "NumericValue",
    "OrbitLabel",
    "ParseError",
    "PoleAtPoint",
    "RatFunc",
    "SeriesSpec",
    "Settings",
    "SingularOrbit",
    "SpecialKind",
    "TwoTermKind",
    "VariantOutOfRange",
    "build_recurrence",
    "check_recurrence",
    "coeff",
    "configure",
    "contiguity_initial_checks",
    "dixon_coeff",
    "eval_2f1_neg1",
    "eval_gamma_product",
    "eval_series_numeric",
    "eval_transformed",
    "gendixon_residual",
    "gengosper_residual",
    "genkum_residual",
    "get_settings",
    "gosper_coeff",
    "kummer_residual",
    "orbit_terminating",
    "parse_linear_form",
    "parse_rational",
    "ratfunc_equal",
    "ratfunc_eval",
    "ratfunc_limit_infinity",
    "ratfunc_substitute",
    "special_evaluations",
    "sum_terminating",
    "thomae_transform",
    "transform_terminating",
    "two_term_2f1",
    "verify_certificate",
]
