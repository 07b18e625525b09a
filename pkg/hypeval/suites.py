"""
Verification sweeps

Each suite expands into independent checks that run concurrently through
asyncio worker threads; results come back in check order.
"""

import asyncio
import logging
import math
import random
import threading
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Type

import mpmath

from . import extensions, kummer, recurrence, transforms
from .errors import (
    HypevalError,
    IllDefined,
    InvalidLowerParameter,
    NoConvergence,
    ParseError,
    PoleAtPoint,
    SingularOrbit,
)
from .exact import RatFunc
from .hyper import SeriesSpec, eval_2f1_neg1, eval_series_numeric, relative_residual, sum_terminating
from .report import CheckRecord, Report, format_value
from .settings import get_settings

logger = logging.getLogger(__name__)

SUITES = (
    "genkum", "kummer", "gosper", "dixon", "certificates", "orbit", "special",
    "recurrences", "transforms", "continuation", "whipple",
)

# Errors that mark a sample point as inadmissible rather than a failed identity
_INADMISSIBLE = (PoleAtPoint, InvalidLowerParameter, SingularOrbit, IllDefined)

# mpmath keeps its precision in one process-wide context
_NUMERIC_LOCK = threading.Lock()


@dataclass
class Check:
    """One deferred verification"""
    name: str
    kind: str                                # "exact" or "numeric"
    fn: Callable[[], Any]
    parameters: Dict[str, Any] = field(default_factory=dict)
    tol: Optional[float] = None
    expect_error: Optional[Type[HypevalError]] = None


@dataclass
class SuiteOptions:
    """Knobs shared by all suites"""
    n_range: Optional[Tuple[int, int]] = None
    points: Optional[int] = None
    seed: Optional[int] = None
    tol: Optional[float] = None
    kind: Optional[str] = None
    param: Optional[str] = None

    def n_values(self, default: Tuple[int, int]) -> range:
        low, high = self.n_range or default
        return range(low, high + 1)

    def count(self, default: int) -> int:
        return self.points if self.points is not None else default


def parse_n_range(text: str) -> Tuple[int, int]:
    """"-5..5" -> (-5, 5)"""
    try:
        low, high = str(text).split("..")
        low, high = int(low), int(high)
    except ValueError:
        raise ParseError(f"Expected an n-range like -5..5, got {text!r}") from None
    if low > high:
        raise ParseError(f"Empty n-range {text!r}")
    return low, high


# Sample points

def _rational(rng: random.Random, low: int, high: int, denominators: Sequence[int]) -> Fraction:
    while True:
        q = Fraction(rng.randint(low, high), rng.choice(denominators))
        if q.denominator != 1:
            return q


def kummer_points(seed: int, count: int) -> List[Dict[str, Fraction]]:
    """a, b with coprime denominators, so a-b, a/2, (a+1)/2 and b stay off the integers"""
    rng = random.Random(seed)
    return [{"a": _rational(rng, 1, 40, (5, 7, 11)), "b": _rational(rng, -20, 12, (4, 9))}
            for _ in range(count)]


def gosper_points(seed: int, count: int) -> List[Dict[str, Fraction]]:
    rng = random.Random(seed)
    return [{"a": _rational(rng, 1, 12, (5, 7))} for _ in range(count)]


def dixon_points(seed: int, count: int) -> List[Dict[str, Fraction]]:
    """Points with a - 2b - 2c > 3 so the 3F2(1) converges for n <= 2"""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        b = _rational(rng, -6, 5, (11,))
        c = _rational(rng, -6, 5, (13,))
        a = 2 * b + 2 * c + 3 + _rational(rng, 2, 30, (7,))
        out.append({"a": a, "b": b, "c": c})
    return out


def whipple_points(seed: int, count: int) -> List[Dict[str, Fraction]]:
    rng = random.Random(seed)
    return [{"a": 3 + _rational(rng, 1, 30, (7,)), "b": _rational(rng, -8, 4, (9,))}
            for _ in range(count)]


# Running checks

def _judge(check: Check, result: Any, tol: float) -> Tuple[str, Any, Optional[str]]:
    if isinstance(result, RatFunc):
        if result.is_zero():
            return "pass", "exact-zero", None
        return "fail", str(result), "nonzero exact residual"
    if isinstance(result, bool):
        if result:
            return "pass", "exact-zero" if check.kind == "exact" else 0.0, None
        return "fail", None, "identity check returned false"
    residual = float(result)
    if check.kind == "exact":
        return ("pass", "exact-zero", None) if residual == 0 else ("fail", residual, "nonzero")
    if math.isfinite(residual) and residual < tol:
        return "pass", residual, None
    return "fail", residual, f"residual above {tol:g}"


def run_check(check: Check, tol: Optional[float] = None) -> CheckRecord:
    tol = check.tol if check.tol is not None else (tol or get_settings().tol)
    params = {k: format_value(v) for k, v in check.parameters.items()}
    start = time.perf_counter()
    reason = None
    try:
        if check.kind == "numeric":
            with _NUMERIC_LOCK, mpmath.workprec(get_settings().working_bits):
                result = check.fn()
        else:
            result = check.fn()
    except HypevalError as e:
        if check.expect_error is not None and isinstance(e, check.expect_error):
            status, residual = "pass", f"raised {type(e).__name__}"
        elif isinstance(e, _INADMISSIBLE):
            status, residual, reason = "skip", None, f"{type(e).__name__}: {e.message}"
        else:
            status, residual, reason = "error", None, f"{type(e).__name__}: {e.message}"
    except Exception as e:
        # one broken check must not abort the sweep
        logger.exception("Check %s raised unexpectedly", check.name)
        status, residual, reason = "error", None, f"{type(e).__name__}: {e}"
    else:
        if check.expect_error is not None:
            status, residual = "fail", None
            reason = f"expected {check.expect_error.__name__}"
        else:
            status, residual, reason = _judge(check, result, tol)
    runtime = round((time.perf_counter() - start) * 1000, 3)
    if status in ("fail", "error"):
        logger.warning("Check %s %s at %s: %s", check.name, status, params, reason)
    return CheckRecord(name=check.name, kind=check.kind, status=status, residual=residual,
                       runtime_ms=runtime, parameters=params, reason=reason)


class SweepRunner:
    """Bounded concurrent execution of checks"""

    def __init__(self, workers: Optional[int] = None, tol: Optional[float] = None):
        settings = get_settings()
        self.workers = workers or settings.workers
        self.tol = tol if tol is not None else settings.tol
        self.completed = 0

    async def _run_one(self, check: Check, semaphore: asyncio.Semaphore) -> CheckRecord:
        async with semaphore:
            record = await asyncio.to_thread(run_check, check, self.tol)
            self.completed += 1
            return record

    async def run(self, checks: Sequence[Check]) -> List[CheckRecord]:
        semaphore = asyncio.Semaphore(self.workers)
        return list(await asyncio.gather(*(self._run_one(c, semaphore) for c in checks)))

    def run_sync(self, checks: Sequence[Check]) -> List[CheckRecord]:
        return asyncio.run(self.run(checks))


# Suite builders

def _genkum(o: SuiteOptions, seed: int) -> List[Check]:
    checks = []
    for n in o.n_values((-5, 5)):
        for point in kummer_points(seed, o.count(20)):
            checks.append(Check(f"genkum[n={n}]", "numeric",
                                lambda n=n, p=point: kummer.genkum_residual(n, p),
                                {"n": n, "point": point}))
    for n in range(-8, 9):
        for which in ("P", "Q"):
            checks.append(Check(f"variants[{which}({n})]", "exact",
                                lambda w=which, n=n: _variants_agree(w, n), {"n": n}))
    return checks


def _variants_agree(which: str, n: int) -> bool:
    variants = kummer.variants_for(which, n)
    values = [kummer.coeff(which, n, v) for v in variants]
    return len(values) >= 1 and all(v.equals(values[0]) for v in values[1:])


def _kummer(o: SuiteOptions, seed: int) -> List[Check]:
    points = [{"a": Fraction(1), "b": Fraction(-1)}] + kummer_points(seed, o.count(20))
    return [Check("kummer", "numeric", lambda p=p: kummer.kummer_residual(p), {"point": p},
                  tol=1e-10)
            for p in points]


def _gosper(o: SuiteOptions, seed: int) -> List[Check]:
    checks = []
    for n in o.n_values((-4, 4)):
        for point in gosper_points(seed, o.count(5)):
            checks.append(Check(f"gengosper[n={n}]", "numeric",
                                lambda n=n, p=point: extensions.gengosper_residual(n, p),
                                {"n": n, "point": point}, tol=1e-8))
        point = gosper_points(seed, 1)[0]
        checks.append(Check(f"gengosper-pfaff[n={n}]", "numeric",
                            lambda n=n, p=point: extensions.gengosper_residual(n, p, True),
                            {"n": n, "point": point}, tol=1e-8))
    for n in range(2, 7):
        checks.append(Check(f"gosper-4f3[K({-n})]", "exact",
                            lambda n=n: extensions.gosper_coeff("K", -n).equals(
                                extensions.gosper_coeff_4f3("K", -n)),
                            {"n": -n}))
    return checks


def _dixon(o: SuiteOptions, seed: int) -> List[Check]:
    checks = []
    for n in o.n_values((-3, 1)):
        for point in dixon_points(seed, o.count(5)):
            checks.append(Check(f"gendixon[n={n}]", "numeric",
                                lambda n=n, p=point: extensions.gendixon_residual(n, p),
                                {"n": n, "point": point}, tol=1e-8))
    for n in range(0, 5):
        for which in ("P", "Q"):
            checks.append(Check(f"dixon-limit[{which}~({n})]", "exact",
                                lambda w=which, n=n: extensions.dixon_kummer_limit(w, n),
                                {"n": n}))
    return checks


def _certificates(o: SuiteOptions, seed: int) -> List[Check]:
    checks = []
    for n in o.n_values((1, 12)):
        for family in recurrence.CertificateFamily:
            checks.append(Check(f"certificate[{family.value}]", "exact",
                                lambda f=family, n=n: recurrence.verify_certificate(f, n),
                                {"n": n}))
    return checks


def random_label(rng: random.Random, m: int) -> transforms.OrbitLabel:
    """Powers of 2 in the first triple, powers of 3 in the second: no y_i + y_j is an integer"""
    y0 = _rational(rng, -9, 9, (2, 4))
    y1 = Fraction(2 * rng.randint(-36, 35) + 1, 8)
    y3 = _rational(rng, -9, 9, (3, 9))
    y4 = Fraction(3 * rng.randint(-40, 40) + 1, 27)
    return transforms.OrbitLabel((y0, y1, 1 - m - y0 - y1, y3, y4, 1 - m - y3 - y4), m)


def _orbit(o: SuiteOptions, seed: int) -> List[Check]:
    rng = random.Random(seed)
    checks = []
    for m in range(0, 4):
        for _ in range(o.count(10)):
            label = random_label(rng, m)
            checks.append(Check("orbit", "exact",
                                lambda lab=label: transforms.orbit_consistent(lab),
                                {"m": m, "y": ",".join(str(y) for y in label.y)}))
    return checks


def _special(o: SuiteOptions, seed: int) -> List[Check]:
    if o.kind:
        kind = extensions.parse_special_kind(o.kind)
        cases = [(kind, o.param)]
    else:
        cases = [
            (extensions.SpecialKind.Q4_ZERO, None),
            (extensions.SpecialKind.SPECFO1, "5/2"),
            (extensions.SpecialKind.SPECFO1, "11/4"),
            (extensions.SpecialKind.SPECFO1, "13/4"),
            (extensions.SpecialKind.CONTIG_SPECFO1, "11/4"),
            (extensions.SpecialKind.SPECFO2, "3"),
            (extensions.SpecialKind.SPECFO2, "4"),
            (extensions.SpecialKind.P5_ZERO, "3"),
            (extensions.SpecialKind.P5_ZERO, "4"),
        ]
    checks = []
    for kind, param in cases:
        exact = kind in (extensions.SpecialKind.Q4_ZERO, extensions.SpecialKind.P5_ZERO)
        tol = 1e-10 if kind is extensions.SpecialKind.SPECFO1 else 1e-8
        checks.append(Check(f"special[{kind.value}]", "exact" if exact else "numeric",
                            lambda k=kind, p=param: extensions.special_evaluations(k, p),
                            {"param": param if param is not None else "default"}, tol=tol))
    return checks


def _recurrences(o: SuiteOptions, seed: int) -> List[Check]:
    checks = []
    for n in o.n_values((-7, 7)):
        for which in ("P", "Q"):
            checks.append(Check(f"kummer-rec[{which}]", "exact",
                                lambda w=which, n=n: recurrence.check_kummer_sequence(w, n),
                                {"n": n}))
            if n <= -2:
                for variant in (kummer.CoeffVariant.NEG, kummer.CoeffVariant.REFLECT):
                    checks.append(Check(f"kummer-rec[{which},{variant.value}]", "exact",
                                        lambda w=which, n=n, v=variant:
                                        recurrence.check_kummer_sequence(w, n, v),
                                        {"n": n}))
    for n in range(-3, 4):
        for which in ("K", "L"):
            checks.append(Check(f"gosper-rec[{which}]", "exact",
                                lambda w=which, n=n: extensions.check_gosper_recurrence(w, n),
                                {"n": n}))
        for which in ("P", "Q"):
            checks.append(Check(f"dixon-rec[{which}~]", "exact",
                                lambda w=which, n=n: extensions.check_dixon_recurrence(w, n),
                                {"n": n}))
    kummer_rec = recurrence.build_recurrence(recurrence.Family.KUMMER)
    for point in kummer_points(seed, o.count(5)):
        for n in range(-2, 3):
            checks.append(Check("kummer-rec-numeric", "numeric",
                                lambda n=n, p=point: recurrence.numeric_recurrence_residual(
                                    kummer_rec, n, p, recurrence.kummer_sequence(p)),
                                {"n": n, "point": point}))
        for name in ("contiguity", "initial_values"):
            checks.append(Check(f"initial[{name}]", "numeric",
                                lambda p=point, k=name: recurrence.contiguity_initial_checks(p)[k],
                                {"point": point}))
    for point in gosper_points(seed, o.count(5)):
        for n in range(-2, 3):
            checks.append(Check("gosper-rec-numeric", "numeric",
                                lambda n=n, p=point: extensions.gosper_numeric_recurrence(n, p),
                                {"n": n, "point": point}, tol=1e-8))
    for point in dixon_points(seed, o.count(5)):
        for n in range(-2, 2):
            checks.append(Check("dixon-rec-numeric", "numeric",
                                lambda n=n, p=point: extensions.dixon_numeric_recurrence(n, p),
                                {"n": n, "point": point}, tol=1e-8))
    return checks


def _terminating_instance(rng: random.Random) -> SeriesSpec:
    m = rng.randint(0, 4)
    A, B, E, F = (_rational(rng, -12, 12, (2, 3, 5, 7)) for _ in range(4))
    return SeriesSpec.of([-m, A, B], [E, F])


def _terminating_check(spec: SeriesSpec) -> bool:
    return sum_terminating(spec).equals(transforms.transform_terminating(spec).exact_value())


def _thomae_instance(rng: random.Random) -> SeriesSpec:
    while True:
        A, B, C = (_rational(rng, 1, 12, (3, 5, 7)) for _ in range(3))
        E = _rational(rng, 1, 20, (4, 9))
        F = A + B + C - E + _rational(rng, 3, 9, (4,))
        if F > 0 and F - C >= 1:
            return SeriesSpec.of([A, B, C], [E, F])


def _thomae_check(spec: SeriesSpec) -> float:
    image = transforms.thomae_transform(spec)
    return relative_residual(eval_series_numeric(spec), transforms.eval_transformed(image))


def _two_term_check(kind: transforms.TwoTermKind, params, z) -> float:
    direct = eval_series_numeric(SeriesSpec.of(params[:2], params[2:], z))
    image = transforms.eval_transformed(transforms.two_term_2f1(kind, params, z))
    return relative_residual(direct, image)


def _bateman_check(point, n: int) -> float:
    a, b = point["a"], point["b"]
    lhs = eval_2f1_neg1(a + n, b, a - b)
    image = transforms.two_term_2f1(transforms.TwoTermKind.BATEMAN_292, [a + n, b, a - b], -1)
    return relative_residual(lhs, transforms.eval_transformed(image))


def _transforms(o: SuiteOptions, seed: int) -> List[Check]:
    rng = random.Random(seed)
    checks = []
    for _ in range(o.count(50)):
        spec = _terminating_instance(rng)
        checks.append(Check("terminating-transform", "exact",
                            lambda s=spec: _terminating_check(s), {"series": spec}))
    for _ in range(o.count(50)):
        spec = _thomae_instance(rng)
        checks.append(Check("thomae", "numeric", lambda s=spec: _thomae_check(s),
                            {"series": spec}, tol=1e-8))
    nu = Fraction(3, 2)
    whip2 = SeriesSpec.of([-(nu + 1) / 2, Fraction(1, 8), -nu / 2], [Fraction(5, 2), -nu])
    checks.append(Check("thomae-rejects-divergent-image", "numeric",
                        lambda: transforms.thomae_transform(whip2), {"series": whip2},
                        expect_error=NoConvergence))
    for kind in (transforms.TwoTermKind.PFAFF_A, transforms.TwoTermKind.PFAFF_B,
                 transforms.TwoTermKind.EULER):
        for z in (Fraction(-1, 2), Fraction(1, 3), Fraction(1, 2)):
            params = [_rational(rng, -9, 9, (2, 3, 5)) for _ in range(2)]
            params.append(_rational(rng, 1, 12, (4, 7)))
            checks.append(Check(f"two-term[{kind.value}]", "numeric",
                                lambda k=kind, p=params, z=z: _two_term_check(k, p, z),
                                {"params": ",".join(str(x) for x in params), "z": z},
                                tol=1e-8))
    for point in kummer_points(seed, o.count(5))[:5]:
        for n in (-2, 0, 3):
            checks.append(Check("two-term[BATEMAN_292]", "numeric",
                                lambda p=point, n=n: _bateman_check(p, n),
                                {"n": n, "point": point}, tol=1e-8))
    return checks


def _continuation_check(A: Fraction, B: Fraction, C: Fraction) -> float:
    direct = eval_2f1_neg1(A, B, C, path="direct")
    pfaff = eval_2f1_neg1(A, B, C, path="pfaff")
    gap = abs(direct.value - pfaff.value) - 10 * (direct.error_estimate + pfaff.error_estimate)
    return float(max(gap, 0) / max(1, abs(pfaff.value)))


def _continuation(o: SuiteOptions, seed: int) -> List[Check]:
    rng = random.Random(seed)
    checks = []
    for _ in range(o.count(50)):
        A = _rational(rng, -20, 20, (3, 5))
        B = _rational(rng, -20, 20, (7, 11))
        # margin C - A - B in (-1/2, 2)
        C = A + B + _rational(rng, -3, 15, (8,))
        if C.denominator == 1 and C <= 0:
            continue
        checks.append(Check("continuation", "numeric",
                            lambda A=A, B=B, C=C: _continuation_check(A, B, C),
                            {"A": A, "B": B, "C": C}))
    return checks


def _whipple(o: SuiteOptions, seed: int) -> List[Check]:
    checks = []
    nus = [Fraction(1, 2), Fraction(3, 2), Fraction(1, 3), Fraction(5, 4), Fraction(7, 3)]
    for nu in nus:
        for point in whipple_points(seed, o.count(5)):
            for index in (0, 1):
                checks.append(Check(f"whipple-nu[{index + 1}]", "numeric",
                                    lambda nu=nu, p=point, i=index: kummer.whipple_nu(nu, p)[i],
                                    {"nu": nu, "point": point}, tol=1e-8))
    for A, B, C in ((Fraction(1, 2), Fraction(1, 3), Fraction(5, 2)),
                    (Fraction(3, 4), Fraction(-1, 5), Fraction(9, 4))):
        for variant in ("W841", "W841A"):
            checks.append(Check(f"whipple-expansion[{variant}]", "numeric",
                                lambda A=A, B=B, C=C, v=variant: relative_residual(
                                    kummer.whipple_expansion(A, B, C, v), eval_2f1_neg1(A, B, C)),
                                {"A": A, "B": B, "C": C}, tol=1e-8))
    return checks


_BUILDERS: Dict[str, Callable[[SuiteOptions, int], List[Check]]] = {
    "genkum": _genkum,
    "kummer": _kummer,
    "gosper": _gosper,
    "dixon": _dixon,
    "certificates": _certificates,
    "orbit": _orbit,
    "special": _special,
    "recurrences": _recurrences,
    "transforms": _transforms,
    "continuation": _continuation,
    "whipple": _whipple,
}


def build_suite(name: str, options: SuiteOptions) -> List[Check]:
    seed = options.seed if options.seed is not None else get_settings().seed
    if name == "all":
        checks: List[Check] = []
        for suite in SUITES:
            checks.extend(_tagged(suite, _BUILDERS[suite](options, seed)))
        return checks
    if name not in _BUILDERS:
        raise ParseError(f"Unknown suite {name!r}; expected one of {', '.join(SUITES)} or all")
    return _tagged(name, _BUILDERS[name](options, seed))


def _tagged(suite: str, checks: List[Check]) -> List[Check]:
    for check in checks:
        check.name = f"{suite}:{check.name}"
    return checks


def run_suite(name: str, options: Optional[SuiteOptions] = None,
              workers: Optional[int] = None) -> Report:
    options = options or SuiteOptions()
    checks = build_suite(name, options)
    runner = SweepRunner(workers=workers, tol=options.tol)
    records = runner.run_sync(checks)
    report = Report(
        command=f"verify {name}",
        parameters={k: format_value(v) for k, v in vars(options).items() if v is not None},
        records=records,
    )
    counts = report.counts()
    logger.info("Suite %s: %d checks, %d passed, %d failed, %d skipped, %d errors",
                name, len(records), counts["pass"], counts["fail"], counts["skip"], counts["error"])
    return report
