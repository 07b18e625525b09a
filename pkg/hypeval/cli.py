"""
hypeval command line

Exit codes: 0 pass, 1 check failure, 2 usage error, 3 domain error.
"""

import functools
import logging
import math
import time
from dataclasses import asdict
from typing import Callable, List, Optional

import click
import mpmath

from .errors import HypevalError, ParseError
from .exact import format_rational, parse_linear_form, parse_point, parse_rational
from .hyper import (
    SeriesSpec,
    eval_2f1_neg1,
    eval_gamma_product,
    eval_series_numeric,
    parse_gamma_product,
    sum_terminating,
)
from .kummer import coeff, parse_variant
from .report import CheckRecord, Report
from .settings import configure, get_settings, save_settings
from .suites import SUITES, SuiteOptions, parse_n_range, run_suite
from .transforms import OrbitLabel, orbit_terminating

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s [%(levelname)8s] %(name)s: %(message)s"

EXIT_PASS, EXIT_FAIL = 0, 1


def _split(text: str) -> List[str]:
    return [part.strip() for part in str(text).split(",") if part.strip()]


def handle_errors(command: Callable) -> Callable:
    """Turn library errors into a one-line diagnostic and their exit code"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return command(*args, **kwargs)
        except HypevalError as e:
            click.echo(f"❌ {type(e).__name__}: {e.message}", err=True)
            ctx.exit(e.exit_code)
        except (click.exceptions.Exit, click.ClickException):
            raise
        except Exception as e:
            logger.exception("Unexpected failure")
            click.echo(f"❌ Unexpected error: {e}", err=True)
            ctx.exit(EXIT_FAIL)

    return wrapper


def _digits() -> int:
    return max(10, int(get_settings().precision_bits * math.log10(2)) - 2)


def emit(ctx: click.Context, report: Report, human: Callable[[Report], None]) -> None:
    if ctx.obj["json"]:
        click.echo(report.to_json(ctx.obj["deterministic"]))
    else:
        human(report)
    ctx.exit(EXIT_PASS if report.status == "pass" else EXIT_FAIL)


@click.group()
@click.option("--precision", type=int, help="Mantissa bits for numeric evaluation")
@click.option("--seed", type=int, envvar="HYPEVAL_SEED", help="Seed for sampled points")
@click.option("--tol", type=float, help="Residual tolerance for numeric checks")
@click.option("--workers", type=int, help="Concurrent verification workers")
@click.option("--config", "config_path", type=click.Path(), help="Settings JSON file")
@click.option("--json", "as_json", is_flag=True, help="Print the JSON report only")
@click.option("--deterministic", is_flag=True, help="Zero runtimes in JSON reports")
@click.option("--verbose", is_flag=True, help="Enable debug logging")
@click.pass_context
def cli(ctx, precision: Optional[int], seed: Optional[int], tol: Optional[float],
        workers: Optional[int], config_path: Optional[str], as_json: bool,
        deterministic: bool, verbose: bool):
    """Exact and numeric verification of hypergeometric identities"""

    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, format=LOG_FORMAT)
    ctx.ensure_object(dict)
    ctx.obj["json"] = as_json
    ctx.obj["deterministic"] = deterministic
    try:
        configure(config_path, precision_bits=precision, seed=seed, tol=tol, workers=workers)
    except ValueError as e:
        raise click.BadParameter(str(e))


# eval

@cli.group(name="eval")
def eval_group():
    """Evaluate a single series or Gamma product"""


def _eval_report(command: str, parameters: dict, value, exact=None) -> Report:
    values = {
        "value": mpmath.nstr(value.value, _digits()),
        "error_estimate": mpmath.nstr(value.error_estimate, 3),
        "path": value.path,
    }
    if exact is not None:
        values["exact"] = format_rational(exact)
    record = CheckRecord(name=command, kind="numeric", status="pass", values=values,
                         parameters=parameters)
    return Report(command=command, parameters=parameters, records=[record])


def _print_value(report: Report) -> None:
    values = report.records[0].values
    exact = f" = {values['exact']}" if "exact" in values else ""
    click.echo(f"✅ {report.command}{exact} ≈ {values['value']}")
    click.echo(f"📊 error estimate {values['error_estimate']} via {values['path']}")


@eval_group.command(name="2f1-neg1")
@click.option("--upper", required=True, help="A,B as rationals")
@click.option("--lower", required=True, help="C as a rational")
@click.option("--path", default="auto", type=click.Choice(["auto", "direct", "pfaff"]))
@click.pass_context
@handle_errors
def eval_2f1(ctx, upper: str, lower: str, path: str):
    """2F1(A, B; C; -1) with analytic continuation"""
    uppers = [parse_rational(x) for x in _split(upper)]
    lowers = [parse_rational(x) for x in _split(lower)]
    if len(uppers) != 2 or len(lowers) != 1:
        raise ParseError("2f1-neg1 needs two upper parameters and one lower parameter")
    A, B = uppers
    (C,) = lowers
    start = time.perf_counter()
    value = eval_2f1_neg1(A, B, C, path)
    spec = SeriesSpec.of([A, B], [C], -1)
    exact = sum_terminating(spec).constant_value() if spec.is_terminating() else None
    logger.debug("Evaluated in %.3f ms", (time.perf_counter() - start) * 1000)
    report = _eval_report(f"2F1({format_rational(A)}, {format_rational(B)}; "
                          f"{format_rational(C)}; -1)",
                          {"upper": upper, "lower": lower, "path": path}, value, exact)
    emit(ctx, report, _print_value)


@eval_group.command(name="gamma-product")
@click.option("--spec", "text", required=True, help='e.g. "3/4*G(c)*G(3-c/2)/G(5-c)"')
@click.option("--point", default="", help='e.g. "a=3,b=1/4"')
@click.pass_context
@handle_errors
def eval_gamma(ctx, text: str, point: str):
    """Product of Gamma values at linear arguments"""
    g = parse_gamma_product(text)
    value = eval_gamma_product(g, parse_point(point) if point else {})
    emit(ctx, _eval_report(str(g), {"spec": text, "point": point}, value), _print_value)


@eval_group.command(name="series")
@click.option("--upper", required=True, help="Upper parameters, linear forms in a, b, c")
@click.option("--lower", default="", help="Lower parameters")
@click.option("--z", "argument", default="1", help="Argument as a rational")
@click.option("--point", default="", help='e.g. "a=3,b=1/4"')
@click.pass_context
@handle_errors
def eval_series(ctx, upper: str, lower: str, argument: str, point: str):
    """Generic pFq, exact when it terminates"""
    spec = SeriesSpec.of([parse_linear_form(x) for x in _split(upper)],
                         [parse_linear_form(x) for x in _split(lower)],
                         parse_rational(argument))
    if not point and not spec.is_constant():
        raise ParseError(f"Series {spec} needs a --point for its symbols")
    concrete = spec.at(parse_point(point) if point else {})
    value = eval_series_numeric(concrete)
    exact = sum_terminating(concrete).constant_value() if concrete.is_terminating() else None
    emit(ctx, _eval_report(str(concrete), {"upper": upper, "lower": lower, "z": argument,
                                          "point": point}, value, exact), _print_value)


# verify

def _print_verify(report: Report) -> None:
    counts = report.counts()
    icon = "✅" if report.status == "pass" else "❌"
    click.echo(f"{icon} {report.command}: {counts['pass']} passed, {counts['fail']} failed, "
               f"{counts['error']} errors, {counts['skip']} skipped")
    for record in report.failures:
        params = ", ".join(f"{k}={v}" for k, v in record.parameters.items())
        click.echo(f"   • {record.name} [{params}] {record.status}: "
                   f"{record.reason or ''} residual={record.residual}")
    for name in report.starved:
        click.echo(f"   • {name}: no admissible sample point")
    for record in report.records:
        if record.status == "skip":
            logger.info("Skipped %s: %s", record.name, record.reason)
    numeric = [r.residual for r in report.records
               if r.kind == "numeric" and isinstance(r.residual, float)]
    if numeric:
        click.echo(f"📊 largest numeric residual {max(numeric):.3e}")


@cli.command()
@click.argument("suite", type=click.Choice(list(SUITES) + ["all"]))
@click.option("--n-range", help="Inclusive range such as -5..5")
@click.option("--points", type=int, help="Sample points per setting")
@click.option("--seed", type=int, help="Override the sweep seed")
@click.option("--tol", type=float, help="Override the residual tolerance")
@click.option("--kind", help="Special evaluation kind (special suite)")
@click.option("--param", help="Parameter of the special evaluation")
@click.pass_context
@handle_errors
def verify(ctx, suite: str, n_range: Optional[str], points: Optional[int], seed: Optional[int],
           tol: Optional[float], kind: Optional[str], param: Optional[str]):
    """Run a verification suite"""
    options = SuiteOptions(
        n_range=parse_n_range(n_range) if n_range else None,
        points=points,
        seed=seed if seed is not None else get_settings().seed,
        tol=tol,
        kind=kind,
        param=param,
    )
    report = run_suite(suite, options)
    emit(ctx, report, _print_verify)


# pq-table

def _print_table(report: Report) -> None:
    click.echo(f"📋 {report.command}")
    for record in report.records:
        click.echo(f"   n={record.parameters['n']} [{record.parameters['variant']}]")
        click.echo(f"      P = {record.values['P']}")
        click.echo(f"      Q = {record.values['Q']}")


@cli.command(name="pq-table")
@click.option("--n-range", required=True, help="Inclusive range such as -3..1")
@click.option("--variant", help="THM1, THM2, NEG, ALT_A..ALT_D or REFLECT")
@click.pass_context
@handle_errors
def pq_table(ctx, n_range: str, variant: Optional[str]):
    """Print P(n) and Q(n) as rational functions"""
    low, high = parse_n_range(n_range)
    chosen = parse_variant(variant) if variant else None
    records = []
    for n in range(low, high + 1):
        p = coeff("P", n, chosen)
        q = coeff("Q", n, chosen)
        records.append(CheckRecord(
            name=f"PQ({n})", kind="exact", status="pass",
            parameters={"n": str(n), "variant": chosen.value if chosen else "default"},
            values={"P": str(p), "Q": str(q)},
        ))
    report = Report(command="pq-table", parameters={"n_range": n_range,
                                                    "variant": variant or "default"},
                    records=records)
    emit(ctx, report, _print_table)


# orbit

def _print_orbit(report: Report) -> None:
    for record in report.records[:-1]:
        click.echo(f"   {record.name:8s} {record.values['series']}  ->  {record.values['value']}")
    icon = "✅" if report.status == "pass" else "❌"
    click.echo(f"{icon} {len(report.records) - 1} representatives, "
               f"{'all equal' if report.status == 'pass' else 'values disagree'}")


@cli.command()
@click.option("--m", "m", type=int, required=True, help="Terminating length")
@click.option("--y", "y", required=True, help="Six label values y0..y5")
@click.pass_context
@handle_errors
def orbit(ctx, m: int, y: str):
    """List the 18 transformed forms of a terminating 3F2(1)"""
    label = OrbitLabel(tuple(parse_linear_form(v) for v in _split(y)), m)
    records = []
    values = []
    for ts in orbit_terminating(label):
        value = ts.exact_value()
        values.append(value)
        records.append(CheckRecord(name=ts.label, kind="exact", status="pass",
                                   values={"series": str(ts), "value": str(value)}))
    consistent = all(v.equals(values[0]) for v in values[1:])
    records.append(CheckRecord(name="orbit-consistent", kind="exact",
                               status="pass" if consistent else "fail",
                               residual="exact-zero" if consistent else None))
    report = Report(command="orbit", parameters={"m": str(m), "y": y}, records=records)
    emit(ctx, report, _print_orbit)


# config

@cli.group()
def config():
    """Inspect or persist settings"""


@config.command(name="show")
@click.pass_context
def config_show(ctx):
    """Print the active settings"""
    settings = get_settings()
    if ctx.obj["json"]:
        click.echo(Report(command="config show",
                          parameters={k: str(v) for k, v in asdict(settings).items()})
                   .to_json(True))
        return
    click.echo("🔧 Active settings")
    for key, value in asdict(settings).items():
        click.echo(f"   {key} = {value}")


@config.command(name="save")
@click.option("--path", default="hypeval.json", help="Target JSON file")
def config_save(path: str):
    """Write the active settings to JSON"""
    target = save_settings(get_settings(), path)
    click.echo(f"💾 Saved settings to {target}")


if __name__ == "__main__":
    cli()
