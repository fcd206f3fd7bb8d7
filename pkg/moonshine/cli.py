import logging
import sys
from enum import Enum
from pathlib import Path
from typing import Annotated, Callable, Optional

import typer
from dotenv import load_dotenv

from moonshine.config import DEFAULT_TERMS, ConfigError, Settings, load_settings
from moonshine.corpus_io import (
    CorpusParseError,
    emit_report,
    load_checksums,
    load_corpus,
    load_degrees,
    load_level_records,
)
from moonshine.decomposition import (
    DecompositionError,
    first_singular_heights,
    multiplicities_from_column,
    thompson_prefix_from_column,
    total_singular_series,
    weight_half_form,
    weight_twelve_form,
)
from moonshine.levels import N0, divides_n0, format_factorization, level_lcm
from moonshine.models import CharacterColumn, EmbeddingReport, Verdict
from moonshine.qexpansions import (
    big_J_series,
    delta_series,
    eisenstein_series,
    eta_power,
    eta_series,
    euler_function,
    j_series,
    partition_series,
)
from moonshine.series import GradedSeries, SeriesError
from moonshine.verification import VerifyOptions, run_verification
from moonshine.virasoro import feigin_fuchs_solutions, irreducible_character, verma_character

load_dotenv()

logger = logging.getLogger(__name__)

EXIT_FAILED = 1
EXIT_USAGE = 2

app = typer.Typer(
    help="Exact q-series for the Monster module as a Virasoro module at c = 24.",
    add_completion=False,
    no_args_is_help=True,
    pretty_exceptions_enable=False,
)


class SeriesKind(str, Enum):
    partition = "partition"
    euler = "euler"
    eta = "eta"
    eta23 = "eta23"
    delta = "delta"
    e4 = "e4"
    e6 = "e6"
    j = "j"
    bigJ = "bigJ"


class ReportFormatOption(str, Enum):
    text = "text"
    json = "json"


class FormWeight(str, Enum):
    half = "half"
    twelve = "twelve"


SERIES_BUILDERS: dict[SeriesKind, Callable[[int], GradedSeries]] = {
    SeriesKind.partition: partition_series,
    SeriesKind.euler: euler_function,
    SeriesKind.eta: eta_series,
    SeriesKind.eta23: lambda n: eta_power(23, n),
    SeriesKind.delta: delta_series,
    SeriesKind.e4: lambda n: eisenstein_series(4, n),
    SeriesKind.e6: lambda n: eisenstein_series(6, n),
    SeriesKind.j: j_series,
    SeriesKind.bigJ: big_J_series,
}

Terms = Annotated[int, typer.Option("--terms", min=1, help="Number of coefficients.")]
ExistingFile = Annotated[
    Optional[Path],
    typer.Option(exists=True, dir_okay=False, readable=True, help="CSV fixture (defaults to the shipped one)."),
]


def _settings() -> Settings:
    try:
        return load_settings()
    except ConfigError as e:
        _usage_error(str(e))


def _usage_error(message: str):
    typer.echo(f"Error: {message}", err=True)
    raise typer.Exit(code=EXIT_USAGE)


def _echo_series(series: GradedSeries, variable: str = "q") -> None:
    for exponent, coeff in series.terms():
        typer.echo(f"{variable}^{exponent}: {coeff}")


def _column(chi: int, corpus: Optional[Path]) -> CharacterColumn:
    path = corpus or _settings().corpus_path
    try:
        return load_corpus(path).column(chi)
    except CorpusParseError as e:
        _usage_error(f"{path}: {e}")
    except KeyError:
        _usage_error(f"chi={chi} is not in {path}")
    except OSError as e:
        _usage_error(f"cannot read fixture: {e}")


@app.callback()
def main_callback(
    log_level: Annotated[
        Optional[str], typer.Option("--log-level", help="Logging level for the error stream.")
    ] = None,
):
    level = (log_level or _settings().log_level).upper()
    if not isinstance(logging.getLevelName(level), int):
        _usage_error(f"unknown log level {level!r}")
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stderr,
    )


@app.command()
def series(
    kind: Annotated[SeriesKind, typer.Option("--kind", help="Which q-expansion to print.")],
    terms: Terms = DEFAULT_TERMS,
):
    """Print a named q-expansion with exact 1/24-graded exponents."""
    _echo_series(SERIES_BUILDERS[kind](terms))


@app.command()
def verma(
    height: Annotated[int, typer.Option("--height", min=0)],
    terms: Terms = DEFAULT_TERMS,
):
    """Print the Verma character char M(h, 24)."""
    _echo_series(verma_character(height, terms).series, "x")


@app.command()
def vacuum(terms: Terms = DEFAULT_TERMS):
    """Print the character of L(0, 24) = M(0, 24)/M(1, 24)."""
    _echo_series(irreducible_character(0, terms), "x")


def _describe(report: EmbeddingReport) -> list[str]:
    if report.verdict == Verdict.UNIQUE_SUBMODULE_HEIGHT_ONE:
        verdict = f"unique submodule, isomorphic to M({report.submodule_height},24)"
    else:
        verdict = "irreducible"
    lines = [f"h={report.h} verdict={report.verdict.value} ({verdict})"]
    for branch in report.branches:
        solutions = " ".join(
            f"(alpha={s.alpha}, beta={s.beta}, alpha*beta={s.alpha_beta:+d})" for s in branch.solutions
        ) or "none"
        line = f"  delta={branch.delta:+d} beta^2={branch.beta_squared} solutions: {solutions}"
        if branch.rejected:
            rejected = " ".join(f"(alpha={s.alpha}, beta={s.beta})" for s in branch.rejected)
            line += f" rejected (identities fail): {rejected}"
        lines.append(line)
    return lines


@app.command()
def classify(
    height: Annotated[int, typer.Option("--height", min=0)],
    max_height: Annotated[Optional[int], typer.Option("--max", min=0, help="Classify every height up to this one.")] = None,
):
    """Solve the embedding system at c = 24 and classify M(h, 24)."""
    last = height if max_height is None else max_height
    if last < height:
        _usage_error("--max must not be below --height")
    for h in range(height, last + 1):
        for line in _describe(feigin_fuchs_solutions(h)):
            typer.echo(line)


@app.command()
def deconvolve(
    chi: Annotated[int, typer.Option("--chi", min=1, max=194)],
    corpus: ExistingFile = None,
    terms: Terms = DEFAULT_TERMS,
):
    """Print the multiplicities c_hk of chi_k in each graded piece."""
    column = _column(chi, corpus)
    try:
        values = multiplicities_from_column(column, min(terms, len(column.coeffs))).values
    except (DecompositionError, SeriesError) as e:
        _usage_error(str(e))
    for h, c in enumerate(values):
        typer.echo(f"h={h}: {c}")


@app.command()
def thompson(
    chi: Annotated[int, typer.Option("--chi", min=1, max=194)],
    corpus: ExistingFile = None,
    degrees: ExistingFile = None,
    terms: Terms = DEFAULT_TERMS,
):
    """Print the McKay-Thompson prefix t_chi (times deg chi when degrees are given)."""
    column = _column(chi, corpus)
    degree = None
    if degrees is not None:
        try:
            degree = load_degrees(degrees).entries.get(chi)
        except CorpusParseError as e:
            _usage_error(f"{degrees}: {e}")
        except OSError as e:
            _usage_error(f"cannot read fixture: {e}")
        if degree is None:
            _usage_error(f"no degree for chi={chi} in {degrees}")
    _echo_series(thompson_prefix_from_column(column, min(terms, len(column.coeffs)), degree))


@app.command()
def singular(
    chi: Annotated[int, typer.Option("--chi", min=1, max=194)],
    corpus: ExistingFile = None,
    max_height: Annotated[Optional[int], typer.Option("--max-height", min=0)] = None,
):
    """Print the heights carrying new singular vectors and their counts."""
    for h, count in first_singular_heights(_column(chi, corpus), max_height):
        typer.echo(f"h={h}: {count}")


@app.command()
def forms(
    chi: Annotated[int, typer.Option("--chi", min=1, max=194)],
    weight: Annotated[FormWeight, typer.Option("--weight")] = FormWeight.half,
    corpus: ExistingFile = None,
    terms: Terms = DEFAULT_TERMS,
):
    """Print q^(-23/24) G^chi, or its product with eta^23."""
    column = _column(chi, corpus)
    build = weight_half_form if weight == FormWeight.half else weight_twelve_form
    _echo_series(build(column, min(terms, len(column.coeffs))))


@app.command()
def total(terms: Terms = DEFAULT_TERMS):
    """Print the degree-weighted singular counts over all characters, q J(q) E(q)."""
    _echo_series(total_singular_series(terms))


@app.command()
def level(
    records: Annotated[Path, typer.Option("--records", exists=True, dir_okay=False, readable=True)],
):
    """Print N_chi = lcm(n_g h_g) over the selected records."""
    try:
        value = level_lcm(load_level_records(records))
    except CorpusParseError as e:
        _usage_error(f"{records}: {e}")
    except OSError as e:
        _usage_error(f"cannot read fixture: {e}")
    typer.echo(f"N={value}")
    typer.echo(f"factorization={format_factorization(value)}")
    typer.echo(f"divides_N0={'yes' if divides_n0(value) else 'no'} (N0={N0})")


@app.command()
def verify(
    corpus: ExistingFile = None,
    degrees: ExistingFile = None,
    checksums: ExistingFile = None,
    no_checksums: Annotated[bool, typer.Option("--no-checksums", help="Skip the transcription checksums.")] = False,
    fmt: Annotated[ReportFormatOption, typer.Option("--format")] = ReportFormatOption.text,
    terms: Terms = DEFAULT_TERMS,
    workers: Annotated[Optional[int], typer.Option("--workers", min=1)] = None,
):
    """Run every corpus check; exit 0 on pass, 1 on any failing check."""
    settings = _settings()
    corpus_path = corpus or settings.corpus_path
    degrees_path = degrees or settings.degrees_path
    checksums_path = None if no_checksums else (checksums or settings.checksums_path)
    try:
        parsed = load_corpus(corpus_path, strict=False)
        degree_map = load_degrees(degrees_path).entries if degrees_path else None
        checksum_map = load_checksums(checksums_path).entries if checksums_path else None
    except CorpusParseError as e:
        _usage_error(str(e))
    except OSError as e:
        _usage_error(f"cannot read fixture: {e}")

    options = VerifyOptions(terms=terms, workers=workers or settings.workers)
    report = run_verification(parsed.columns, degree_map, checksum_map, options)
    typer.echo(emit_report(report, fmt.value).decode("utf-8"), nl=False)
    if not report.passed:
        raise typer.Exit(code=EXIT_FAILED)


def run_cli(argv: Optional[list[str]] = None) -> int:
    """Run one command line and return its exit code instead of exiting."""
    try:
        app(args=argv, prog_name="moonshine")
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    return 0


def main():
    sys.exit(run_cli())
