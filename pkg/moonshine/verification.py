import asyncio
import logging
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from pydantic import BaseModel, Field

from moonshine.config import DEFAULT_DIMENSION_HEIGHT, DEFAULT_WORKERS, TABLE_TERMS
from moonshine.decomposition import (
    SINGULAR_COUNT_MAX_HEIGHT,
    SINGULAR_COUNT_TABLE,
    TRIVIAL_MULTIPLICITY_TABLE,
    VACUUM_TABLE,
    column_from_multiplicities,
    dimension_identity_check,
    eta_relation_holds,
    first_singular_heights,
    multiplicities_from_column,
    sign_violations,
    thompson_prefix_from_column,
    trivial_vacuum_series,
    weight_half_form,
    weight_twelve_form,
)
from moonshine.models import CharacterColumn, ChecksumEntry, CheckResult, VerificationReport
from moonshine.qexpansions import check_delta_consistency, eta_series

logger = logging.getLogger(__name__)


class VerifyOptions(BaseModel):
    terms: int = Field(TABLE_TERMS, ge=1)
    dimension_height: int = Field(DEFAULT_DIMENSION_HEIGHT, ge=2)
    workers: int = Field(DEFAULT_WORKERS, ge=1)


@dataclass(frozen=True)
class _Context:
    terms: int
    checksums: Mapping[int, ChecksumEntry] | None


def _passed(name: str, chi: int | None = None, **kwargs) -> CheckResult:
    return CheckResult(name=name, chi=chi, status="pass", **kwargs)


def _failed(name: str, chi: int | None = None, **kwargs) -> CheckResult:
    return CheckResult(name=name, chi=chi, status="fail", **kwargs)


def _guarded(name: str, chi: int | None, check: Callable[[], list[CheckResult]]) -> list[CheckResult]:
    """Run one check; an exception inside it becomes a failing entry."""
    try:
        return check()
    except Exception as e:
        logger.debug("Check %s for chi=%s raised: %s", name, chi, e)
        return [_failed(name, chi, message=str(e))]


def _check_sign_pattern(col: CharacterColumn) -> list[CheckResult]:
    bad = sign_violations(col)
    if not bad:
        return [_passed("sign_pattern", col.chi)]
    return [
        _failed("sign_pattern", col.chi, h=h, actual=str(col.coeffs[h]))
        for h in bad
    ]


def _check_multiplicities(col: CharacterColumn, n: int) -> list[CheckResult]:
    values = multiplicities_from_column(col, n).values
    negative = [h for h, c in enumerate(values) if c < 0]
    if negative:
        return [_failed("multiplicities", col.chi, h=negative[0], actual=str(values[negative[0]]))]
    if len(values) > 1 and values[1] != 0:
        return [_failed("multiplicities", col.chi, h=1, expected="0", actual=str(values[1]))]
    return [_passed("multiplicities", col.chi)]


def _check_roundtrip(col: CharacterColumn, n: int) -> list[CheckResult]:
    back = column_from_multiplicities(multiplicities_from_column(col, n), col.is_trivial, n)
    diffs = [h for h in range(n) if back.coeffs[h] != col.coeffs[h]]
    if diffs:
        h = diffs[0]
        return [_failed("roundtrip", col.chi, h=h, expected=str(col.coeffs[h]), actual=str(back.coeffs[h]))]
    return [_passed("roundtrip", col.chi)]


def _check_eta_relation(col: CharacterColumn, n: int) -> list[CheckResult]:
    if eta_relation_holds(col, n):
        return [_passed("eta_relation", col.chi)]
    # localize the first disagreeing height
    half = weight_half_form(col, n)
    product = thompson_prefix_from_column(col, n) * eta_series(n)
    if half.offset24 != product.offset24:
        return [_failed("eta_relation", col.chi, expected=str(half.offset24), actual=str(product.offset24))]
    for h, (a, b) in enumerate(zip(half.coeffs, product.coeffs)):
        if a != b:
            return [_failed("eta_relation", col.chi, h=h, expected=str(a), actual=str(b))]
    return [_failed("eta_relation", col.chi, message="forms disagree past the compared range")]


def _check_weight_twelve(col: CharacterColumn, n: int) -> list[CheckResult]:
    form = weight_twelve_form(col, n)
    if form.offset24 != 0:
        return [_failed("weight_twelve_holomorphy", col.chi, expected="0", actual=str(form.offset24))]
    return [_passed("weight_twelve_holomorphy", col.chi)]


def locate_checksum_fault(col: CharacterColumn, entry: ChecksumEntry) -> tuple[int, int] | None:
    """(sum difference, height) when a single-entry change explains the mismatch."""
    d_total = sum(col.coeffs) - entry.total
    d_moment = sum(h * a for h, a in enumerate(col.coeffs)) - entry.moment
    if d_total == 0 or d_moment % d_total:
        return None
    h = d_moment // d_total
    return (d_total, h) if 0 <= h < len(col.coeffs) else None


def _check_checksum(col: CharacterColumn, checksums: Mapping[int, ChecksumEntry]) -> list[CheckResult]:
    entry = checksums.get(col.chi)
    if entry is None:
        return [_failed("checksum", col.chi, message="no checksum entry for this character")]
    total = sum(col.coeffs)
    moment = sum(h * a for h, a in enumerate(col.coeffs))
    if (total, moment) == (entry.total, entry.moment):
        return [_passed("checksum", col.chi)]
    fault = locate_checksum_fault(col, entry)
    h = fault[1] if fault else None
    return [
        _failed(
            "checksum",
            col.chi,
            h=h,
            expected=f"{entry.total}/{entry.moment}",
            actual=f"{total}/{moment}",
        )
    ]


def _column_checks(col: CharacterColumn, ctx: _Context) -> list[CheckResult]:
    n = min(ctx.terms, len(col.coeffs))
    results = _check_sign_pattern(col)
    results += _guarded("multiplicities", col.chi, lambda: _check_multiplicities(col, n))
    results += _guarded("roundtrip", col.chi, lambda: _check_roundtrip(col, n))
    results += _guarded("eta_relation", col.chi, lambda: _check_eta_relation(col, n))
    results += _guarded("weight_twelve_holomorphy", col.chi, lambda: _check_weight_twelve(col, n))
    if ctx.checksums is not None:
        results += _check_checksum(col, ctx.checksums)
    return results


def _compare_rows(name: str, chi: int, expected: Sequence[int], actual: Sequence[int]) -> list[CheckResult]:
    for h, (e, a) in enumerate(zip(expected, actual)):
        if e != a:
            return [_failed(name, chi, h=h, expected=str(e), actual=str(a))]
    if len(actual) < len(expected):
        return [_failed(name, chi, message=f"only {len(actual)} of {len(expected)} heights available")]
    return [_passed(name, chi)]


def _trivial_checks(col: CharacterColumn) -> list[CheckResult]:
    n = len(VACUUM_TABLE)
    results = _compare_rows("vacuum_table", 1, VACUUM_TABLE, trivial_vacuum_series(n).integer_coeffs())

    def _multiplicity_table():
        mults = multiplicities_from_column(col, min(n, len(col.coeffs))).values
        rows = _compare_rows("trivial_multiplicity_table", 1, TRIVIAL_MULTIPLICITY_TABLE, mults)
        vacuum = trivial_vacuum_series(len(mults)).integer_coeffs()
        gaps = [c - a for c, a in zip(mults, vacuum)]
        # the two rows agree below height 12 and differ by the one singular vector there
        expected_gaps = [0 if h < n - 1 else 1 for h in range(len(gaps))]
        if gaps != expected_gaps:
            h = next(i for i, (g, e) in enumerate(zip(gaps, expected_gaps)) if g != e)
            rows.append(_failed("vacuum_divergence", 1, h=h, expected=str(expected_gaps[h]), actual=str(gaps[h])))
        else:
            rows.append(_passed("vacuum_divergence", 1))
        return rows

    def _singular_counts():
        found = first_singular_heights(col, SINGULAR_COUNT_MAX_HEIGHT)
        if found == list(SINGULAR_COUNT_TABLE):
            return [_passed("singular_count_table", 1)]
        mismatch = sorted(set(found) ^ set(SINGULAR_COUNT_TABLE))[0]
        return [
            _failed(
                "singular_count_table",
                1,
                h=mismatch[0],
                expected=str(dict(SINGULAR_COUNT_TABLE).get(mismatch[0], 0)),
                actual=str(dict(found).get(mismatch[0], 0)),
            )
        ]

    results += _guarded("trivial_multiplicity_table", 1, _multiplicity_table)
    results += _guarded("singular_count_table", 1, _singular_counts)
    return results


def _dimension_checks(
    columns: Sequence[CharacterColumn], degrees: Mapping[int, int], h_max: int
) -> list[CheckResult]:
    with_degrees = [c.model_copy(update={"degree": degrees[c.chi]}) for c in columns if c.chi in degrees]
    results: list[CheckResult] = []
    for col in columns:
        # malformed columns already fail sign_pattern
        if col.chi in degrees or sign_violations(col):
            continue
        low = multiplicities_from_column(col, min(h_max + 1, len(col.coeffs))).values
        if any(low[2:]):
            results.append(
                CheckResult(
                    name="dimension_coverage",
                    chi=col.chi,
                    status="warn",
                    message=f"no degree for a character present below height {h_max + 1}",
                )
            )
    results += _guarded(
        "dimension_identity", None, lambda: dimension_identity_check(with_degrees, h_max).checks
    )
    return results


async def verify_corpus(
    columns: Sequence[CharacterColumn],
    degrees: Mapping[int, int] | None = None,
    checksums: Mapping[int, ChecksumEntry] | None = None,
    options: VerifyOptions | None = None,
) -> VerificationReport:
    """Run every corpus check; failures are report entries, never exceptions."""
    options = options or VerifyOptions()
    if not columns:
        logger.warning("Empty corpus: no checks run")
        return VerificationReport(
            checks=[CheckResult(name="corpus", status="warn", message="empty corpus, no checks run")]
        )

    ctx = _Context(terms=options.terms, checksums=checksums)
    semaphore = asyncio.Semaphore(options.workers)

    async def _verify(col: CharacterColumn) -> list[CheckResult]:
        async with semaphore:
            logger.debug("Verifying chi=%d", col.chi)
            return await asyncio.to_thread(_column_checks, col, ctx)

    per_column = await asyncio.gather(*[_verify(col) for col in columns])
    checks = [result for results in per_column for result in results]

    trivial = next((c for c in columns if c.is_trivial), None)
    if trivial is not None:
        checks += _trivial_checks(trivial)
    else:
        checks.append(CheckResult(name="trivial_tables", status="warn", message="no chi=1 column"))

    checks += _guarded(
        "delta_consistency",
        None,
        lambda: [_passed("delta_consistency")]
        if check_delta_consistency(options.terms)
        else [_failed("delta_consistency")],
    )

    if degrees is not None:
        checks += _dimension_checks(columns, degrees, options.dimension_height)
    else:
        logger.warning("No degrees supplied: dimension identity skipped")
        checks.append(CheckResult(name="dimension_identity", status="warn", message="no degrees supplied"))
    if checksums is None:
        logger.warning("No checksums supplied: transcription check skipped")
        checks.append(CheckResult(name="checksum", status="warn", message="no checksums supplied"))

    report = VerificationReport(checks=checks).sorted()
    failures = report.failures()
    logger.info("Ran %d checks over %d columns, %d failing", len(report.checks), len(columns), len(failures))
    for failure in failures:
        logger.error("Check %s failed for chi=%s h=%s", failure.name, failure.chi, failure.h)
    return report


def run_verification(
    columns: Sequence[CharacterColumn],
    degrees: Mapping[int, int] | None = None,
    checksums: Mapping[int, ChecksumEntry] | None = None,
    options: VerifyOptions | None = None,
) -> VerificationReport:
    return asyncio.run(verify_corpus(columns, degrees, checksums, options))
