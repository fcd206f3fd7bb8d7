import logging
from typing import Iterable

from moonshine.config import DEFAULT_DIMENSION_HEIGHT
from moonshine.models import CharacterColumn, CheckResult, MultiplicitySequence, VerificationReport
from moonshine.qexpansions import (
    big_J_series,
    eta_power,
    eta_series,
    euler_function,
    partition_numbers,
    partition_series,
)
from moonshine.series import GRADING, GradedSeries, TruncationError

logger = logging.getLogger(__name__)

# Known rows for the trivial character, heights 0..12.
VACUUM_TABLE = (1, 0, 1, 1, 2, 2, 4, 4, 7, 8, 12, 14, 21)
TRIVIAL_MULTIPLICITY_TABLE = (1, 0, 1, 1, 2, 2, 4, 4, 7, 8, 12, 14, 22)
# (height, number of new singular vectors) in the trivial part for heights <= 30.
SINGULAR_COUNT_TABLE = (
    (12, 1), (16, 1), (18, 1), (20, 1), (22, 1), (24, 3),
    (26, 2), (27, 1), (28, 4), (29, 2), (30, 6),
)
SINGULAR_COUNT_MAX_HEIGHT = 30


class DecompositionError(Exception):
    pass


class MalformedColumnError(DecompositionError):
    pass


class InvalidMultiplicitiesError(DecompositionError):
    pass


class InvalidSingularSeriesError(DecompositionError):
    pass


class MissingDegreeError(DecompositionError):
    pass


def _sign_violations(coeffs: tuple[int, ...], trivial: bool) -> list[int]:
    expected_head = (1, -1) if trivial else (0, 0)
    bad = []
    for h, a in enumerate(coeffs):
        if h < 2:
            if a != expected_head[h]:
                bad.append(h)
        elif a < 0:
            bad.append(h)
    return bad


def sign_violations(col: CharacterColumn) -> list[int]:
    """Heights whose entry breaks the sign pattern of a singular-vector column.

    Trivial character: a_0 = 1, a_1 = -1, everything else nonnegative.
    Others: a_0 = a_1 = 0 (no vacuum, nothing at height one), everything else nonnegative.
    """
    return _sign_violations(col.coeffs, col.is_trivial)


def validate_column(col: CharacterColumn) -> CharacterColumn:
    bad = sign_violations(col)
    if bad:
        raise MalformedColumnError(
            f"Column chi={col.chi} breaks the sign pattern at h={', '.join(map(str, bad))}"
        )
    return col


def _column_series(col: CharacterColumn, n: int | None) -> GradedSeries:
    n = len(col.coeffs) if n is None else n
    if n > len(col.coeffs):
        raise TruncationError(
            f"Column chi={col.chi} has {len(col.coeffs)} coefficients, {n} requested"
        )
    return GradedSeries.from_integers(col.coeffs[:n])


def multiplicities_from_series(series: GradedSeries) -> list[int]:
    """Convolve singular counts with p(n): the character of a sum of Verma modules."""
    return (series * partition_series(series.order)).integer_coeffs()


def multiplicities_from_column(col: CharacterColumn, n: int | None = None) -> MultiplicitySequence:
    validate_column(col)
    values = multiplicities_from_series(_column_series(col, n))
    return MultiplicitySequence(chi=col.chi, values=tuple(values))


def column_from_multiplicities(
    c: MultiplicitySequence,
    is_trivial: bool,
    n: int | None = None,
    degree: int | None = None,
) -> CharacterColumn:
    n = len(c.values) if n is None else n
    if n > len(c.values):
        raise TruncationError(f"Multiplicities for chi={c.chi} have {len(c.values)} terms, {n} requested")
    values = c.values[:n]
    if len(values) > 1 and values[1] != 0:
        raise InvalidMultiplicitiesError(
            f"chi={c.chi}: multiplicity at height 1 must be 0, got {values[1]}"
        )
    if values and values[0] != (1 if is_trivial else 0):
        raise InvalidMultiplicitiesError(
            f"chi={c.chi}: multiplicity at height 0 must be {1 if is_trivial else 0}, got {values[0]}"
        )

    coeffs = tuple((GradedSeries.from_integers(values) * euler_function(n)).integer_coeffs())
    bad = _sign_violations(coeffs, is_trivial)
    if bad:
        raise InvalidSingularSeriesError(
            f"chi={c.chi}: not a valid singular-vector series (bad entries at h={bad})"
        )
    return CharacterColumn(chi=c.chi, degree=degree, coeffs=coeffs)


def thompson_prefix_from_column(
    col: CharacterColumn, n: int | None = None, degree: int | None = None
) -> GradedSeries:
    """q^-1 (sum a_h q^h) / E(q): t_chi normalized by deg chi, or deg chi * t_chi with a degree."""
    series = _column_series(col, n)
    prefix = (series * partition_series(series.order)).shift(-GRADING)
    return prefix * degree if degree is not None else prefix


def weight_half_form(col: CharacterColumn, n: int | None = None) -> GradedSeries:
    """q^(-23/24) G^chi(q) / deg chi."""
    return _column_series(col, n).shift(-23)


def weight_twelve_form(col: CharacterColumn, n: int | None = None) -> GradedSeries:
    """q^(-23/24) G^chi(q) eta(q)^23 / deg chi: weight 12, no polar part."""
    half = weight_half_form(col, n)
    return (half * eta_power(23, half.order)).assert_integral(f"weight-12 form of chi={col.chi}")


def eta_relation_holds(col: CharacterColumn, n: int | None = None) -> bool:
    half = weight_half_form(col, n)
    return half == thompson_prefix_from_column(col, n) * eta_series(half.order)


def trivial_vacuum_series(n: int) -> GradedSeries:
    """Character of the vacuum module L(0,24): p(h) - p(h-1)."""
    if n < 1:
        raise ValueError(f"Term count must be positive, got {n}")
    p = partition_numbers(n - 1)
    return GradedSeries.from_integers(p[h] - p[h - 1] for h in range(n))


def first_singular_heights(
    col: CharacterColumn, max_height: int | None = None
) -> list[tuple[int, int]]:
    limit = len(col.coeffs) - 1 if max_height is None else min(max_height, len(col.coeffs) - 1)
    return [(h, col.coeffs[h]) for h in range(2, limit + 1) if col.coeffs[h]]


def total_singular_series(n: int) -> GradedSeries:
    """Degree-weighted singular counts over all characters: q J(q) E(q)."""
    return big_J_series(n).shift(GRADING) * euler_function(n)


def monster_dimensions(n: int) -> list[int]:
    """Graded dimensions of the module for heights 0..n-1, read off q J(q)."""
    return big_J_series(n).shift(GRADING).integer_coeffs()


def dimension_identity_check(
    columns: Iterable[CharacterColumn], h_max: int = DEFAULT_DIMENSION_HEIGHT
) -> VerificationReport:
    """sum_k c_hk deg chi_k against the J coefficient, for h = 2..h_max."""
    columns = list(columns)
    for col in columns:
        if col.degree is None:
            raise MissingDegreeError(f"No degree supplied for chi={col.chi}")

    dims = monster_dimensions(h_max + 1)
    totals = [0] * (h_max + 1)
    for col in columns:
        mults = multiplicities_from_column(col, min(h_max + 1, len(col.coeffs))).values
        for h, c in enumerate(mults):
            totals[h] += c * col.degree

    checks = []
    for h in range(2, h_max + 1):
        ok = totals[h] == dims[h]
        if not ok:
            logger.error("Dimension identity fails at h=%d: %d != %d", h, totals[h], dims[h])
        checks.append(
            CheckResult(
                name="dimension_identity",
                h=h,
                status="pass" if ok else "fail",
                expected=str(dims[h]),
                actual=str(totals[h]),
            )
        )
    return VerificationReport(checks=checks)
