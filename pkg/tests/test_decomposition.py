import pytest

from moonshine.config import DEFAULT_CORPUS_PATH, DEFAULT_DEGREES_PATH
from moonshine.corpus_io import load_corpus, load_degrees
from moonshine.decomposition import (
    SINGULAR_COUNT_TABLE,
    TRIVIAL_MULTIPLICITY_TABLE,
    VACUUM_TABLE,
    InvalidMultiplicitiesError,
    InvalidSingularSeriesError,
    MalformedColumnError,
    MissingDegreeError,
    column_from_multiplicities,
    dimension_identity_check,
    eta_relation_holds,
    first_singular_heights,
    monster_dimensions,
    multiplicities_from_column,
    multiplicities_from_series,
    thompson_prefix_from_column,
    total_singular_series,
    trivial_vacuum_series,
    weight_half_form,
    weight_twelve_form,
)
from moonshine.models import CharacterColumn, MultiplicitySequence
from moonshine.series import TruncationError
from moonshine.virasoro import irreducible_character


@pytest.fixture(scope="module")
def corpus():
    return load_corpus(DEFAULT_CORPUS_PATH)


@pytest.fixture(scope="module")
def degrees():
    return load_degrees(DEFAULT_DEGREES_PATH).entries


def _zero_column(chi: int = 7) -> CharacterColumn:
    return CharacterColumn(chi=chi, coeffs=(0,) * 52)


class TestMultiplicities:
    def test_trivial_row(self, corpus):
        values = multiplicities_from_column(corpus.column(1), 13).values
        assert values == TRIVIAL_MULTIPLICITY_TABLE
        assert values[12] == 22

    def test_second_character(self, corpus):
        values = multiplicities_from_column(corpus.column(2)).values
        assert values[:2] == (0, 0)
        assert values[2:6] == (1, 1, 2, 3)

    def test_zero_column(self):
        assert multiplicities_from_column(_zero_column()).values == (0,) * 52

    def test_malformed_column_rejected(self):
        coeffs = [0] * 52
        coeffs[5] = -1
        with pytest.raises(MalformedColumnError, match="h=5"):
            multiplicities_from_column(CharacterColumn(chi=3, coeffs=tuple(coeffs)))

    def test_too_many_terms_requested(self, corpus):
        with pytest.raises(TruncationError):
            multiplicities_from_column(corpus.column(2), 53)

    def test_roundtrip_over_corpus(self, corpus):
        for col in corpus.columns:
            mults = multiplicities_from_column(col)
            assert column_from_multiplicities(mults, col.is_trivial).coeffs == col.coeffs, col.chi

    def test_inverse_of_trivial_row(self):
        back = column_from_multiplicities(
            MultiplicitySequence(chi=1, values=TRIVIAL_MULTIPLICITY_TABLE), is_trivial=True
        )
        assert back.coeffs == (1, -1) + (0,) * 10 + (1,)

    def test_height_one_multiplicity_rejected(self):
        with pytest.raises(InvalidMultiplicitiesError):
            column_from_multiplicities(MultiplicitySequence(chi=2, values=(0, 1, 0)), is_trivial=False)

    def test_non_realizable_multiplicities_rejected(self):
        with pytest.raises(InvalidSingularSeriesError):
            column_from_multiplicities(MultiplicitySequence(chi=2, values=(0, 0, 1, 0)), is_trivial=False)


class TestForms:
    def test_thompson_prefix_of_trivial(self, corpus):
        prefix = thompson_prefix_from_column(corpus.column(1))
        assert prefix.offset24 == -24
        assert prefix.coefficient_at(-1) == 1
        assert prefix.coefficient_at(0) == 0
        assert prefix.coefficient_at(1) == 1

    def test_thompson_prefix_of_second_character(self, corpus):
        prefix = thompson_prefix_from_column(corpus.column(2))
        assert [prefix.coefficient_at(m) for m in range(1, 5)] == [1, 1, 2, 3]
        scaled = thompson_prefix_from_column(corpus.column(2), degree=196883)
        assert scaled.coefficient_at(1) == 196883

    def test_weight_half_form(self, corpus):
        trivial = weight_half_form(corpus.column(1))
        assert trivial.offset24 == -23
        assert trivial.coefficient(-23) == 1
        last = weight_half_form(corpus.column(194))
        assert last.coefficient(-23 + 24 * 51) == 1990504962

    def test_eta_relation_for_every_column(self, corpus):
        assert all(eta_relation_holds(col) for col in corpus.columns)

    def test_weight_twelve_is_holomorphic(self, corpus):
        trivial = weight_twelve_form(corpus.column(1))
        assert trivial.offset24 == 0
        assert trivial.coefficient(0) == 1
        second = weight_twelve_form(corpus.column(2))
        assert second.integer_coeffs()[:3] == [0, 0, 1]


class TestTrivialCharacter:
    def test_vacuum_table(self):
        assert tuple(trivial_vacuum_series(13).integer_coeffs()) == VACUUM_TABLE
        assert trivial_vacuum_series(40) == irreducible_character(0, 40)

    def test_singular_heights(self, corpus):
        assert first_singular_heights(corpus.column(1), 30) == list(SINGULAR_COUNT_TABLE)

    def test_singular_heights_of_other_columns(self, corpus):
        assert first_singular_heights(corpus.column(2))[0] == (2, 1)
        assert first_singular_heights(_zero_column()) == []


class TestTotals:
    def test_total_singular_series(self):
        total = total_singular_series(6)
        assert total.offset24 == 0
        assert total.integer_coeffs()[:5] == [1, -1, 196883, 21296876, 842609326]

    def test_total_matches_degree_weighted_columns(self, corpus, degrees):
        total = total_singular_series(5).integer_coeffs()
        for h in range(2, 5):
            weighted = sum(degrees[chi] * corpus.column(chi).coeffs[h] for chi in degrees)
            assert weighted == total[h], h

    def test_dimensions_from_total(self):
        assert multiplicities_from_series(total_singular_series(6)) == monster_dimensions(6)
        assert monster_dimensions(6) == [1, 0, 196884, 21493760, 864299970, 20245856256]

    def test_dimension_identity(self, corpus, degrees):
        columns = [corpus.column(chi).model_copy(update={"degree": d}) for chi, d in degrees.items()]
        report = dimension_identity_check(columns, 5)
        assert report.passed
        assert [c.h for c in report.checks] == [2, 3, 4, 5]
        assert report.checks[1].expected == "21493760"
        assert report.checks[3].actual == "20245856256"

    def test_dimension_identity_needs_degrees(self, corpus):
        with pytest.raises(MissingDegreeError):
            dimension_identity_check([corpus.column(1)], 5)
