from fractions import Fraction

import pytest

from moonshine.models import Verdict
from moonshine.qexpansions import partition_numbers
from moonshine.virasoro import (
    EPSILON_IDENTITIES,
    beta_squared,
    classify_module,
    feigin_fuchs_solutions,
    irreducible_character,
    quadratic_identities_hold,
    sum_identity_coefficients,
    verdict_from_branches,
    verma_character,
    virasoro_bracket,
)


class TestCharacters:
    def test_verma_at_zero(self):
        character = verma_character(0, 5)
        assert character.series.offset24 == 0
        assert character.series.integer_coeffs() == [1, 1, 2, 3, 5]

    def test_verma_at_one_starts_at_x(self):
        series = verma_character(1, 4).series
        assert series.offset24 == 24
        assert [series.coefficient_at(h) for h in range(1, 5)] == [1, 1, 2, 3]

    def test_vacuum_character(self):
        vacuum = irreducible_character(0, 12)
        assert vacuum.integer_coeffs() == [1, 0, 1, 1, 2, 2, 4, 4, 7, 8, 12, 14]

    def test_vacuum_is_partition_difference(self):
        p = partition_numbers(200)
        vacuum = irreducible_character(0, 201).integer_coeffs()
        assert vacuum == [p[h] - p[h - 1] for h in range(201)]

    def test_positive_height_is_verma(self):
        series = irreducible_character(5, 4)
        assert [series.coefficient_at(h) for h in range(5, 9)] == [1, 1, 2, 3]

    def test_negative_height_rejected(self):
        with pytest.raises(ValueError):
            verma_character(-1, 3)


class TestIdentities:
    def test_epsilon_identities_consistent(self):
        assert EPSILON_IDENTITIES.product == 1
        assert EPSILON_IDENTITIES.total == Fraction(-11, 6)
        assert EPSILON_IDENTITIES.consistent()

    def test_sum_identity_coefficients(self):
        assert sum_identity_coefficients() == (72, 132, 49, -264, 253)

    def test_identities_at_known_solutions(self):
        assert quadratic_identities_hold(1, 1, 0) == (True, True)
        assert quadratic_identities_hold(-1, 1, 1) == (True, True)
        assert quadratic_identities_hold(-5, 5, 24) == (False, False)

    def test_bracket(self):
        term = virasoro_bracket(2, -2)
        assert (term.mode, term.coefficient, term.central) == (0, 4, 12)
        assert virasoro_bracket(1, -1).central == 0
        assert virasoro_bracket(3, 1) == (4, 2, 0)


class TestEmbeddings:
    def test_height_zero_has_unique_submodule(self):
        report = feigin_fuchs_solutions(0)
        assert report.verdict == Verdict.UNIQUE_SUBMODULE_HEIGHT_ONE
        assert report.submodule_height == 1

        plus = report.branch(1)
        assert plus.beta_squared == 1
        assert sorted(s.beta for s in plus.solutions) == [-1, 1]
        assert all(s.alpha_beta == 1 for s in plus.solutions)

        minus = report.branch(-1)
        assert minus.beta_squared == Fraction(-1, 23)
        assert minus.solutions == []

    def test_height_one_solutions_do_not_embed(self):
        report = feigin_fuchs_solutions(1)
        assert report.verdict == Verdict.IRREDUCIBLE
        assert report.submodule_height is None
        minus = report.branch(-1)
        assert minus.beta_squared == 1
        assert sorted((s.alpha, s.beta) for s in minus.solutions) == [(-1, 1), (1, -1)]
        assert all(s.alpha_beta == -1 for s in minus.solutions)
        assert report.branch(1).beta_squared == -23

    def test_height_two(self):
        report = feigin_fuchs_solutions(2)
        assert report.branch(1).beta_squared == -47
        assert report.branch(-1).beta_squared == Fraction(47, 23)
        assert all(not b.solutions for b in report.branches)
        assert report.verdict == Verdict.IRREDUCIBLE

    @pytest.mark.parametrize("h, root", [(24, 5), (47, 7)])
    def test_square_candidates_failing_identities_are_rejected(self, h, root):
        minus = feigin_fuchs_solutions(h).branch(-1)
        assert minus.beta_squared == root * root
        assert minus.solutions == []
        assert sorted(abs(c.beta) for c in minus.rejected) == [root, root]

    def test_sweep_of_heights(self):
        for h in range(1001):
            report = feigin_fuchs_solutions(h)
            assert verdict_from_branches(report.branches) == report.verdict == classify_module(h)
            if h >= 1:
                assert report.branch(1).beta_squared <= -23
                assert report.verdict == Verdict.IRREDUCIBLE
            for branch in report.branches:
                for s in branch.solutions:
                    assert quadratic_identities_hold(s.alpha, s.beta, h) == (True, True)
            if h not in (0, 1):
                assert all(not b.solutions for b in report.branches)

    def test_beta_squared_formula(self):
        assert beta_squared(3, 1) == -71
        assert beta_squared(3, -1) == Fraction(71, 23)

    def test_negative_height_rejected(self):
        with pytest.raises(ValueError):
            feigin_fuchs_solutions(-1)
