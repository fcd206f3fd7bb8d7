from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

from moonshine.qexpansions import (
    UnsupportedWeightError,
    big_J_series,
    check_delta_consistency,
    delta_from_eisenstein,
    delta_series,
    divisor_sigmas,
    eisenstein_series,
    eta_power,
    euler_function,
    j_series,
    partition_numbers,
    partition_series,
)
from moonshine.series import GradedSeries


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first, *rest)


def _direct_euler(n: int) -> list[int]:
    coeffs = [1] + [0] * (n - 1)
    for m in range(1, n):
        for i in range(n - 1, m - 1, -1):
            coeffs[i] -= coeffs[i - m]
    return coeffs


class TestPartitions:
    def test_small_values(self):
        p = partition_numbers(12)
        assert list(p.values[:7]) == [1, 1, 2, 3, 5, 7, 11]
        assert p[11] == 56
        assert p[12] == 77

    def test_negative_index_is_zero(self):
        assert partition_numbers(3)[-1] == 0

    def test_against_enumeration(self):
        p = partition_numbers(40)
        for n in range(41):
            assert p[n] == sum(1 for _ in _partitions(n)), n

    def test_strictly_increasing_from_two(self):
        p = partition_numbers(200)
        assert all(p[n] < p[n + 1] for n in range(1, 200))

    def test_concurrent_callers_agree(self):
        with ThreadPoolExecutor(max_workers=8) as pool:
            tables = list(pool.map(partition_numbers, [300, 150, 299, 50, 300, 10]))
        assert tables[0] == tables[4]
        assert tables[0].values[:151] == tables[1].values

    def test_negative_size_raises(self):
        with pytest.raises(ValueError):
            partition_numbers(-1)


class TestEulerFunction:
    def test_pentagonal_terms(self):
        euler = euler_function(27)
        assert euler.integer_coeffs()[:8] == [1, -1, -1, 0, 0, 1, 0, 1]
        assert euler.coefficient_at(12) == -1
        assert euler.coefficient_at(15) == -1
        assert euler.coefficient_at(22) == 1
        assert euler.coefficient_at(26) == 1

    def test_matches_direct_product(self):
        assert euler_function(200).integer_coeffs() == _direct_euler(200)

    @pytest.mark.parametrize("n", [1, 2, 7, 60, 250, 500])
    def test_inverse_of_partitions(self, n):
        assert euler_function(n) * partition_series(n) == GradedSeries.one(n)

    @pytest.mark.slow
    def test_inverse_of_partitions_every_order(self):
        for n in range(1, 501):
            assert euler_function(n) * partition_series(n) == GradedSeries.one(n)


class TestEtaAndEisenstein:
    def test_eta_power_offsets(self):
        assert eta_power(1, 3).offset24 == 1
        assert eta_power(23, 3).offset24 == 23

    def test_delta_coefficients(self):
        assert delta_series(4).integer_coeffs() == [1, -24, 252, -1472]
        assert delta_series(4).offset24 == 24

    def test_eisenstein_coefficients(self):
        assert eisenstein_series(4, 3).integer_coeffs() == [1, 240, 2160]
        assert eisenstein_series(6, 3).integer_coeffs() == [1, -504, -16632]

    def test_divisor_sigmas(self):
        assert divisor_sigmas(1, 7) == [0, 1, 3, 4, 7, 6, 12]

    def test_unsupported_weight(self):
        with pytest.raises(UnsupportedWeightError):
            eisenstein_series(8, 3)

    def test_delta_two_ways(self):
        assert delta_series(200) == delta_from_eisenstein(200)
        assert check_delta_consistency(60)

    def test_eta_power_rejects_zero(self):
        with pytest.raises(ValueError):
            eta_power(0, 5)


class TestJ:
    def test_leading_coefficients(self):
        big_j = big_J_series(6)
        assert big_j.offset24 == -24
        assert big_j.integer_coeffs() == [1, 0, 196884, 21493760, 864299970, 20245856256]

    def test_j_differs_by_constant(self):
        difference = j_series(5) - big_J_series(5)
        assert difference == GradedSeries(-24, (0, 744, 0, 0, 0))

    def test_coefficients_outgrow_64_bits(self):
        assert big_J_series(52).coefficient_at(50) > 2**63

    @pytest.mark.parametrize(
        "build",
        [
            partition_series,
            euler_function,
            lambda n: eta_power(23, n),
            delta_series,
            lambda n: eisenstein_series(4, n),
            lambda n: eisenstein_series(6, n),
            j_series,
            big_J_series,
        ],
    )
    def test_every_constructor_is_integral(self, build):
        assert build(60).is_integral()

    def test_coefficient_types_are_exact(self):
        assert all(isinstance(c, Fraction) for c in big_J_series(10).coeffs)
