import math

import pytest

from moonshine.config import DEFAULT_LEVELS_PATH
from moonshine.corpus_io import load_level_records
from moonshine.levels import N0, divides_n0, factorize, format_factorization, level_lcm
from moonshine.models import LevelRecord


def _records(*pairs: tuple[int, int]) -> list[LevelRecord]:
    return [LevelRecord(n=n, h_divisor=h) for n, h in pairs]


class TestLevelLcm:
    def test_example_level(self):
        # 4032 = 2^6 * 3^2 * 7
        assert level_lcm(_records((32, 2), (9, 1), (7, 1))) == 4032
        assert level_lcm(_records((32, 2), (27, 1), (7, 1))) == 12096

    def test_empty_selection(self):
        assert level_lcm([]) == 1

    def test_unselected_records_are_ignored(self):
        records = _records((8, 1)) + [LevelRecord(n=5, h_divisor=1, chi_nonzero=False)]
        assert level_lcm(records) == 8

    def test_monotone_and_idempotent(self):
        base = _records((4, 1), (9, 1))
        assert level_lcm(base + [LevelRecord(n=6, h_divisor=2)]) % level_lcm(base) == 0
        assert level_lcm(base + base) == level_lcm(base)

    def test_shipped_records_give_n0(self):
        assert level_lcm(load_level_records(DEFAULT_LEVELS_PATH)) == N0


class TestN0:
    def test_value(self):
        primes = [7, 11, 13, 17, 19, 23, 29, 31, 41, 47, 59, 71]
        assert N0 == 2**6 * 3**3 * 5**2 * math.prod(primes)
        assert 10**20 < N0 < 10**22

    def test_divisibility(self):
        assert divides_n0(4032)
        assert not divides_n0(2**7)


class TestFactorization:
    def test_format(self):
        assert format_factorization(4032) == "2^6*3^2*7"
        assert format_factorization(12096) == "2^6*3^3*7"
        assert format_factorization(1) == "1"

    def test_factorize_n0(self):
        assert factorize(N0)[71] == 1
        assert factorize(N0)[2] == 6

    def test_factorize_rejects_zero(self):
        with pytest.raises(ValueError):
            factorize(0)
