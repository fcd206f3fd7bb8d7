import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from moonshine.series import GRADING, GradedSeries, series_invert

logger = logging.getLogger(__name__)

J_CONSTANT = 744
DELTA_NORMALIZER = 1728
EISENSTEIN_FACTORS = {4: (3, 240), 6: (5, -504)}


class UnsupportedWeightError(ValueError):
    pass


@dataclass(frozen=True)
class PartitionTable:
    """p(0..N); indexing below zero yields 0 so that p(n - 1) needs no guard."""

    values: tuple[int, ...]

    @property
    def max_index(self) -> int:
        return len(self.values) - 1

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> int:
        if n < 0:
            return 0
        return self.values[n]


_partition_cache: list[int] = [1]
_partition_lock = threading.Lock()


def _generalized_pentagonals(limit: int):
    """Yield (sign, k(3k-1)/2, k(3k+1)/2) for k = 1, 2, ... while the first is <= limit."""
    k = 1
    while k * (3 * k - 1) // 2 <= limit:
        yield (1 if k % 2 else -1), k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
        k += 1


def partition_numbers(n: int) -> PartitionTable:
    if n < 0:
        raise ValueError(f"Partition table size must be nonnegative, got {n}")
    with _partition_lock:
        cache = _partition_cache
        for m in range(len(cache), n + 1):
            total = 0
            for sign, first, second in _generalized_pentagonals(m):
                total += sign * cache[m - first]
                if second <= m:
                    total += sign * cache[m - second]
            cache.append(total)
        values = tuple(cache[: n + 1])
    return PartitionTable(values)


@lru_cache(maxsize=256)
def partition_series(n: int) -> GradedSeries:
    """Sum of p(m) q^m to n terms, the reciprocal of the Euler function."""
    if n < 1:
        raise ValueError(f"Term count must be positive, got {n}")
    return GradedSeries.from_integers(partition_numbers(n - 1).values)


@lru_cache(maxsize=256)
def euler_function(n: int) -> GradedSeries:
    """prod_{m>=1} (1 - q^m) to n terms via the pentagonal number theorem."""
    if n < 1:
        raise ValueError(f"Term count must be positive, got {n}")
    coeffs = [0] * n
    coeffs[0] = 1
    for sign, first, second in _generalized_pentagonals(n - 1):
        # (-1)^k at both generalized pentagonal exponents
        coeffs[first] = -sign
        if second < n:
            coeffs[second] = -sign
    return GradedSeries.from_integers(coeffs)


@lru_cache(maxsize=256)
def eta_power(k: int, n: int) -> GradedSeries:
    """eta(q)^k = q^(k/24) prod (1 - q^m)^k to n terms."""
    if k < 1:
        raise ValueError(f"Eta exponent must be at least 1, got {k}")
    return (euler_function(n) ** k).shift(k)


def eta_series(n: int) -> GradedSeries:
    return eta_power(1, n)


def divisor_sigmas(power: int, n: int) -> list[int]:
    """sigma_power(m) for m = 0..n-1, with sigma(0) = 0."""
    sigmas = [0] * n
    for d in range(1, n):
        term = d**power
        for multiple in range(d, n, d):
            sigmas[multiple] += term
    return sigmas


@lru_cache(maxsize=64)
def eisenstein_series(weight: int, n: int) -> GradedSeries:
    if weight not in EISENSTEIN_FACTORS:
        raise UnsupportedWeightError(
            f"Unsupported Eisenstein weight {weight}; expected one of {sorted(EISENSTEIN_FACTORS)}"
        )
    if n < 1:
        raise ValueError(f"Term count must be positive, got {n}")
    power, factor = EISENSTEIN_FACTORS[weight]
    coeffs = [factor * s for s in divisor_sigmas(power, n)]
    coeffs[0] = 1
    return GradedSeries.from_integers(coeffs)


def delta_series(n: int) -> GradedSeries:
    """The discriminant as eta^24 (offset q^1)."""
    return eta_power(24, n)


@lru_cache(maxsize=64)
def delta_from_eisenstein(n: int) -> GradedSeries:
    """The discriminant as (E4^3 - E6^2)/1728, re-anchored at q^1."""
    e4 = eisenstein_series(4, n + 1)
    e6 = eisenstein_series(6, n + 1)
    raw = (e4**3 - e6**2) / DELTA_NORMALIZER
    if raw.coeffs[0] != 0:
        raise ArithmeticError("E4^3 - E6^2 has a nonzero constant term")
    return GradedSeries(GRADING, raw.coeffs[1:]).assert_integral("delta")


def check_delta_consistency(n: int) -> bool:
    consistent = delta_series(n) == delta_from_eisenstein(n)
    if not consistent:
        logger.error("eta^24 and (E4^3 - E6^2)/1728 disagree within %d terms", n)
    return consistent


@lru_cache(maxsize=64)
def j_series(n: int) -> GradedSeries:
    """j = E4^3 / Delta to n terms starting at q^-1."""
    if n < 1:
        raise ValueError(f"Term count must be positive, got {n}")
    e4_cubed = eisenstein_series(4, n) ** 3
    j = e4_cubed * series_invert(delta_from_eisenstein(n))
    logger.debug("Computed j to %d terms", n)
    return j.assert_integral("j")


def big_J_series(n: int) -> GradedSeries:
    """J = j - 744, the McKay-Thompson series of the identity element."""
    return j_series(n) - Fraction(J_CONSTANT)
