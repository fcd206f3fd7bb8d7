import logging
import math
from typing import Iterable

from moonshine.models import LevelRecord

logger = logging.getLogger(__name__)

# Common level of every McKay-Thompson series of the Monster.
N0_FACTORS = {2: 6, 3: 3, 5: 2, 7: 1, 11: 1, 13: 1, 17: 1, 19: 1, 23: 1, 29: 1, 31: 1, 41: 1, 47: 1, 59: 1, 71: 1}
N0 = math.prod(p**e for p, e in N0_FACTORS.items())


def level_lcm(records: Iterable[LevelRecord]) -> int:
    """lcm of n_g * h_g over the records with chi(g) != 0; 1 for an empty selection."""
    products = [r.product for r in records if r.chi_nonzero]
    level = math.lcm(*products) if products else 1
    logger.debug("Level from %d selected records: %d", len(products), level)
    return level


def divides_n0(level: int) -> bool:
    return N0 % level == 0


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (levels here are products of small primes)."""
    if n < 1:
        raise ValueError(f"Cannot factor {n}")
    factors: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def format_factorization(n: int) -> str:
    if n == 1:
        return "1"
    return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(factorize(n).items()))
