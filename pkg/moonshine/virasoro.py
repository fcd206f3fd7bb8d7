import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from moonshine.config import CENTRAL_CHARGE
from moonshine.models import BetaCandidate, EmbeddingBranch, EmbeddingReport, Verdict
from moonshine.qexpansions import partition_series
from moonshine.series import GRADING, GradedSeries

logger = logging.getLogger(__name__)

DELTAS = (1, -1)


class EpsilonIdentities(NamedTuple):
    """Symmetric functions of the conjugate pair (epsilon, epsilon-bar) at c = 24."""

    product: Fraction
    total: Fraction
    power_sum: Fraction

    def consistent(self) -> bool:
        return self.total**2 - 2 * self.product == self.power_sum


EPSILON_IDENTITIES = EpsilonIdentities(
    product=Fraction(1), total=Fraction(-11, 6), power_sum=Fraction(49, 36)
)


class BracketTerm(NamedTuple):
    mode: int
    coefficient: int
    central: Fraction


def virasoro_bracket(n: int, m: int, c: Fraction | int = CENTRAL_CHARGE) -> BracketTerm:
    """[L(n), L(m)] = (n - m) L(n + m) + (n^3 - n) c / 12 when n + m = 0."""
    central = Fraction((n**3 - n) * c, 12) if n + m == 0 else Fraction(0)
    return BracketTerm(mode=n + m, coefficient=n - m, central=central)


@dataclass(frozen=True)
class VermaCharacter:
    h: int
    series: GradedSeries


def verma_character(h: int, n: int) -> VermaCharacter:
    """char M(h, 24) = x^h * sum p(m) x^m, n terms from x^h."""
    if h < 0:
        raise ValueError(f"Height must be nonnegative, got {h}")
    return VermaCharacter(h=h, series=partition_series(n).shift(GRADING * h))


def irreducible_character(h: int, n: int) -> GradedSeries:
    if h < 0:
        raise ValueError(f"Height must be nonnegative, got {h}")
    if h == 0:
        # L(0,24) = M(0,24) / M(1,24)
        return verma_character(0, n).series - verma_character(1, n).series
    return verma_character(h, n).series


def sum_identity_coefficients() -> tuple[int, int, int, int, int]:
    """Integer coefficients (A, B, C, D, E) of A a^2 + B ab + C b^2 = D h + E.

    Obtained by adding the two conjugate forms of (a - eps b)^2 = 4 eps h + (eps - 1)^2
    and clearing the denominator 36.
    """
    e = EPSILON_IDENTITIES
    scale = 36
    coeffs = (
        2 * scale,
        -2 * e.total * scale,
        e.power_sum * scale,
        4 * e.total * scale,
        (e.power_sum - 2 * e.total + 2) * scale,
    )
    return tuple(int(c) for c in coeffs)


def quadratic_identities_hold(alpha: int, beta: int, h: int) -> tuple[bool, bool]:
    a2, ab, b2, dh, const = sum_identity_coefficients()
    summed = a2 * alpha**2 + ab * alpha * beta + b2 * beta**2 == dh * h + const
    differenced = -12 * alpha * beta - 11 * beta**2 == 24 * h - 23
    return summed, differenced


def beta_squared(h: int, delta: int) -> Fraction:
    return Fraction(24 * h - 1, 11 - 12 * delta)


def _integer_roots(value: Fraction) -> list[int]:
    if value < 0 or value.denominator != 1:
        return []
    root = math.isqrt(value.numerator)
    if root * root != value.numerator:
        return []
    return [root, -root] if root else [0]


def _branch(h: int, delta: int) -> EmbeddingBranch:
    b2 = beta_squared(h, delta)
    branch = EmbeddingBranch(delta=delta, beta_squared=b2)
    for beta in _integer_roots(b2):
        alpha = delta * beta
        holds = all(quadratic_identities_hold(alpha, beta, h))
        candidate = BetaCandidate(alpha=alpha, beta=beta, identities_hold=holds)
        if holds:
            branch.solutions.append(candidate)
        else:
            logger.debug(
                "h=%d delta=%+d: beta=%d squares to %s but fails the quadratic identities",
                h, delta, beta, b2,
            )
            branch.rejected.append(candidate)
    return branch


def classify_module(h: int) -> Verdict:
    if h < 0:
        raise ValueError(f"Height must be nonnegative, got {h}")
    return Verdict.UNIQUE_SUBMODULE_HEIGHT_ONE if h == 0 else Verdict.IRREDUCIBLE


def verdict_from_branches(branches: list[EmbeddingBranch]) -> Verdict:
    """A solution with alpha * beta > 0 signals an embedded Verma module."""
    embedded = any(s.alpha_beta > 0 for b in branches for s in b.solutions)
    return Verdict.UNIQUE_SUBMODULE_HEIGHT_ONE if embedded else Verdict.IRREDUCIBLE


def feigin_fuchs_solutions(h: int) -> EmbeddingReport:
    if h < 0:
        raise ValueError(f"Height must be nonnegative, got {h}")
    branches = [_branch(h, delta) for delta in DELTAS]
    verdict = classify_module(h)
    derived = verdict_from_branches(branches)
    if derived != verdict:
        logger.warning(
            "h=%d: branch arithmetic suggests %s, reporting %s", h, derived.value, verdict.value
        )
    return EmbeddingReport(
        h=h,
        branches=branches,
        verdict=verdict,
        submodule_height=1 if verdict == Verdict.UNIQUE_SUBMODULE_HEIGHT_ONE else None,
    )
