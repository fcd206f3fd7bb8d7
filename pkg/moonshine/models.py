from enum import Enum
from fractions import Fraction
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, field_validator, model_validator

from moonshine.config import TABLE_TERMS

MAX_CHI = 194


class CharacterColumn(BaseModel):
    """One character column: a_h = s_h^k / deg chi_k for h = 0, 1, ..."""

    model_config = ConfigDict(frozen=True)

    chi: int = Field(ge=1, le=MAX_CHI)
    degree: PositiveInt | None = None
    coeffs: tuple[int, ...]

    @property
    def is_trivial(self) -> bool:
        return self.chi == 1


class MultiplicitySequence(BaseModel):
    """c_0..c_N: copies of chi_k in each graded piece of the module."""

    model_config = ConfigDict(frozen=True)

    chi: int = Field(ge=1, le=MAX_CHI)
    values: tuple[int, ...]


class LevelRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: PositiveInt
    h_divisor: PositiveInt
    chi_nonzero: bool = True

    @property
    def product(self) -> int:
        return self.n * self.h_divisor


class Verdict(str, Enum):
    UNIQUE_SUBMODULE_HEIGHT_ONE = "UniqueSubmoduleHeightOne"
    IRREDUCIBLE = "Irreducible"


class BetaCandidate(BaseModel):
    alpha: int
    beta: int
    identities_hold: bool

    @property
    def alpha_beta(self) -> int:
        return self.alpha * self.beta


class EmbeddingBranch(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    delta: Literal[1, -1]
    beta_squared: Fraction
    solutions: list[BetaCandidate] = []
    rejected: list[BetaCandidate] = []


class EmbeddingReport(BaseModel):
    h: int = Field(ge=0)
    branches: list[EmbeddingBranch]
    verdict: Verdict
    submodule_height: int | None = None

    def branch(self, delta: int) -> EmbeddingBranch:
        for b in self.branches:
            if b.delta == delta:
                return b
        raise KeyError(delta)


CheckStatus = Literal["pass", "fail", "warn"]


class CheckResult(BaseModel):
    name: str
    chi: int | None = None
    h: int | None = None
    status: CheckStatus
    expected: str | None = None
    actual: str | None = None
    message: str | None = None

    def sort_key(self) -> tuple:
        return (self.name, self.chi or 0, -1 if self.h is None else self.h)


class VerificationReport(BaseModel):
    checks: list[CheckResult] = []

    @property
    def overall(self) -> Literal["pass", "fail"]:
        return "fail" if self.failures() else "pass"

    @property
    def passed(self) -> bool:
        return self.overall == "pass"

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == "fail"]

    def sorted(self) -> "VerificationReport":
        return VerificationReport(checks=sorted(self.checks, key=CheckResult.sort_key))

    def merged(self, other: "VerificationReport") -> "VerificationReport":
        return VerificationReport(checks=[*self.checks, *other.checks])


class CorpusFile(BaseModel):
    columns: list[CharacterColumn]
    source_note: str = ""

    @model_validator(mode="after")
    def _columns_are_ordered_and_complete(self):
        chis = [c.chi for c in self.columns]
        if any(b <= a for a, b in zip(chis, chis[1:])):
            raise ValueError("Character indices must be strictly increasing")
        for c in self.columns:
            if len(c.coeffs) != TABLE_TERMS:
                raise ValueError(f"chi {c.chi} has {len(c.coeffs)} coefficients, expected {TABLE_TERMS}")
        return self

    def column(self, chi: int) -> CharacterColumn:
        for c in self.columns:
            if c.chi == chi:
                return c
        raise KeyError(chi)


class DegreeFile(BaseModel):
    entries: dict[int, PositiveInt]

    @field_validator("entries")
    @classmethod
    def _trivial_degree_is_one(cls, v: dict[int, int]) -> dict[int, int]:
        if 1 not in v:
            raise ValueError("The degree table has no row for the trivial character")
        if v[1] != 1:
            raise ValueError(f"The trivial character has degree 1, got {v[1]}")
        return v


class ChecksumEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    chi: int = Field(ge=1, le=MAX_CHI)
    total: int
    moment: int


class ChecksumFile(BaseModel):
    entries: dict[int, ChecksumEntry]
