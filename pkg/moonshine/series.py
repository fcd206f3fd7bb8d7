import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

logger = logging.getLogger(__name__)

# Exponents live on the lattice (1/24)Z: slot i of a series holds the
# coefficient of q^((offset24 + GRADING * i) / GRADING).
GRADING = 24

Scalar = int | Fraction


class SeriesError(Exception):
    pass


class NonUnitSeriesError(SeriesError):
    pass


class GradingMismatchError(SeriesError):
    pass


class TruncationError(SeriesError):
    pass


class NonIntegralSeriesError(SeriesError):
    pass


def _exact(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"Exact coefficient expected, got {type(value).__name__}")


def format_exponent(exponent24: int) -> str:
    """Render an exponent given in units of 1/24 exactly, e.g. -1, 0, -23/24."""
    return str(Fraction(exponent24, GRADING))


@dataclass(frozen=True, eq=False)
class GradedSeries:
    """Truncated formal series in q^(1/24) with exact rational coefficients.

    ``coeffs`` has exactly ``order`` entries; everything from slot ``order`` on
    is unknown, not zero. Arithmetic never extends a series past what both
    operands know.
    """

    offset24: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(_exact(c) for c in self.coeffs))

    @classmethod
    def from_integers(cls, values: Iterable[int], offset24: int = 0) -> "GradedSeries":
        return cls(offset24, tuple(Fraction(v) for v in values))

    @classmethod
    def polynomial(
        cls, values: Sequence[Scalar], order: int, offset24: int = 0
    ) -> "GradedSeries":
        """An exact polynomial, padded with zeros up to an explicit order."""
        if order < len(values):
            raise TruncationError(
                f"Polynomial with {len(values)} coefficients needs order >= {len(values)}"
            )
        padded = list(values) + [0] * (order - len(values))
        return cls(offset24, tuple(padded))

    @classmethod
    def zero(cls, order: int, offset24: int = 0) -> "GradedSeries":
        return cls(offset24, (Fraction(0),) * order)

    @classmethod
    def one(cls, order: int) -> "GradedSeries":
        return cls.polynomial([1], order) if order else cls.zero(0)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def end24(self) -> int:
        """First exponent (in 1/24 units) past the known range."""
        return self.offset24 + GRADING * self.order

    def exponents24(self) -> range:
        return range(self.offset24, self.end24, GRADING)

    def coefficient(self, exponent24: int) -> Fraction:
        if exponent24 >= self.end24:
            raise TruncationError(
                f"Coefficient of q^{format_exponent(exponent24)} is beyond "
                f"the truncation order {self.order}"
            )
        if exponent24 < self.offset24 or (exponent24 - self.offset24) % GRADING:
            return Fraction(0)
        return self.coeffs[(exponent24 - self.offset24) // GRADING]

    def coefficient_at(self, exponent: Scalar) -> Fraction:
        """Coefficient of q^exponent for an exponent given as a plain number."""
        scaled = _exact(exponent) * GRADING
        if scaled.denominator != 1:
            return Fraction(0)
        return self.coefficient(scaled.numerator)

    def terms(self) -> Iterator[tuple[str, Fraction]]:
        for exponent24, c in zip(self.exponents24(), self.coeffs):
            yield format_exponent(exponent24), c

    def truncate(self, n: int) -> "GradedSeries":
        if n > self.order:
            raise TruncationError(
                f"Cannot truncate a series of order {self.order} to {n} terms"
            )
        return GradedSeries(self.offset24, self.coeffs[:n])

    def shift(self, exponent24: int) -> "GradedSeries":
        """Multiply by q^(exponent24/24)."""
        return GradedSeries(self.offset24 + exponent24, self.coeffs)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def assert_integral(self, name: str = "series") -> "GradedSeries":
        for exponent24, c in zip(self.exponents24(), self.coeffs):
            if c.denominator != 1:
                raise NonIntegralSeriesError(
                    f"{name} has non-integral coefficient {c} at q^{format_exponent(exponent24)}"
                )
        return self

    def integer_coeffs(self) -> list[int]:
        self.assert_integral()
        return [c.numerator for c in self.coeffs]

    def __add__(self, other):
        if isinstance(other, GradedSeries):
            return series_add(self, other)
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self
            # a constant is known to every order, so it must reach self.end24
            terms = max(1, -(-self.end24 // GRADING))
            return series_add(self, GradedSeries.polynomial([other], terms))
        return NotImplemented

    def __radd__(self, other):
        # sum() starts from int 0
        if isinstance(other, int) and other == 0:
            return self
        return self.__add__(other)

    def __neg__(self):
        return GradedSeries(self.offset24, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, (GradedSeries, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GradedSeries):
            return series_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return GradedSeries(self.offset24, tuple(c * other for c in self.coeffs))
        return NotImplemented

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("Division of a series by zero")
            divisor = _exact(other)
            return GradedSeries(self.offset24, tuple(c / divisor for c in self.coeffs))
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"Only nonnegative integer powers are supported, got {exponent!r}")
        result = GradedSeries.one(self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, GradedSeries):
            return NotImplemented
        if (self.offset24 - other.offset24) % GRADING:
            return False
        start = min(self.offset24, other.offset24)
        end = min(self.end24, other.end24)
        return all(
            self.coefficient(e) == other.coefficient(e) for e in range(start, end, GRADING)
        )

    __hash__ = None

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:5])
        more = ", ..." if self.order > 5 else ""
        return f"GradedSeries(offset24={self.offset24}, order={self.order}, coeffs=[{head}{more}])"


def _check_grid(a: GradedSeries, b: GradedSeries) -> None:
    if (a.offset24 - b.offset24) % GRADING:
        raise GradingMismatchError(
            f"Series at q^{format_exponent(a.offset24)} and q^{format_exponent(b.offset24)} "
            "do not share an exponent grid"
        )


def series_add(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    _check_grid(a, b)
    start = min(a.offset24, b.offset24)
    end = min(a.end24, b.end24)
    length = max(0, (end - start) // GRADING)
    coeffs = tuple(
        a.coefficient(start + GRADING * i) + b.coefficient(start + GRADING * i)
        for i in range(length)
    )
    return GradedSeries(start, coeffs)


def _convolve(x: Sequence[Fraction], y: Sequence[Fraction], n: int) -> list[Fraction]:
    # Integer inputs are convolved as ints; the sparser factor drives the outer loop.
    if all(c.denominator == 1 for c in x[:n]) and all(c.denominator == 1 for c in y[:n]):
        xs: list = [c.numerator for c in x[:n]]
        ys: list = [c.numerator for c in y[:n]]
    else:
        xs, ys = list(x[:n]), list(y[:n])
    if sum(1 for c in xs if c) > sum(1 for c in ys if c):
        xs, ys = ys, xs
    out: list = [0] * n
    for i, c in enumerate(xs):
        if not c:
            continue
        for j in range(n - i):
            out[i + j] += c * ys[j]
    return [_exact(v) for v in out]


def series_mul(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    if not a.order or not b.order:
        raise SeriesError("Cannot multiply an empty series")
    order = min(a.order, b.order)
    return GradedSeries(a.offset24 + b.offset24, tuple(_convolve(a.coeffs, b.coeffs, order)))


def series_invert(a: GradedSeries, n: int | None = None) -> GradedSeries:
    """Multiplicative inverse to ``n`` terms (default: the order of ``a``)."""
    n = a.order if n is None else n
    if n < 1:
        raise ValueError(f"Term count must be positive, got {n}")
    if n > a.order:
        raise TruncationError(
            f"Cannot invert to {n} terms a series known to only {a.order} terms"
        )
    lead = a.coeffs[0]
    if lead == 0:
        raise NonUnitSeriesError("non-unit series")

    if a.is_integral() and lead in (1, -1):
        src: list = [c.numerator for c in a.coeffs[:n]]
        sign = src[0]
        inv: list = [sign]
        for k in range(1, n):
            acc = sum(src[i] * inv[k - i] for i in range(1, k + 1) if src[i])
            inv.append(-acc * sign)
    else:
        src = list(a.coeffs[:n])
        inv = [1 / lead]
        for k in range(1, n):
            acc = sum(src[i] * inv[k - i] for i in range(1, k + 1) if src[i])
            inv.append(-acc / lead)
    logger.debug("Inverted series at q^%s to %d terms", format_exponent(a.offset24), n)
    return GradedSeries(-a.offset24, tuple(inv))
