"""Exact extended-rational scalars.

Finite values are arbitrary-precision rationals (``fractions.Fraction``),
extended with two infinities.  Addition and subtraction follow the
lower-addition convention used on the conjugate side of the engine: any
sum mixing +inf and -inf resolves to -inf.  Ordinary sums of proper
functions never hit that case, so a single convention suffices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]


class _Kind(enum.Enum):
    NEG_INF = -1
    FINITE = 0
    POS_INF = 1


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, "p/q" strings, or Fractions to an exact rational."""
    if isinstance(value, bool):
        raise TypeError("bool is not a rational scalar")
    if isinstance(value, (Fraction, int, str)):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


@dataclass(frozen=True, order=False)
class ExtReal:
    """A rational extended with -inf and +inf, totally ordered."""

    kind: _Kind
    value: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.kind is not _Kind.FINITE and self.value != 0:
            raise ValueError("infinite ExtReal carries no finite payload")

    # -- constructors ------------------------------------------------

    @staticmethod
    def finite(value: RationalLike) -> "ExtReal":
        return ExtReal(_Kind.FINITE, as_rational(value))

    @staticmethod
    def pos_inf() -> "ExtReal":
        return POS_INF

    @staticmethod
    def neg_inf() -> "ExtReal":
        return NEG_INF

    # -- predicates --------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.kind is _Kind.FINITE

    @property
    def is_pos_inf(self) -> bool:
        return self.kind is _Kind.POS_INF

    @property
    def is_neg_inf(self) -> bool:
        return self.kind is _Kind.NEG_INF

    def finite_value(self) -> Fraction:
        if not self.is_finite:
            raise ValueError(f"not finite: {self}")
        return self.value

    # -- order -------------------------------------------------------

    def _key(self) -> tuple:
        # -inf -> (-1, 0), finite q -> (0, q), +inf -> (1, 0)
        if self.kind is _Kind.FINITE:
            return (0, self.value)
        return (self.kind.value, Fraction(0))

    def __lt__(self, other: "ExtReal") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "ExtReal") -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: "ExtReal") -> bool:
        return other < self

    def __ge__(self, other: "ExtReal") -> bool:
        return other <= self

    # -- rendering ---------------------------------------------------

    def __repr__(self) -> str:
        return f"ExtReal({format_extreal(self)})"

    def __str__(self) -> str:
        return format_extreal(self)


NEG_INF = ExtReal(_Kind.NEG_INF)
POS_INF = ExtReal(_Kind.POS_INF)


def finite(value: RationalLike) -> ExtReal:
    return ExtReal.finite(value)


def negate(a: ExtReal) -> ExtReal:
    """Swap the infinities; negate finite values."""
    if a.is_pos_inf:
        return NEG_INF
    if a.is_neg_inf:
        return POS_INF
    return finite(-a.value)


def add_lower(a: ExtReal, b: ExtReal) -> ExtReal:
    """Extended sum giving priority to -inf on any sign conflict."""
    if a.is_neg_inf or b.is_neg_inf:
        return NEG_INF
    if a.is_pos_inf or b.is_pos_inf:
        return POS_INF
    return finite(a.value + b.value)


def sub_lower(a: ExtReal, b: ExtReal) -> ExtReal:
    """a - b under the same convention; inf - inf of equal sign is -inf."""
    return add_lower(a, negate(b))


def scale(a: ExtReal, q: RationalLike) -> ExtReal:
    """Scale by a nonnegative rational; 0 * (+-inf) = 0 (multiplier rule)."""
    q = as_rational(q)
    if q < 0:
        raise ValueError("scale factor must be nonnegative")
    if q == 0:
        return finite(0)
    if a.is_finite:
        return finite(a.value * q)
    return a


def emin(*values: ExtReal) -> ExtReal:
    return min(values, key=ExtReal._key)


def emax(*values: ExtReal) -> ExtReal:
    return max(values, key=ExtReal._key)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_extreal(a: ExtReal) -> str:
    if a.is_pos_inf:
        return "+inf"
    if a.is_neg_inf:
        return "-inf"
    return format_rational(a.value)


def parse_extreal(text: str) -> ExtReal:
    text = text.strip()
    if text in ("+inf", "inf"):
        return POS_INF
    if text == "-inf":
        return NEG_INF
    return finite(Fraction(text))
