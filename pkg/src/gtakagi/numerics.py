"""Exact rational scalars and closed rational intervals.

Every scalar in the package is a :class:`fractions.Fraction`; ``Rational`` is
an alias kept for readability in signatures.  Floating point never enters a
core computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

__all__ = [
    "Rational",
    "RatInterval",
    "rat",
    "as_rational",
    "parse_rational",
    "format_rational",
]


def rat(num: int, den: int = 1) -> Fraction:
    """Canonical rational ``num/den``; raises ``ValueError`` on a zero denominator."""
    if den == 0:
        raise ValueError(f"zero denominator in rat({num}, {den})")
    return Fraction(num, den)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer or a decimal string exactly."""
    s = text.strip().replace("−", "-")
    if not s:
        raise ValueError("empty rational literal")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_rational(q: Fraction) -> str:
    """Canonical text: ``-1/2``, ``0``, ``3``."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class RatInterval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x) -> "RatInterval":
        return cls(x, x)

    @classmethod
    def around(cls, center, radius) -> "RatInterval":
        return cls(center - radius, center + radius)

    @classmethod
    def hull_of(cls, values) -> "RatInterval":
        values = list(values)
        return cls(min(values), max(values))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_point(self) -> bool:
        return self.lo == self.hi

    def __neg__(self) -> "RatInterval":
        return RatInterval(-self.hi, -self.lo)

    def __add__(self, other) -> "RatInterval":
        if isinstance(other, RatInterval):
            return RatInterval(self.lo + other.lo, self.hi + other.hi)
        return RatInterval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __sub__(self, other) -> "RatInterval":
        if isinstance(other, RatInterval):
            return self + (-other)
        return self + (-other)

    def scale(self, c) -> "RatInterval":
        c = Fraction(c)
        if c >= 0:
            return RatInterval(self.lo * c, self.hi * c)
        return RatInterval(self.hi * c, self.lo * c)

    def translate(self, c) -> "RatInterval":
        return self + Fraction(c)

    def __contains__(self, item) -> bool:
        if isinstance(item, RatInterval):
            return self.lo <= item.lo and item.hi <= self.hi
        return self.lo <= item <= self.hi

    def contains(self, item) -> bool:
        return item in self

    def intersect(self, other: "RatInterval") -> "RatInterval | None":
        """Intersection, or ``None`` when empty."""
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return None
        return RatInterval(lo, hi)

    def hull(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def distance_to(self, x) -> Fraction:
        if x < self.lo:
            return self.lo - x
        if x > self.hi:
            return x - self.hi
        return Fraction(0)

    def __str__(self) -> str:
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"
