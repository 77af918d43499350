"""Rational interval enclosures.

Every approximate quantity in the package is returned as a closed interval
[lo, hi] with exact ``Fraction`` endpoints that is guaranteed to contain the
true value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _frac(self.lo))
        object.__setattr__(self, "hi", _frac(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, q) -> "RationalInterval":
        return cls(q, q)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, q) -> bool:
        return self.lo <= q <= self.hi

    def contains_interval(self, other: "RationalInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: "RationalInterval", slack=0) -> bool:
        return self.lo <= other.hi + slack and other.lo <= self.hi + slack

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def __add__(self, other):
        if isinstance(other, RationalInterval):
            return RationalInterval(self.lo + other.lo, self.hi + other.hi)
        return RationalInterval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self):
        return RationalInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        if isinstance(other, RationalInterval):
            return RationalInterval(self.lo - other.hi, self.hi - other.lo)
        return RationalInterval(self.lo - other, self.hi - other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RationalInterval):
            other = RationalInterval.exact(other)
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RationalInterval(min(ps), max(ps))

    __rmul__ = __mul__

    def __truediv__(self, q):
        q = _frac(q)
        if q == 0:
            raise ZeroDivisionError("interval division by zero")
        return self * (1 / q)

    def __str__(self):
        return f"{self.lo} {self.hi}"


def sqrt_lower(q, bits: int) -> Fraction:
    """A rational r <= sqrt(q) with sqrt(q) - r < 2^-bits."""
    q = _frac(q)
    if q <= 0:
        return Fraction(0)
    scale = 4 ** bits
    return Fraction(math.isqrt(q.numerator * scale // q.denominator), 2 ** bits)


def sqrt_upper(q, bits: int) -> Fraction:
    """A rational r >= sqrt(q) with r - sqrt(q) < 2^-bits."""
    q = _frac(q)
    if q <= 0:
        return Fraction(0)
    scale = 4 ** bits
    num = -((-q.numerator * scale) // q.denominator)  # ceil
    r = math.isqrt(num)
    if r * r < num:
        r += 1
    return Fraction(r, 2 ** bits)


def sqrt_interval(iv: RationalInterval, k: int) -> RationalInterval:
    """Enclosure of sqrt over [max(lo, 0), hi] with rounding slack below 2^-(k+1)."""
    if iv.hi < 0:
        raise ValueError("square root of a negative interval")
    bits = k + 2
    return RationalInterval(sqrt_lower(max(iv.lo, Fraction(0)), bits), sqrt_upper(iv.hi, bits))


def sqrt_exact(q, k: int) -> RationalInterval:
    """Enclosure of sqrt(q) for an exact rational q, width < 2^-k."""
    return sqrt_interval(RationalInterval.exact(q), k)


def hull(*ivs: RationalInterval) -> RationalInterval:
    return RationalInterval(min(i.lo for i in ivs), max(i.hi for i in ivs))


def round_out(iv: RationalInterval, bits: int) -> RationalInterval:
    """Widen to dyadic endpoints with denominator 2^bits (keeps numbers small)."""
    scale = 2 ** bits
    lo = Fraction(math.floor(iv.lo * scale), scale)
    hi = Fraction(math.ceil(iv.hi * scale), scale)
    return RationalInterval(lo, hi)
