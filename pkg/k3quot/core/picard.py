"""Exact arithmetic in Pic(F_n) = ZC + ZF.

The intersection form on the Hirzebruch surface F_n is fixed by the
generator pairings ``C.C = -n``, ``C.F = 1`` and ``F.F = 0``; the canonical
class is ``K = -2C - (n+2)F``. On F_0 both ``(1,0)`` and ``(0,1)`` are
rulings and neither is treated as a distinguished section.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from k3quot.errors import AmbientMismatch

Rational = Union[int, Fraction]


def _check_same_ambient(left_n: int, right_n: int) -> None:
    if left_n != right_n:
        raise AmbientMismatch(left_n, right_n)


@dataclass(frozen=True, order=True)
class DivisorClass:
    """``a*C + b*F`` on F_n."""

    n: int
    a: int
    b: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"Hirzebruch index must be >= 0, got {self.n}")

    def __add__(self, other: DivisorClass) -> DivisorClass:
        _check_same_ambient(self.n, other.n)
        return DivisorClass(self.n, self.a + other.a, self.b + other.b)

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        _check_same_ambient(self.n, other.n)
        return DivisorClass(self.n, self.a - other.a, self.b - other.b)

    def __mul__(self, k: int) -> DivisorClass:
        return DivisorClass(self.n, k * self.a, k * self.b)

    __rmul__ = __mul__

    def dot(self, other: DivisorClass) -> int:
        return intersection_number(self, other)

    @property
    def self_intersection(self) -> int:
        return intersection_number(self, self)

    @property
    def is_fiber(self) -> bool:
        return (self.a, self.b) == (0, 1)

    @property
    def is_section(self) -> bool:
        """The negative section C for n >= 1; on F_0 the other ruling."""
        return (self.a, self.b) == (1, 0)

    def swapped(self) -> DivisorClass:
        """Exchange the two rulings; only meaningful on F_0."""
        if self.n != 0:
            raise ValueError("ruling swap is only defined on F_0")
        return DivisorClass(0, self.b, self.a)

    def to_rational(self) -> RationalDivisorClass:
        return RationalDivisorClass(self.n, Fraction(self.a), Fraction(self.b))

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


@dataclass(frozen=True)
class RationalDivisorClass:
    """A class in Pic(F_n) tensored with Q; coefficients are exact fractions."""

    n: int
    a: Fraction
    b: Fraction

    def __add__(self, other: RationalDivisorClass) -> RationalDivisorClass:
        _check_same_ambient(self.n, other.n)
        return RationalDivisorClass(self.n, self.a + other.a, self.b + other.b)

    def scaled(self, factor: Rational) -> RationalDivisorClass:
        return RationalDivisorClass(self.n, self.a * factor, self.b * factor)

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


def intersection_number(x: DivisorClass, y: DivisorClass) -> int:
    _check_same_ambient(x.n, y.n)
    return -x.n * x.a * y.a + x.a * y.b + x.b * y.a


def canonical_class(n: int) -> DivisorClass:
    return DivisorClass(n, -2, -(n + 2))


def section(n: int) -> DivisorClass:
    return DivisorClass(n, 1, 0)


def fiber(n: int) -> DivisorClass:
    return DivisorClass(n, 0, 1)


def is_irreducible_class(x: DivisorClass) -> bool:
    """Whether an irreducible curve can have class ``x``.

    Besides the two generators, an irreducible curve other than C has
    ``a >= 1`` and ``b >= n*a`` (``b >= 1`` on F_0).
    """
    if (x.a, x.b) in ((1, 0), (0, 1)):
        return True
    if x.a < 1:
        return False
    if x.n == 0:
        return x.b >= 1
    return x.b >= x.n * x.a


def divisible_by(x: DivisorClass, k: int) -> bool:
    if k < 2:
        raise ValueError(f"divisor must be >= 2, got {k}")
    return x.a % k == 0 and x.b % k == 0
