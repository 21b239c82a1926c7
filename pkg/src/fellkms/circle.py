"""Exact elements of the circle group, stored as rational angles."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

AngleLike = Union["UnitCircleValue", Fraction, int, str]


def parse_angle(value) -> Fraction:
    """Parse ``"p/q"`` strings, ints and Fractions into an angle in [0, 1).

    Floats are refused: angles must be exact.
    """
    if isinstance(value, UnitCircleValue):
        return value.angle
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"angle must be exact (int, Fraction or 'p/q'), got {value!r}")
    if isinstance(value, str):
        value = Fraction(value.strip())
    return Fraction(value) % 1


@dataclass(frozen=True, order=True)
class UnitCircleValue:
    """The number ``exp(2 pi i * angle)`` with ``angle`` rational in [0, 1)."""

    angle: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "angle", parse_angle(self.angle))

    @classmethod
    def one(cls) -> "UnitCircleValue":
        return cls(Fraction(0))

    def __mul__(self, other: AngleLike) -> "UnitCircleValue":
        return UnitCircleValue(self.angle + parse_angle(other))

    __rmul__ = __mul__

    def __truediv__(self, other: AngleLike) -> "UnitCircleValue":
        return UnitCircleValue(self.angle - parse_angle(other))

    def __pow__(self, n: int) -> "UnitCircleValue":
        return UnitCircleValue(self.angle * n)

    def conjugate(self) -> "UnitCircleValue":
        return UnitCircleValue(-self.angle)

    @property
    def is_one(self) -> bool:
        return self.angle == 0

    def __complex__(self) -> complex:
        # exact values at the quarter turns keep integer-coefficient checks exact
        a = self.angle
        if a == 0:
            return 1 + 0j
        if a == Fraction(1, 4):
            return 1j
        if a == Fraction(1, 2):
            return -1 + 0j
        if a == Fraction(3, 4):
            return -1j
        return cmath.exp(2j * cmath.pi * float(a))

    def to_complex(self) -> complex:
        return complex(self)

    def __str__(self) -> str:
        return f"{self.angle.numerator}/{self.angle.denominator}"

    def __repr__(self) -> str:
        return f"UnitCircleValue({self})"


ONE = UnitCircleValue.one()
