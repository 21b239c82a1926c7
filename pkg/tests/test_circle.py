import cmath
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fellkms.circle import UnitCircleValue, parse_angle

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=24)


def test_parse_forms():
    assert parse_angle("1/3") == Fraction(1, 3)
    assert parse_angle(" -1/4 ") == Fraction(3, 4)
    assert parse_angle(2) == 0
    assert parse_angle(Fraction(7, 6)) == Fraction(1, 6)


def test_floats_refused():
    with pytest.raises(TypeError):
        parse_angle(0.5)
    with pytest.raises(TypeError):
        parse_angle(True)


def test_quarter_turns_exact():
    assert complex(UnitCircleValue("1/4")) == 1j
    assert complex(UnitCircleValue("1/2")) == -1
    assert complex(UnitCircleValue("3/4")) == -1j
    assert complex(UnitCircleValue(0)) == 1


@given(fractions, fractions)
def test_group_law(a, b):
    x, y = UnitCircleValue(a), UnitCircleValue(b)
    assert (x * y).angle == (a + b) % 1
    assert (x / y) * y == x
    assert (x * x.conjugate()).is_one
    assert abs(complex(x * y) - complex(x) * complex(y)) < 1e-12


@given(fractions, st.integers(-6, 6))
def test_power(a, n):
    x = UnitCircleValue(a)
    assert abs(complex(x ** n) - cmath.exp(2j * cmath.pi * float(a) * n)) < 1e-9


def test_str_roundtrip():
    v = UnitCircleValue("5/12")
    assert parse_angle(str(v)) == v.angle
