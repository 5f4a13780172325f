import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mbqspat.angle import AngleExpr, AngleParseError, UnboundSymbolError, parse_angle


@pytest.mark.parametrize("text", ["pi", "pi/2", "-pi/2", "3*pi/4", "-2.0 * c[32]", "pi/2 - 2.0 * c[3] + 0.5 * c[7]", "0.25"])
def test_print_parse_round_trip(text):
    assert str(parse_angle(text)) == text


def test_canonical_form():
    a = AngleExpr.symbol(1, 2.0) + AngleExpr.symbol(1, -2.0)
    assert a.is_zero()
    assert AngleExpr.of_pi(Fraction(2, 4)).pi == Fraction(1, 2)


def test_evaluate():
    a = parse_angle("pi/2 - 2.0 * c[3]")
    assert a.evaluate({3: 0.1}) == pytest.approx(math.pi / 2 - 0.2)
    with pytest.raises(UnboundSymbolError):
        a.evaluate({})


def test_pauli_axis():
    assert parse_angle("pi").pauli_axis() == "X"
    assert AngleExpr().pauli_axis() == "X"
    assert parse_angle("-pi/2").pauli_axis() == "Y"
    assert parse_angle("pi/4").pauli_axis() is None
    assert parse_angle("-2.0 * c[32]").pauli_axis() is None
    assert AngleExpr(const=math.pi / 2).pauli_axis() == "Y"


def test_scale_keeps_pi_exact():
    assert parse_angle("pi/2").scale(-2).pi == Fraction(-1)
    assert parse_angle("c[1]").scale(2.0).coeffs == ((1, 2.0),)


@pytest.mark.parametrize("bad", ["", "pi pi", "c[x]", "2 *"])
def test_parse_errors(bad):
    with pytest.raises(AngleParseError):
        parse_angle(bad)


@given(st.integers(-8, 8), st.integers(1, 8), st.floats(-5, 5, allow_nan=False).filter(lambda v: v != 0), st.integers(0, 99))
def test_round_trip_property(num, den, mult, sym):
    a = AngleExpr(pi=Fraction(num, den), coeffs=((sym, mult),))
    assert parse_angle(str(a)) == a
