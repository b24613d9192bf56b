from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given

from waringmat.scalar import (
    ScalarFormatError,
    as_rational,
    inv,
    parse_scalar,
    parse_scalar_list,
    render_scalar,
)

from strategies import nonzero_rationals, rationals


def test_addition_example():
    assert mpq(1, 2) + mpq(1, 3) == mpq(5, 6)


def test_inverse_example():
    assert inv(mpq(-3, 7)) == mpq(-7, 3)


def test_lowest_terms_on_construction():
    x = parse_scalar("2/4")
    assert (x.numerator, x.denominator) == (1, 2)
    z = parse_scalar("0/5")
    assert (z.numerator, z.denominator) == (0, 1)
    neg = parse_scalar("3/-6".replace("/-", "/")) * -1
    assert neg.denominator > 0


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        inv(mpq(0))
    with pytest.raises(ZeroDivisionError):
        mpq(1) / mpq(0)


@pytest.mark.parametrize("text,expected", [("5", "5"), ("-3/4", "-3/4"), ("+6/8", "3/4"), (" 0 ", "0"), ("7/1", "7")])
def test_render(text, expected):
    assert render_scalar(parse_scalar(text)) == expected


@pytest.mark.parametrize("bad", ["", "1.5", "1/0", "x", "1//2", "--1"])
def test_parse_rejects(bad):
    with pytest.raises(ScalarFormatError):
        parse_scalar(bad)


def test_as_rational_conversions():
    assert as_rational(Fraction(3, 9)) == mpq(1, 3)
    assert as_rational(4) == 4
    assert as_rational("-1/2") == mpq(-1, 2)
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(TypeError):
        as_rational(True)


def test_scalar_list():
    assert parse_scalar_list("1, -2/3,4") == [1, mpq(-2, 3), 4]
    with pytest.raises(ScalarFormatError):
        parse_scalar_list(" , ")


@given(rationals, rationals, rationals)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    assert x + (-x) == 0


@given(nonzero_rationals)
def test_multiplicative_inverse(x):
    assert x * inv(x) == 1


@given(rationals)
def test_render_parse_round_trip(x):
    assert parse_scalar(render_scalar(x)) == x
