from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from credal.meadow import RationalSyntaxError, cond, div, inv, mv, parse, render, sign

fractions = st.fractions(max_denominator=1000)


@pytest.mark.parametrize("text, value", [
    ("3/20", Fraction(3, 20)),
    ("-2/4", Fraction(-1, 2)),
    ("7", Fraction(7)),
    ("0.8", Fraction(4, 5)),
    (".25", Fraction(1, 4)),
    (" 12 / 100 ", Fraction(3, 25)),
])
def test_parse_literals(text, value):
    assert parse(text) == value


@pytest.mark.parametrize("text", ["1/0", "abc", "1e3", "", "1/2/3", "0x10"])
def test_parse_rejects(text):
    with pytest.raises(RationalSyntaxError):
        parse(text)


def test_mv_refuses_floats_and_bools():
    with pytest.raises(TypeError):
        mv(0.5)
    with pytest.raises(TypeError):
        mv(True)


def test_render_lowest_terms():
    assert render(Fraction(12, 100)) == "3/25"
    assert render(Fraction(4, 2)) == "2"
    assert render(Fraction(-1, 3)) == "-1/3"


def test_zero_has_zero_inverse():
    assert inv(0) == 0
    assert div(5, 0) == 0
    assert div(0, 0) == 0


def test_conditional_operator():
    assert cond(3, 1, 7) == 3
    assert cond(3, 0, 7) == 7
    assert cond(Fraction(1, 2), Fraction(-2), 9) == Fraction(1, 2)


@given(fractions)
def test_inverse_is_involutive(x):
    assert inv(inv(x)) == x


@given(fractions)
def test_restricted_inverse_law(x):
    assert x * x * inv(x) == x


@given(fractions, fractions)
def test_inverse_is_multiplicative(x, y):
    assert inv(x * y) == inv(x) * inv(y)


@given(fractions, fractions, fractions)
def test_conditional_selects_by_zero_test(x, y, z):
    assert cond(x, y, z) == (x if y != 0 else z)


@given(fractions)
def test_sign_times_abs(x):
    assert sign(x) * abs(x) == x


@given(fractions)
def test_render_parse_round_trip(x):
    assert parse(render(x)) == x
