from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from credal.errors import ParameterOutOfRange
from credal.prosecutor import (
    QUOTED_BOUND, boolean_cross_check, check_parameters, prosecutor_conditioning, update_factor_formula,
)

F = Fraction


def oracle_factor(n, k, p):
    # direct evaluation, independent of the selector representation
    return 1 / (p + (1 - p) * F(k - 1, n - 1))


def test_worked_instance():
    rep = prosecutor_conditioning(100000, 100, F(1, 10))
    assert rep.factor == F(11111, 1121) == oracle_factor(100000, 100, F(1, 10))
    assert rep.factor >= QUOTED_BOUND
    assert rep.bounding_denominator == F(1009, 10000)
    assert not rep.quoted_denominator_matches
    assert any(line.startswith("FLAG") for line in rep.lines())


def test_certain_selection_is_neutral():
    assert prosecutor_conditioning(5, 1, 1).factor == 1


def test_parameter_checks():
    for args in ((1, 1, F(1, 2)), (5, 5, F(1, 2)), (5, 0, F(1, 2)), (5, 1, F(1, 5)), (5, 1, F(6, 5))):
        with pytest.raises(ParameterOutOfRange):
            check_parameters(*args)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1),
                                                       st.integers(n + 1, 5 * n).map(lambda d: d))))
def test_boolean_representation_agrees(args):
    n, k, den = args
    p = F(den // n + 1, den) if den // n + 1 <= den else F(1)
    assert boolean_cross_check(n, k, p)


@given(st.integers(2, 60).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1))),
       st.integers(1, 20))
def test_factor_matches_closed_form(nk, num):
    n, k = nk
    p = F(num, 20)
    if p <= F(1, n):
        return
    assert prosecutor_conditioning(n, k, p).factor == update_factor_formula(n, k, p) == oracle_factor(n, k, p)
