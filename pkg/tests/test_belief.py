from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from credal.belief import (
    UNDEFINED, CondVariant, CredalState, compatible, cond_prob, conditional_state, likelihood_ratio,
    odds, random_state,
)
from credal.errors import SignatureMismatch, UnknownAtom

from conftest import any_state, states

F = Fraction
TAXI = CredalState(("E", "H"), (F(12, 100), F(17, 100), F(3, 100), F(68, 100)))


def test_validation():
    with pytest.raises(ValueError):
        CredalState(("E",), (F(1, 2), F(1, 3)))
    with pytest.raises(ValueError):
        CredalState(("E",), (F(3, 2), F(-1, 2)))
    with pytest.raises(ValueError):
        CredalState(("E",), (F(1),))
    with pytest.raises(ValueError):
        CredalState(("E", "E"), (F(1, 4),) * 4)


def test_constructors():
    assert CredalState.uniform(("E", "H")).mass == (F(1, 4),) * 4
    assert CredalState.point(("E", "H"), {"E": False, "H": True}).mass == (0, 0, 1, 0)
    s = CredalState.from_minterms(("E", "H"), {"E & H": "1/2", "!E & !H": "1/2"})
    assert s.mass == (F(1, 2), 0, 0, F(1, 2))
    with pytest.raises(ValueError):
        CredalState.from_minterms(("E", "H"), {"E": 1})


def test_taxi_queries():
    assert TAXI.prob("E") == F(29, 100)
    assert TAXI.prob("H") == F(3, 20)
    assert cond_prob("zero", TAXI, "E", "H") == F(4, 5)
    assert cond_prob(CondVariant.ZERO, TAXI, "E", "!H") == F(1, 5)
    assert likelihood_ratio(TAXI, "E", "H") == 4
    assert odds(TAXI, "H") == F(3, 17)


def test_variants_on_null_condition():
    P = CredalState(("E", "H"), (F(1, 2), 0, F(1, 2), 0))
    assert cond_prob(CondVariant.ZERO, P, "E", "!H") == 0
    assert cond_prob(CondVariant.ONE, P, "E", "!H") == 1
    assert cond_prob(CondVariant.SAFE, P, "E", "!H") == F(1, 2)
    assert cond_prob(CondVariant.KOLMOGOROV, P, "E", "!H") is UNDEFINED


def test_unknown_atom_in_query():
    with pytest.raises(UnknownAtom):
        cond_prob(CondVariant.ZERO, TAXI, "L", "H")


def test_compatibility():
    a = CredalState(("H",), (F(1, 3), F(2, 3)))
    b = CredalState.uniform(("H",))
    c = CredalState(("H",), (F(1), F(0)))
    assert compatible(a, b)
    assert not compatible(a, c)
    with pytest.raises(SignatureMismatch):
        compatible(a, TAXI)


def test_json_and_text():
    assert CredalState.from_json(TAXI.to_json()) == TAXI
    assert str(TAXI) == "(E,H)[3/25, 17/100, 3/100, 17/25]"


def test_random_state_is_seeded_and_full_support():
    a = random_state(random.Random(3), ("E", "H", "L"))
    b = random_state(random.Random(3), ("E", "H", "L"))
    assert a == b and all(a.support())


@given(any_state(allow_zero=True), st.sampled_from(["E", "!E", "E & H", "H | !E", "T", "F"]))
def test_complement_rule(P, phi):
    sig_ok = all(a in P.signature for a in ("E", "H")) or phi in ("T", "F", "E", "!E")
    if sig_ok:
        assert P.prob(phi) + P.prob(f"!({phi})") == 1


@given(states(("E", "H", "L"), allow_zero=True), st.sampled_from(list(CondVariant)))
def test_variants_agree_on_positive_conditions(P, variant):
    if P.prob("H") > 0:
        assert cond_prob(variant, P, "E", "H") == cond_prob(CondVariant.ZERO, P, "E", "H")


@given(states(("E", "H"), allow_zero=True))
def test_conditional_state_sums(P):
    total = sum(conditional_state(CondVariant.ZERO, P, "H"))
    assert total == (1 if P.prob("H") > 0 else 0)
    safe = conditional_state(CondVariant.SAFE, P, "H")
    assert sum(safe) == 1
