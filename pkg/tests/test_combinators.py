from __future__ import annotations

from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from credal import combinators as cb
from credal import conditioning as cd
from credal.belief import CredalState
from credal.errors import ParameterOutOfRange, ZeroCondition

from conftest import rationals01, states

F = Fraction
HYP = CredalState(("H",), (F(3, 20), F(17, 20)))


def test_taxi_through_combinators():
    c = cb.parse_combinator("BC(E).DLAC(4/5,1/5,E,H).PSE(E,1).PSE(H,1)")
    assert c(HYP).prob("H") == F(12, 29)
    assert c(HYP).signature == ("H", "E")


def test_composition_order():
    f, g = cb.PSE("E", "1"), cb.PSR("E")
    assert (g @ f)(HYP) == HYP
    assert cb.compose(g, f)(HYP) == g(f(HYP))
    assert cb.compose()(HYP) == HYP
    assert cb.apply(cb.Id(), HYP) is HYP


@pytest.mark.parametrize("text", [
    "Id",
    "BC(E & !H)",
    "PSR(E).BC(E).PSE(E,1/2)",
    "JC(1/3,H)",
    "SLAC(4/5,E,!H)",
    "DLAC(1/2,1/8,E,H)",
    "BR(B,3/20)",
    "PSE(M,0)",
])
def test_text_round_trip(text):
    assert str(cb.parse_combinator(text)) == text


@pytest.mark.parametrize("text", ["", "BC(E", "BC(E))", "FOO(E)", "PSE(E,2)", "JC(x,H)", "BC(E)..Id", "SLAC(0,E,H)"])
def test_syntax_errors(text):
    with pytest.raises((cb.CombinatorSyntaxError, ParameterOutOfRange)):
        cb.parse_combinator(text)


def test_bc_with_missing_atoms_is_identity_like():
    assert cb.BC("E")(HYP) == HYP
    assert cb.BC("!E")(HYP) == HYP


def test_adams_combinator_renormalizes_null_regions():
    P = CredalState(("E", "H"), (F(1, 2), F(1, 2), 0, 0))
    Q = cb.SLAC(F(1, 2), "E", "H")(P)
    assert sum(Q.mass) == 1


def test_adams_combinator_total_zero():
    P = CredalState(("E", "H"), (0, 0, 1, 0))
    with pytest.raises(ZeroCondition):
        cb.SLAC(1, "E", "H")(P)


def test_jc_range():
    with pytest.raises(ParameterOutOfRange):
        cb.JC(F(3, 2), "H")


@given(states(("E", "H", "L")), st.sampled_from(list(cd.ExpansionMode)), st.sampled_from(["M", "E"]))
def test_reduce_after_expand_is_identity(P, mode, atom):
    if atom in P.signature:
        return
    assert cb.compose(cb.PSR(atom), cb.PSE(atom, mode))(P) == P


@given(states(("E", "H", "L")), st.sampled_from(["E", "!E", "E & L", "H | L"]))
def test_safe_bayes_equals_bayes(P, phi):
    assert cb.BC(phi)(P) == cd.bayes(P, phi)


@given(states(("E", "H", "L")), rationals01(), rationals01())
def test_safe_adams_equals_strict(P, l, l2):
    assert cb.SLAC(l, "E", "H")(P) == cd.slac(P, l, "E", "H")
    assert cb.DLAC(l, l2, "E", "H")(P) == cd.dlac(P, l, l2, "E", "H")


@given(states(("E", "H")), rationals01(open_left=False))
def test_safe_jeffrey_equals_strict(P, p):
    assert cb.JC(p, "H")(P) == cd.jeffrey(P, p, "H")


@given(states(("H",), allow_zero=True), st.sampled_from(["E & L", "E | !L", "!(E & L & N)"]))
def test_missing_atom_order_is_irrelevant(P, phi):
    expected = cb.BC(phi)(P)
    from credal.propspace import signature_of
    missing = [a for a in signature_of(phi) if a not in P.signature]
    for order in permutations(missing):
        Q = P
        for a in order:
            Q = cd.expand(Q, a, "1")
        Q = cd.safe_bayes(Q, phi)
        for a in order:
            Q = cd.reduce(Q, a)
        assert Q == expected
