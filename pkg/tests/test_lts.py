from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from credal.belief import CredalState
from credal.checks import random_fragment
from credal.errors import BudgetExceeded, GuardFailed
from credal.lts import (
    CandidateBisimulation, TransitionLabel, bc_label, from_partition, generate_fragment,
    identity_relation, incompatibility_witness, is_bisimulation, max_compatibility, parse_label,
    parse_schemas, search_intermediate_bisimulations, step,
)
from credal.propspace import Atom

from conftest import states

F = Fraction
TAXI = CredalState(("E", "H"), (F(12, 100), F(17, 100), F(3, 100), F(68, 100)))


def test_bc_label_text_and_guard():
    lab = bc_label("E", F(29, 100))
    assert str(lab) == "[BC,E,29/100]"
    assert lab.guard == F(29, 100)
    assert parse_label(str(lab)) == lab
    compound = bc_label("E & H", F(3, 25))
    assert "NP" in compound.flags


@pytest.mark.parametrize("text", ["[BC,E,29/100]", "[BC,E & !H,3/25,NP]", "[JC,1/2,H]", "[PSE,E,1/2]",
                                  "[PSR,E]", "[SLAC,4/5,E,H]", "[DLAC,1/2,1/8,E,H]", "[BR,B,1/10]"])
def test_label_round_trip(text):
    assert str(parse_label(text)) == text


def test_step_checks_guard():
    assert step(TAXI, bc_label("E", F(29, 100))).prob("H") == F(12, 29)
    with pytest.raises(GuardFailed):
        step(TAXI, bc_label("E", F(1, 2)))
    with pytest.raises(GuardFailed):
        step(TAXI, TransitionLabel("BC", (Atom("E"), F(0))))
    with pytest.raises(GuardFailed):
        step(TAXI, parse_label("[BR,E,1/10]"))


def test_generate_depth_zero_and_budget():
    schemas = parse_schemas("BC(E);BC(!H);JC(1/2,H)")
    F0 = generate_fragment([TAXI], schemas, 0)
    assert F0.states == [TAXI] and not F0.transitions
    F1 = generate_fragment([TAXI], schemas, 1)
    assert len(F1.outgoing(0)) == 3
    with pytest.raises(BudgetExceeded):
        generate_fragment([TAXI], schemas, 3, max_states=3)


def test_dump_format():
    F1 = generate_fragment([TAXI], parse_schemas("BC(E)"), 1)
    assert F1.dump().splitlines() == [
        "state 0: (E,H)[3/25, 17/100, 3/100, 17/25]",
        "state 1: (E,H)[12/29, 17/29, 0, 0]",
        "0 [BC,E,29/100] 1",
    ]


def test_trivial_relations():
    F1 = generate_fragment([TAXI, CredalState.uniform(("E", "H"))], parse_schemas("BC(E);BC(!H);JC(1/2,H)"), 2)
    assert is_bisimulation(identity_relation(F1), F1)
    assert is_bisimulation(max_compatibility(F1), F1)


def test_incompatibility_counterexample():
    F, R, res = incompatibility_witness()
    assert not res.ok
    assert res.clause == "transfer"
    assert F.states[0].prob("H") == 1 and F.states[1].prob("H") < 1


def test_non_equivalences_rejected():
    F1 = generate_fragment([TAXI], parse_schemas("BC(E)"), 1)
    a, b = F1.states
    assert is_bisimulation(CandidateBisimulation(frozenset({(a, b)})), F1).clause in ("reflexive", "symmetric")
    other = CredalState.uniform(("H",))
    bad = CandidateBisimulation(identity_relation(F1).pairs | {(other, other)})
    assert not is_bisimulation(bad, F1)


def test_search_on_incompatible_pair_finds_nothing():
    F, _, _ = incompatibility_witness()
    assert search_intermediate_bisimulations(F) == []


def test_search_budget():
    F1 = generate_fragment([TAXI], parse_schemas("BC(E);BC(!H);JC(1/2,H)"), 2)
    with pytest.raises(BudgetExceeded):
        search_intermediate_bisimulations(F1, cap=2)


def test_search_results_reverify():
    rng = random.Random(11)
    for _ in range(10):
        F = random_fragment(rng, max_states=6)
        for R in search_intermediate_bisimulations(F, cap=6):
            assert is_bisimulation(R, F)
            assert is_bisimulation(from_partition(F, R.classes(F)), F)


@settings(max_examples=40, deadline=None)
@given(states(("E", "H"), allow_zero=True, max_weight=3), states(("E", "H"), allow_zero=True, max_weight=3))
def test_trivial_relations_property(a, b):
    F = generate_fragment([a, b], parse_schemas("BC(E);BC(!H);JC(1/3,H)"), 2)
    assert is_bisimulation(identity_relation(F), F)
    assert is_bisimulation(max_compatibility(F), F)
