from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from credal.belief import CredalState
from credal.simulation import (
    Mode, ScenarioError, builtin_scenario, evidence_first, expected_posterior, load_scenario,
    parse_action, run_moe_mode, run_scenario, scenario_from_data,
)
from credal.trace import Flagged, Refused

F = Fraction
HYP = {"generators": ["H"], "mass": ["3/20", "17/20"]}


def scenario(mode, **extra):
    data = {"mode": mode, "input": {"r": "4"}, "agents": [{"id": "TOF", "role": "TOF", "prior": HYP}]}
    data.update(extra)
    return scenario_from_data(data)


@pytest.mark.parametrize("name", ["taxi", "moe-parallel", "lrtmr"])
def test_builtin_clean(name):
    trace = run_scenario(builtin_scenario(name))
    assert trace.clean
    assert trace.final_probability() == F(12, 29)
    assert trace.lines()[-1] == "FINAL TOF P(H) = 12/29"


def test_naive_builtin_refuses_early_evidence():
    trace = run_scenario(builtin_scenario("moe-naive"))
    assert trace.refused and evidence_first(trace)
    assert trace.final_probability() == F(3, 20)


@pytest.mark.parametrize("mode", ["SINGLE_MESSAGE", "SEQUENTIAL", "PARALLEL_NOTIFIED"])
def test_modes_agree(mode):
    trace = run_scenario(scenario(mode))
    assert trace.clean
    assert trace.final_probability() == F(12, 29)


def test_single_message_flags_stale_ratio():
    trace = run_scenario(scenario("SINGLE_MESSAGE"))
    flags = trace.of_type(Flagged)
    assert len(flags) == 1 and "LR(E,H)=4" in flags[0].reason


def test_sequential_order():
    payloads = [str(p) for p in run_scenario(scenario("SEQUENTIAL")).delivered_payloads("TOF")]
    assert payloads == ["LR(E,H)=4", "P(E)=1"]


def test_notified_mode_every_seed():
    sc = builtin_scenario("moe-parallel")
    want = expected_posterior(sc)
    for seed in range(60):
        trace = run_moe_mode(Mode.PARALLEL_NOTIFIED, sc, seed=seed)
        assert trace.clean and not evidence_first(trace)
        assert trace.final_state == want


def test_naive_mode_has_bad_seeds():
    sc = builtin_scenario("moe-naive")
    bad = [s for s in range(100) if evidence_first(run_moe_mode(Mode.PARALLEL_NAIVE, sc, seed=s))]
    assert bad and len(bad) < 100


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([Mode.PARALLEL_NAIVE, Mode.PARALLEL_NOTIFIED]))
def test_trace_determinism(seed, mode):
    sc = builtin_scenario("moe-parallel")
    assert run_moe_mode(mode, sc, seed=seed).lines() == run_moe_mode(mode, sc, seed=seed).lines()


def test_duplicate_evidence_refused():
    data = {"mode": "SEQUENTIAL", "input": {"r": "4"},
            "agents": [{"id": "TOF", "role": "TOF", "prior": HYP},
                       {"id": "MOE", "role": "MOE",
                        "behavior": ["set L(E,H)=1/2", "set L(E,!H)=1/8", "send LR -> TOF", "confirm E",
                                     "send E -> TOF", "send E -> TOF"]}]}
    trace = run_scenario(scenario_from_data(data))
    assert any("E" in r.reason for r in trace.of_type(Refused))
    assert trace.final_probability() == F(12, 29)


@pytest.mark.parametrize("text, verb", [
    ("set L(E,H)=4/5", "set"),
    ("set LP(E,H)=(4/5,1/5)", "setpair"),
    ("confirm E", "confirm"),
    ("send LR&E -> TOF", "send"),
    ("send L(E,!H) -> TOF", "send"),
    ("notify -> MOE-E", "notify"),
    ("await  notify", "await"),
])
def test_parse_action(text, verb):
    assert parse_action(text).verb == verb


def test_parse_action_rejects():
    with pytest.raises(ValueError):
        parse_action("shout E")


def test_load_scenario_reports_position():
    text = '{\n  "mode": "SEQUENTIAL",\n  "input": {"r": "4/x"},\n  "agents": []\n}'
    with pytest.raises(ScenarioError) as info:
        load_scenario(text)
    assert (info.value.line, info.value.column) == (3, 18)


def test_load_scenario_json_error():
    with pytest.raises(ScenarioError) as info:
        load_scenario('{"mode": "SEQUENTIAL",\n "agents": [}')
    assert info.value.line == 2


def test_load_scenario_semantic_errors():
    with pytest.raises(ScenarioError):
        load_scenario('{"mode": "SEQUENTIAL", "input": {"r": "4"}, "agents": []}')
    with pytest.raises(ScenarioError):
        load_scenario('{"mode": "SEQUENTIAL", "agents": [{"id": "TOF", "role": "TOF"}]}')
    with pytest.raises(ScenarioError):
        load_scenario('{"mode": "SEQUENTIAL", "input": {"r": 0.25}, "agents": [{"id": "TOF", "role": "TOF"}]}')


def test_weights_in_scenario():
    sc = scenario_from_data({"mode": "EVIDENCE_ONLY", "agents": [
        {"id": "TOF", "role": "TOF", "prior": {"generators": ["E", "H"], "weights": [12, 17, 3, 68]}}]})
    assert sc.receiver().prior == CredalState(("E", "H"), (F(12, 100), F(17, 100), F(3, 100), F(68, 100)))
    assert run_scenario(sc).final_probability() == F(12, 29)
