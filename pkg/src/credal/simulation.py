"""Seeded simulation of sender agents reporting to a receiving agent.

Senders run scripted action lists; the receiver reacts to deliveries.  Sent
messages wait in a pool and each receiver gets its messages in send order,
but which agent moves next, and when a pending message is delivered, is
chosen by a seeded random generator.  Runs are deterministic in
``(scenario, seed)``.
"""

from __future__ import annotations

import enum
import json
import random
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .belief import CondVariant, CredalState, cond_prob, likelihood_ratio
from .errors import CredalError, GuardFailed
from .lts import TransitionLabel, bc_label, step
from .meadow import RationalSyntaxError, parse as parse_rational, render
from .propspace import Atom, Not, check_atom_name
from .protocol import (
    KnowledgeBase,
    PipelineKind,
    decompose_ratio,
    knowledge_update,
    lrtmr_outline,
    novelty_check,
    run_pipeline,
    workspace_posterior,
)
from .trace import (
    Aborted,
    Applied,
    CombinedReport,
    Delivered,
    EvidenceConfirmation,
    Flagged,
    LikelihoodPairReport,
    LikelihoodRatioReport,
    LikelihoodReport,
    Message,
    Notification,
    Refused,
    ScenarioTrace,
    Sent,
)


class Mode(enum.Enum):
    SINGLE_MESSAGE = "SINGLE_MESSAGE"
    SEQUENTIAL = "SEQUENTIAL"
    PARALLEL_NAIVE = "PARALLEL_NAIVE"
    PARALLEL_NOTIFIED = "PARALLEL_NOTIFIED"
    EVIDENCE_ONLY = "EVIDENCE_ONLY"
    LRTMR = "LRTMR"


ROLES = ("TOF", "MOE", "MOE-LR", "MOE-E", "POC")


# ---------------------------------------------------------------------------
# Actions


@dataclass(frozen=True)
class Action:
    """One scripted step; ``verb`` is set, setpair, confirm, send, notify or await."""

    verb: str
    args: Tuple = ()
    text: str = ""

    def __str__(self):
        return self.text


_NAME = r"[A-Za-z][A-Za-z0-9_]*"
_NUM = r"[^,()\s]+"
_ACTION_PATTERNS = [
    ("set", re.compile(rf"set L\(({_NAME}),(!?{_NAME})\)=({_NUM})\Z")),
    ("setpair", re.compile(rf"set LP\(({_NAME}),({_NAME})\)=\(({_NUM}),({_NUM})\)\Z")),
    ("confirm", re.compile(rf"confirm ({_NAME})\Z")),
    ("send", re.compile(rf"send (LR&E|LR|LP|E|L\({_NAME},!?{_NAME}\)) -> ({_NAME}(?:-{_NAME})?)\Z")),
    ("notify", re.compile(rf"notify -> ({_NAME}(?:-{_NAME})?)\Z")),
    ("await", re.compile(r"await notify\Z")),
]


def parse_action(text: str) -> Action:
    """Parse ``set L(E,H)=4/5``, ``set LP(E,H)=(4/5,1/5)``, ``confirm E``,
    ``send LR -> TOF`` (also ``LP``, ``E``, ``LR&E``, ``L(E,!H)``),
    ``notify -> MOE-E`` and ``await notify``."""
    norm = " ".join(text.replace(" ,", ",").split())
    for verb, pat in _ACTION_PATTERNS:
        m = pat.match(norm)
        if m is None:
            continue
        args = m.groups()
        if verb == "set":
            args = (args[0], args[1], parse_rational(args[2]))
        elif verb == "setpair":
            args = (args[0], args[1], parse_rational(args[2]), parse_rational(args[3]))
        return Action(verb, tuple(args), norm)
    raise ValueError(f"unknown action {text!r}")


# ---------------------------------------------------------------------------
# Scenarios


@dataclass
class AgentSpec:
    id: str
    role: str
    prior: Optional[CredalState] = None
    behavior: List[Action] = field(default_factory=list)
    knowledge: KnowledgeBase = KnowledgeBase()


@dataclass
class Scenario:
    agents: List[AgentSpec]
    mode: Mode
    seed: int = 0
    evidence: str = "E"
    hypothesis: str = "H"
    r: Optional[Fraction] = None
    l: Optional[Fraction] = None
    l2: Optional[Fraction] = None
    descriptor: Optional[str] = None

    def agent(self, agent_id: str) -> Optional[AgentSpec]:
        for a in self.agents:
            if a.id == agent_id:
                return a
        return None

    def receiver(self) -> AgentSpec:
        for a in self.agents:
            if a.role == "TOF":
                return a
        raise ValueError("scenario has no TOF agent")

    def likelihoods(self) -> Tuple[Fraction, Fraction]:
        if self.l is not None and self.l2 is not None:
            return self.l, self.l2
        if self.r is not None:
            return decompose_ratio(self.r)
        raise ValueError("scenario input needs r or both l and l2")

    def ratio(self) -> Fraction:
        if self.r is not None:
            return self.r
        l, l2 = self.likelihoods()
        return l / l2


def default_behaviors(mode: Mode, E: str, H: str, l: Fraction, l2: Fraction,
                      receiver: str = "TOF") -> Dict[str, List[str]]:
    """Scripts for the sender agents of each reporting mode, keyed by agent id."""
    sets = [f"set L({E},{H})={render(l)}", f"set L({E},!{H})={render(l2)}"]
    if mode is Mode.SINGLE_MESSAGE:
        return {"MOE": sets + [f"confirm {E}", f"send LR&E -> {receiver}"]}
    if mode is Mode.SEQUENTIAL:
        return {"MOE": sets + [f"send LR -> {receiver}", f"confirm {E}", f"send E -> {receiver}"]}
    if mode is Mode.PARALLEL_NAIVE:
        return {"MOE-LR": sets + [f"send LR -> {receiver}"],
                "MOE-E": [f"confirm {E}", f"send E -> {receiver}"]}
    if mode is Mode.PARALLEL_NOTIFIED:
        return {"MOE-LR": sets + [f"send LR -> {receiver}", "notify -> MOE-E"],
                "MOE-E": [f"confirm {E}", "await notify", f"send E -> {receiver}"]}
    if mode is Mode.EVIDENCE_ONLY:
        return {"MOE": [f"confirm {E}", f"send E -> {receiver}"]}
    return {}


def _default_prior(agent_id: str, E: str, H: str) -> CredalState:
    if agent_id == "MOE-E":
        return CredalState.uniform((E,))
    return CredalState.uniform((E, H))


def complete_scenario(sc: Scenario) -> Scenario:
    """Fill in sender agents and scripts that the mode implies but the file omits."""
    E, H = sc.evidence, sc.hypothesis
    agents = list(sc.agents)
    tof = sc.receiver()
    if sc.mode is Mode.LRTMR:
        if sc.agent("MOE") is None:
            agents.append(AgentSpec("MOE", "MOE", _default_prior("MOE", E, H)))
        return replace(sc, agents=agents)
    needs_input = sc.mode is not Mode.EVIDENCE_ONLY
    l, l2 = sc.likelihoods() if needs_input else (Fraction(1), Fraction(1))
    for agent_id, script in default_behaviors(sc.mode, E, H, l, l2, tof.id).items():
        spec = sc.agent(agent_id)
        if spec is None:
            agents.append(AgentSpec(agent_id, agent_id, _default_prior(agent_id, E, H),
                                    [parse_action(a) for a in script]))
        elif not spec.behavior:
            idx = agents.index(spec)
            agents[idx] = replace(spec, behavior=[parse_action(a) for a in script],
                                  prior=spec.prior or _default_prior(agent_id, E, H))
    agents = [a if a.prior is not None or a.role == "TOF" else replace(a, prior=_default_prior(a.id, E, H))
              for a in agents]
    return replace(sc, agents=agents)


# ---------------------------------------------------------------------------
# Agents at run time


class _Abort(Exception):
    pass


@dataclass
class _Sender:
    spec: AgentSpec
    state: CredalState
    pc: int = 0
    notices: int = 0
    lr_memo: Optional[Fraction] = None

    @property
    def id(self):
        return self.spec.id

    def next_action(self) -> Optional[Action]:
        if self.pc < len(self.spec.behavior):
            return self.spec.behavior[self.pc]
        return None

    def enabled(self) -> bool:
        act = self.next_action()
        return act is not None and (act.verb != "await" or self.notices > 0)


@dataclass
class _Receiver:
    spec: AgentSpec
    state: CredalState
    E: str
    H: str
    expects_lr: bool
    descriptor: Optional[str]
    knowledge: KnowledgeBase
    pair: Optional[Tuple[Fraction, Fraction]] = None
    sides: set = field(default_factory=set)
    evidence_done: bool = False

    @property
    def id(self):
        return self.spec.id


class Simulation:
    """One run of a scenario under its seed."""

    def __init__(self, scenario: Scenario, max_steps: int = 10_000):
        self.sc = complete_scenario(scenario)
        self.rng = random.Random(self.sc.seed)
        self.max_steps = max_steps
        self.trace = ScenarioTrace(hypothesis=self.sc.hypothesis)
        tof = self.sc.receiver()
        if tof.prior is None:
            raise ValueError("the TOF agent needs a prior")
        self.tof = _Receiver(tof, tof.prior, self.sc.evidence, self.sc.hypothesis,
                             expects_lr=self.sc.mode is not Mode.EVIDENCE_ONLY,
                             descriptor=self.sc.descriptor, knowledge=tof.knowledge)
        self.trace.receiver = tof.id
        self.senders = [_Sender(a, a.prior) for a in self.sc.agents if a.role != "TOF"]
        self.by_id = {s.id: s for s in self.senders}
        self.pending: List[Message] = []
        self.seq = 0

    # -- sender side ------------------------------------------------------

    def _apply(self, who: str, state: CredalState, label: TransitionLabel) -> CredalState:
        try:
            new = step(state, label)
        except GuardFailed as exc:
            raise _Abort(f"{who} cannot apply {label}: {exc.__cause__ or exc}") from None
        self.trace.add(Applied(who, label, new))
        return new

    def _send(self, sender: str, receiver: str, payload) -> None:
        self.seq += 1
        msg = Message(self.seq, sender, receiver, payload)
        self.pending.append(msg)
        self.trace.add(Sent(msg))

    def _act(self, s: _Sender) -> None:
        act = s.next_action()
        s.pc += 1
        E, H = self.sc.evidence, self.sc.hypothesis
        if act.verb == "set":
            e, h, value = act.args
            hyp = Not(Atom(h[1:])) if h.startswith("!") else Atom(h)
            s.state = self._apply(s.id, s.state, TransitionLabel("SLAC", (value, Atom(e), hyp)))
            self._memo(s)
        elif act.verb == "setpair":
            e, h, value, value2 = act.args
            s.state = self._apply(s.id, s.state, TransitionLabel("DLAC", (value, value2, Atom(e), Atom(h))))
            self._memo(s)
        elif act.verb == "confirm":
            (e,) = act.args
            if e not in s.state.signature or s.state.prob(e) == 0:
                raise _Abort(f"{s.id} cannot confirm {e}")
            s.state = self._apply(s.id, s.state, bc_label(e, s.state.prob(e)))
        elif act.verb == "send":
            what, to = act.args
            self._send(s.id, to, self._payload(s, what, E, H))
        elif act.verb == "notify":
            self._send(s.id, act.args[0], Notification())
        elif act.verb == "await":
            s.notices -= 1

    def _memo(self, s: _Sender) -> None:
        E, H = self.sc.evidence, self.sc.hypothesis
        if E in s.state.signature and H in s.state.signature:
            s.lr_memo = likelihood_ratio(s.state, E, H)

    def _payload(self, s: _Sender, what: str, E: str, H: str):
        P = s.state
        try:
            if what == "E":
                if E in P.signature and P.prob(E) != 1:
                    self.trace.add(Flagged(s.id, f"reports P({E})=1 while its P({E}) = {render(P.prob(E))}"))
                return EvidenceConfirmation(E)
            if what == "LR":
                return LikelihoodRatioReport(E, H, likelihood_ratio(P, E, H))
            if what == "LP":
                return LikelihoodPairReport(E, H, cond_prob(CondVariant.ZERO, P, E, H),
                                            cond_prob(CondVariant.ZERO, P, E, Not(Atom(H))))
            if what == "LR&E":
                current = likelihood_ratio(P, E, H)
                r = s.lr_memo if s.lr_memo is not None else current
                if current != r:
                    self.trace.add(Flagged(s.id, f"reports LR({E},{H})={render(r)} while its current "
                                                 f"LR({E},{H}) = {render(current)}"))
                return CombinedReport(E, H, r)
            m = re.match(r"L\((\w+),(!?\w+)\)", what)
            e, h = m.groups()
            hyp = Not(Atom(h[1:])) if h.startswith("!") else Atom(h)
            return LikelihoodReport(e, h, cond_prob(CondVariant.ZERO, P, e, hyp))
        except CredalError as exc:
            raise _Abort(f"{s.id} cannot compute its report: {exc}") from None

    # -- receiver side ----------------------------------------------------

    def _deliver(self, receiver: str) -> None:
        msg = next(m for m in self.pending if m.receiver == receiver)
        self.pending.remove(msg)
        self.trace.add(Delivered(msg))
        if receiver == self.tof.id:
            self._receive(msg.payload)
        elif receiver in self.by_id and isinstance(msg.payload, Notification):
            self.by_id[receiver].notices += 1

    def _receive(self, payload) -> None:
        t = self.tof
        if isinstance(payload, (LikelihoodRatioReport, CombinedReport)):
            if payload.r <= 0:
                self.trace.add(Refused(t.id, f"likelihood ratio {render(payload.r)} is not positive"))
                return
            self._install_pair(*decompose_ratio(payload.r))
            if isinstance(payload, CombinedReport):
                self._evidence()
        elif isinstance(payload, LikelihoodPairReport):
            self._install_pair(payload.l, payload.l2)
        elif isinstance(payload, LikelihoodReport):
            if t.E not in t.state.signature:
                self.trace.add(Refused(t.id, f"a single likelihood needs {t.E} in the proposition space"))
                return
            neg = payload.H.startswith("!")
            hyp = Not(Atom(payload.H[1:])) if neg else Atom(payload.H)
            t.state = self._apply(t.id, t.state, TransitionLabel("SLAC", (payload.l, Atom(payload.E), hyp)))
            t.sides.add(neg)
        elif isinstance(payload, EvidenceConfirmation):
            self._evidence()

    def _install_pair(self, l: Fraction, l2: Fraction) -> None:
        t = self.tof
        if t.E in t.state.signature:
            t.state = self._apply(t.id, t.state, TransitionLabel("DLAC", (l, l2, Atom(t.E), Atom(t.H))))
        t.pair = (l, l2)
        t.sides = {False, True}

    def _evidence(self) -> None:
        t = self.tof
        if t.evidence_done:
            self.trace.add(Refused(t.id, f"evidence {t.E} was already processed"))
            return
        if t.expects_lr and t.sides != {False, True}:
            self.trace.add(Refused(t.id, f"evidence {t.E} arrived before the likelihood ratio"))
            return
        if t.descriptor is not None:
            if not novelty_check(t.knowledge, t.descriptor):
                self.trace.add(Refused(t.id, f"evidence {t.descriptor!r} was already used"))
                return
            t.knowledge = knowledge_update(t.knowledge, t.E, t.descriptor)
        if t.E in t.state.signature:
            p = t.state.prob(t.E)
            if p == 0:
                self.trace.add(Refused(t.id, f"P({t.E}) = 0, cannot condition"))
                return
            t.state = self._apply(t.id, t.state, bc_label(t.E, p))
        elif t.pair is not None:
            p_hat = workspace_posterior(t.state, t.E, t.H, *t.pair)
            t.state = self._apply(t.id, t.state, TransitionLabel("JC", (p_hat, Atom(t.H))))
        else:
            self.trace.add(Refused(t.id, f"{t.E} is outside the proposition space and no likelihoods arrived"))
            return
        t.evidence_done = True

    # -- scheduling -------------------------------------------------------

    def moves(self) -> List[Tuple[str, str]]:
        out = [("act", s.id) for s in self.senders if s.enabled()]
        receivers = []
        for m in self.pending:
            if m.receiver not in receivers:
                receivers.append(m.receiver)
        out += [("deliver", r) for r in receivers]
        return out

    def run(self) -> ScenarioTrace:
        if self.sc.mode is Mode.LRTMR:
            moe = self.sc.agent("MOE")
            trace = lrtmr_outline(self.tof.state, moe.prior, self.sc.evidence, self.sc.hypothesis,
                                  knowledge=self.tof.knowledge, descriptor=self.sc.descriptor,
                                  tof=self.tof.id, moe=moe.id)
            return trace
        try:
            for _ in range(self.max_steps):
                options = self.moves()
                if not options:
                    break
                kind, who = self.rng.choice(options)
                if kind == "act":
                    self._act(self.by_id[who])
                else:
                    self._deliver(who)
            stuck = [s.id for s in self.senders if s.next_action() is not None]
            if stuck:
                self.trace.add(Aborted(f"agents blocked before finishing: {', '.join(stuck)}"))
        except _Abort as exc:
            self.trace.add(Aborted(str(exc)))
        self.trace.final_state = self.tof.state
        self.trace.knowledge = self.tof.knowledge
        return self.trace


def run_scenario(scenario: Scenario) -> ScenarioTrace:
    return Simulation(scenario).run()


def run_moe_mode(mode: Mode, scenario: Scenario, seed: Optional[int] = None) -> ScenarioTrace:
    """Run ``scenario`` under a given reporting mode (and optionally another seed)."""
    sc = replace(scenario, mode=Mode(mode))
    if seed is not None:
        sc = replace(sc, seed=seed)
    return run_scenario(sc)


def expected_posterior(scenario: Scenario) -> CredalState:
    """The receiver's state after the pipeline matching its proposition space."""
    tof = scenario.receiver().prior
    kind = (PipelineKind.DLAC_THEN_BC if scenario.evidence in tof.signature
            else PipelineKind.KINETICS_BC_THEN_JEFFREY)
    return run_pipeline(kind, tof, scenario.evidence, scenario.hypothesis, r=scenario.ratio())


def evidence_first(trace: ScenarioTrace, receiver: str = "TOF") -> bool:
    """Whether the evidence confirmation reached ``receiver`` before any likelihood information."""
    for payload in trace.delivered_payloads(receiver):
        if isinstance(payload, EvidenceConfirmation):
            return True
        if isinstance(payload, (LikelihoodRatioReport, LikelihoodPairReport, CombinedReport)):
            return False
    return False


# ---------------------------------------------------------------------------
# Scenario files


class ScenarioError(ValueError):
    """Invalid scenario input, with a 1-based position in the source text when known."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


def _locate(text: str, needle: str) -> Tuple[Optional[int], Optional[int]]:
    idx = text.find(json.dumps(needle))
    if idx < 0:
        idx = text.find(needle)
    if idx < 0:
        return None, None
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1) + 1
    return line, col


def _rational(value) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise RationalSyntaxError(repr(value))
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise RationalSyntaxError(repr(value))


def state_from_data(data) -> CredalState:
    """A credal state from ``{"generators": [...], "mass": [...]}`` (or ``"weights"``)."""
    gens = data["generators"]
    if "weights" in data:
        return CredalState.from_weights(gens, [_rational(w) for w in data["weights"]])
    return CredalState(tuple(gens), tuple(_rational(m) for m in data["mass"]))


def scenario_from_data(data) -> Scenario:
    agents = []
    for raw in data.get("agents", []):
        role = raw.get("role", raw["id"])
        if role not in ROLES:
            raise ValueError(f"unknown role {role!r}")
        prior = state_from_data(raw["prior"]) if "prior" in raw else None
        behavior = [parse_action(a) for a in raw.get("behavior", [])]
        kb = KnowledgeBase(frozenset((str(e), str(d)) for e, d in raw.get("knowledge", [])))
        agents.append(AgentSpec(raw["id"], role, prior, behavior, kb))
    inp = data.get("input", {})
    sc = Scenario(
        agents=agents,
        mode=Mode(data.get("mode", "SEQUENTIAL")),
        seed=int(data.get("seed", 0)),
        evidence=check_atom_name(data.get("evidence", "E")),
        hypothesis=check_atom_name(data.get("hypothesis", "H")),
        r=_rational(inp["r"]) if "r" in inp else None,
        l=_rational(inp["l"]) if "l" in inp else None,
        l2=_rational(inp["l2"]) if "l2" in inp else None,
        descriptor=data.get("descriptor"),
    )
    sc.receiver()
    if sc.mode not in (Mode.EVIDENCE_ONLY, Mode.LRTMR):
        sc.likelihoods()
    return sc


def load_scenario(text: str) -> Scenario:
    """Parse a JSON scenario, reporting positions of malformed input."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(exc.msg, exc.lineno, exc.colno) from None
    try:
        return scenario_from_data(data)
    except RationalSyntaxError as exc:
        line, col = _locate(text, exc.text)
        raise ScenarioError(str(exc), line, col) from None
    except (KeyError, TypeError) as exc:
        raise ScenarioError(f"missing or malformed field: {exc}") from None
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None


TAXI_PRIOR = CredalState(("E", "H"), (Fraction(12, 100), Fraction(17, 100), Fraction(3, 100), Fraction(68, 100)))
"""Receiver prior of the taxi case: ``P(H) = 3/20``, ``P(E | H) = 4/5``, ``P(E | !H) = 1/5``."""

BUILTIN_SCENARIOS = {
    "taxi": {
        "mode": "EVIDENCE_ONLY", "seed": 0, "evidence": "E", "hypothesis": "H",
        "agents": [{"id": "TOF", "role": "TOF", "prior": TAXI_PRIOR.to_json()}],
    },
    "moe-parallel": {
        "mode": "PARALLEL_NOTIFIED", "seed": 0, "evidence": "E", "hypothesis": "H",
        "input": {"l": "4/5", "l2": "1/5"},
        "agents": [{"id": "TOF", "role": "TOF",
                    "prior": {"generators": ["H"], "mass": ["3/20", "17/20"]}}],
    },
    "moe-naive": {
        "mode": "PARALLEL_NAIVE", "seed": 0, "evidence": "E", "hypothesis": "H",
        "input": {"l": "4/5", "l2": "1/5"},
        "agents": [{"id": "TOF", "role": "TOF", "prior": TAXI_PRIOR.to_json()}],
    },
    "lrtmr": {
        "mode": "LRTMR", "evidence": "E", "hypothesis": "H",
        "agents": [{"id": "TOF", "role": "TOF", "prior": TAXI_PRIOR.to_json()},
                   {"id": "MOE", "role": "MOE", "prior": {"generators": ["E", "H"],
                                                          "mass": ["2/5", "1/10", "1/10", "2/5"]}}],
    },
}


def builtin_scenario(name: str) -> Scenario:
    return scenario_from_data(BUILTIN_SCENARIOS[name])


__all__ = [
    "Action", "AgentSpec", "BUILTIN_SCENARIOS", "Mode", "Scenario", "ScenarioError", "Simulation",
    "TAXI_PRIOR", "builtin_scenario", "complete_scenario", "default_behaviors", "evidence_first",
    "expected_posterior", "load_scenario", "parse_action", "run_moe_mode", "run_scenario",
    "scenario_from_data", "state_from_data",
]
