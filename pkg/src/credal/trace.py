"""Messages exchanged between agents and the event traces of a run."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Union

from .belief import CredalState
from .meadow import render
from .propspace import Sentence, render as render_sentence


def _s(x: Union[str, Sentence]) -> str:
    return x if isinstance(x, str) else render_sentence(x)


# -- payloads ---------------------------------------------------------------

@dataclass(frozen=True)
class LikelihoodReport:
    E: str
    H: str
    l: Fraction

    def __str__(self):
        return f"L({_s(self.E)},{_s(self.H)})={render(self.l)}"


@dataclass(frozen=True)
class LikelihoodRatioReport:
    E: str
    H: str
    r: Fraction

    def __str__(self):
        return f"LR({_s(self.E)},{_s(self.H)})={render(self.r)}"


@dataclass(frozen=True)
class LikelihoodPairReport:
    E: str
    H: str
    l: Fraction
    l2: Fraction

    def __str__(self):
        return f"LP({_s(self.E)},{_s(self.H)})=({render(self.l)},{render(self.l2)})"


@dataclass(frozen=True)
class EvidenceConfirmation:
    E: str

    def __str__(self):
        return f"P({_s(self.E)})=1"


@dataclass(frozen=True)
class CombinedReport:
    E: str
    H: str
    r: Fraction

    def __str__(self):
        return f"LR({_s(self.E)},{_s(self.H)})={render(self.r)} & P({_s(self.E)})=1"


@dataclass(frozen=True)
class Notification:
    def __str__(self):
        return "NOTIFY"


Payload = Union[LikelihoodReport, LikelihoodRatioReport, LikelihoodPairReport,
                EvidenceConfirmation, CombinedReport, Notification]


@dataclass(frozen=True)
class Message:
    seq: int
    sender: str
    receiver: str
    payload: Payload

    def __str__(self):
        return f"#{self.seq} {self.sender} -> {self.receiver}: {self.payload}"


# -- events -----------------------------------------------------------------

@dataclass(frozen=True)
class Sent:
    message: Message

    def line(self):
        return f"SENT {self.message}"


@dataclass(frozen=True)
class Delivered:
    message: Message

    def line(self):
        return f"DELIVERED {self.message}"


@dataclass(frozen=True)
class Applied:
    agent: str
    label: object
    state: CredalState

    def line(self):
        return f"APPLIED {self.agent} {self.label} {self.state}"


@dataclass(frozen=True)
class Aborted:
    reason: str

    def line(self):
        return f"ABORTED {self.reason}"


@dataclass(frozen=True)
class Refused:
    agent: str
    reason: str

    def line(self):
        return f"REFUSED {self.agent}: {self.reason}"


@dataclass(frozen=True)
class Flagged:
    """A noted anomaly that does not stop the run."""

    agent: str
    reason: str

    def line(self):
        return f"FLAGGED {self.agent}: {self.reason}"


Event = Union[Sent, Delivered, Applied, Aborted, Refused, Flagged]


@dataclass
class ScenarioTrace:
    """Ordered events of one run plus the final state of the receiving agent."""

    events: List[Event] = field(default_factory=list)
    final_state: Optional[CredalState] = None
    hypothesis: Optional[str] = None
    receiver: str = "TOF"
    knowledge: object = None

    def add(self, event: Event) -> None:
        self.events.append(event)

    @property
    def aborted(self) -> bool:
        return any(isinstance(e, Aborted) for e in self.events)

    @property
    def refused(self) -> bool:
        return any(isinstance(e, Refused) for e in self.events)

    @property
    def clean(self) -> bool:
        return not (self.aborted or self.refused)

    def of_type(self, kind) -> list:
        return [e for e in self.events if isinstance(e, kind)]

    def delivered_payloads(self, receiver: Optional[str] = None) -> list:
        return [e.message.payload for e in self.of_type(Delivered)
                if receiver is None or e.message.receiver == receiver]

    def final_probability(self) -> Optional[Fraction]:
        if self.final_state is None or self.hypothesis is None:
            return None
        if self.hypothesis not in self.final_state.signature:
            return None
        return self.final_state.prob(self.hypothesis)

    def lines(self) -> List[str]:
        out = [e.line() for e in self.events]
        value = self.final_probability()
        if value is not None:
            out.append(f"FINAL {self.receiver} P({self.hypothesis}) = {render(value)}")
        return out

    def __str__(self):
        return "\n".join(self.lines())
